// Receiver-side replay of a collision resolution interval.
//
// Every node of the tree stands for a signal: the superposition of the
// packets of the users in its subtree. The receiver keeps every signal it has
// obtained and the set of users it has decoded. Nodes are scheduled
// depth-first in group order, starting with the root. When a node comes up:
//
//  * it is discarded (no slot) if its parent's signal has nothing left to
//    decode; for the root this is the end of the interval;
//  * it is derived (no slot) if every sibling signal is already in hand and
//    fully decoded, because the node's signal is then the parent's residual;
//  * otherwise its group transmits and one slot is spent (idle, singleton or
//    collision).
//
// After every new signal or decode the SIC cascade runs: any held signal with
// exactly one undecoded packet yields that packet. Children of a collision
// signal, transmitted or derived, are pushed in group order.

#include <cstdint>
#include <ranges>
#include <vector>

#include "sicta/evaluators.hpp"

namespace sicta {

namespace {

constexpr NodeId kNoParent = static_cast<NodeId>(-1);

class Receiver {
 public:
  explicit Receiver(const SplitTree& tree) : tree_(tree), state_(tree.size()) {
    // Users are numbered in pre-order so each node owns a contiguous id
    // range; leaf_of_ maps a user back to its singleton leaf.
    number_users(SplitTree::kRoot, kNoParent);
    decoded_.assign(leaf_of_.size(), false);
  }

  CriBreakdown run() {
    std::vector<NodeId> schedule{SplitTree::kRoot};
    while (!schedule.empty()) {
      const NodeId id = schedule.back();
      schedule.pop_back();
      const NodeId parent = state_[id].parent;
      if (parent != kNoParent && state_[parent].residual == 0) continue;

      state_[id].held = true;
      if (derivable(id)) {
        ++out_.derived_signals;
      } else {
        transmit(id);
        if (tree_.occupancy(id) == 1) decode(state_[id].first_user);
      }
      cascade_from(id);
      if (state_[SplitTree::kRoot].residual == 0) break;

      if (!tree_.is_leaf(id)) {
        for (NodeId c : tree_.children(id) | std::views::reverse) schedule.push_back(c);
      }
    }
    out_.total_slots = out_.collision_slots + out_.singleton_slots + out_.idle_slots;
    return out_;
  }

 private:
  struct NodeState {
    NodeId parent = kNoParent;
    int first_user = 0;
    int residual = 0;            // undecoded packets in this signal
    std::int64_t residual_sum = 0;  // sum of their user ids
    bool held = false;
  };

  void number_users(NodeId id, NodeId parent) {
    NodeState& s = state_[id];
    s.parent = parent;
    s.first_user = static_cast<int>(leaf_of_.size());
    s.residual = tree_.occupancy(id);
    if (tree_.is_leaf(id)) {
      if (s.residual == 1) {
        s.residual_sum = s.first_user;
        leaf_of_.push_back(id);
      }
      return;
    }
    for (NodeId c : tree_.children(id)) {
      number_users(c, id);
      state_[id].residual_sum += state_[c].residual_sum;
    }
  }

  bool derivable(NodeId id) const {
    const NodeId parent = state_[id].parent;
    if (parent == kNoParent) return false;
    for (NodeId sib : tree_.children(parent)) {
      if (sib == id) continue;
      if (!state_[sib].held || state_[sib].residual != 0) return false;
    }
    return true;
  }

  void transmit(NodeId id) {
    switch (tree_.occupancy(id)) {
      case 0:
        ++out_.idle_slots;
        break;
      case 1:
        ++out_.singleton_slots;
        break;
      default:
        ++out_.collision_slots;
    }
  }

  // Marks a user decoded and cancels its packet from every signal on its
  // leaf-to-root path, then lets any held signal on that path that is down to
  // one packet give up the last one.
  void decode(int user) {
    std::vector<int> pending{user};
    bool first = true;
    while (!pending.empty()) {
      const int u = pending.back();
      pending.pop_back();
      if (decoded_[u]) continue;
      decoded_[u] = true;
      if (!first) ++out_.sic_recoveries;
      first = false;
      for (NodeId at = leaf_of_[u]; at != kNoParent; at = state_[at].parent) {
        --state_[at].residual;
        state_[at].residual_sum -= u;
      }
      for (NodeId at = leaf_of_[u]; at != kNoParent; at = state_[at].parent) {
        const NodeState& s = state_[at];
        if (s.held && s.residual == 1) pending.push_back(static_cast<int>(s.residual_sum));
      }
    }
  }

  // A freshly held signal may already be down to one packet.
  void cascade_from(NodeId id) {
    const NodeState& s = state_[id];
    if (s.residual == 1) {
      const int u = static_cast<int>(s.residual_sum);
      ++out_.sic_recoveries;
      // decode() counts only the knock-on recoveries after its first user.
      decode(u);
    }
  }

  const SplitTree& tree_;
  std::vector<NodeState> state_;
  std::vector<NodeId> leaf_of_;
  std::vector<bool> decoded_;
  CriBreakdown out_;
};

}  // namespace

CriBreakdown slot_level_cri(const SplitTree& tree) { return Receiver(tree).run(); }

}  // namespace sicta
