#pragma once

#include <cstdint>
#include <ranges>
#include <string>
#include <string_view>
#include <vector>

#include "sicta/errors.hpp"
#include "sicta/policy.hpp"

namespace sicta {

inline constexpr int kDefaultMaxDepth = 10'000;

using NodeId = std::uint32_t;

class SplitTree;

/// Grows the tree for n contenders by repeated multinomial splits.
/// Throws DepthExceeded if some collision node would sit below max_depth.
template <class Urbg>
SplitTree generate(int n, const SplitPolicy& policy, Urbg& rng,
                   int max_depth = kDefaultMaxDepth);

/// A fully expanded random splitting tree.
///
/// Nodes live in one arena; the children of an internal node are stored
/// contiguously in group order 1..d. Every collision node (occupancy >= 2)
/// has all d children expanded, including groups that a SIC receiver would
/// never visit, so every evaluator sees the same realization.
class SplitTree {
 public:
  static constexpr NodeId kRoot = 0;

  /// Single leaf holding n <= 1 users.
  static SplitTree leaf(int n);

  /// Parses the pre-order text form, e.g. "2(0,0,2(1,1,0))".
  static SplitTree parse(std::string_view text);

  int d() const noexcept { return d_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  int occupancy(NodeId id) const { return nodes_[id].occupancy; }
  bool is_leaf(NodeId id) const { return nodes_[id].occupancy <= 1; }
  int root_occupancy() const { return nodes_[kRoot].occupancy; }

  /// Children of `id` in group order; empty for leaves.
  std::ranges::iota_view<NodeId, NodeId> children(NodeId id) const {
    const Node& node = nodes_[id];
    if (node.occupancy <= 1) return {node.first_child, node.first_child};
    return {node.first_child, node.first_child + static_cast<NodeId>(d_)};
  }

  /// Number of collision (occupancy >= 2) nodes.
  int internal_count() const noexcept;
  int height() const;

  /// Pre-order text form; inverse of parse().
  std::string to_string() const;

 private:
  friend class TreeParser;

  struct Node {
    int occupancy = 0;
    std::uint32_t first_child = 0;
  };

  SplitTree() = default;
  void validate() const;

  int d_ = 0;
  std::vector<Node> nodes_;

  template <class Urbg>
  friend SplitTree generate(int, const SplitPolicy&, Urbg&, int);
};

template <class Urbg>
SplitTree generate(int n, const SplitPolicy& policy, Urbg& rng, int max_depth) {
  if (n < 0) throw ContractViolation("generate: n must be >= 0");
  if (max_depth < 1) throw ContractViolation("generate: max_depth must be >= 1");
  const int d = policy.d();
  SplitTree tree;
  tree.d_ = d;
  tree.nodes_.push_back({n, 0});
  std::vector<int> depth{0};
  std::vector<int> counts(d);
  for (std::size_t i = 0; i < tree.nodes_.size(); ++i) {
    const int occ = tree.nodes_[i].occupancy;
    if (occ <= 1) continue;
    const int child_depth = depth[i] + 1;
    if (child_depth > max_depth) throw DepthExceeded(child_depth, max_depth);
    std::fill(counts.begin(), counts.end(), 0);
    for (int u = 0; u < occ; ++u) ++counts[sample_group(policy, rng)];
    tree.nodes_[i].first_child = static_cast<std::uint32_t>(tree.nodes_.size());
    for (int j = 0; j < d; ++j) {
      tree.nodes_.push_back({counts[j], 0});
      depth.push_back(child_depth);
    }
  }
  return tree;
}

}  // namespace sicta
