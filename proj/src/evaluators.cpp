#include "sicta/evaluators.hpp"

#include <string>

namespace sicta {

int d_min(std::span<const int> counts, int n) {
  if (n < 2) throw ContractViolation("d_min: n must be >= 2");
  int cum = 0;
  int total = 0;
  int result = 0;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (counts[j] < 0) throw ContractViolation("d_min: negative group count");
    total += counts[j];
    if (result == 0) {
      cum += counts[j];
      if (cum >= n - 1) result = static_cast<int>(j) + 1;
    }
  }
  if (total != n) {
    throw ContractViolation("d_min: occupancy sums to " + std::to_string(total) +
                            ", expected " + std::to_string(n));
  }
  return result;
}

namespace {

int corrected_at(const SplitTree& tree, NodeId id) {
  const int n = tree.occupancy(id);
  if (n <= 1) return 1;
  const auto kids = tree.children(id);
  int cum = 0;
  int length = 1;
  int visited = 0;
  for (NodeId c : kids) {
    length += corrected_at(tree, c);
    ++visited;
    cum += tree.occupancy(c);
    if (cum >= n - 1) break;
  }
  if (visited == static_cast<int>(kids.size())) --length;
  return length;
}

int yg_at(const SplitTree& tree, NodeId id) {
  if (tree.is_leaf(id)) return 1;
  int length = 0;
  for (NodeId c : tree.children(id)) length += yg_at(tree, c);
  return length;
}

int standard_at(const SplitTree& tree, NodeId id) {
  if (tree.is_leaf(id)) return 1;
  int length = 1;
  for (NodeId c : tree.children(id)) length += standard_at(tree, c);
  return length;
}

}  // namespace

int corrected_length(const SplitTree& tree) { return corrected_at(tree, SplitTree::kRoot); }
int yg_length(const SplitTree& tree) { return yg_at(tree, SplitTree::kRoot); }
int standard_ta_length(const SplitTree& tree) { return standard_at(tree, SplitTree::kRoot); }

}  // namespace sicta
