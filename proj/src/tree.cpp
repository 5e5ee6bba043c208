#include "sicta/tree.hpp"

#include <algorithm>
#include <cctype>

namespace sicta {

SplitTree SplitTree::leaf(int n) {
  if (n < 0 || n > 1) throw ContractViolation("leaf: occupancy must be 0 or 1");
  SplitTree tree;
  tree.nodes_.push_back({n, 0});
  return tree;
}

// Recursive-descent reader for the pre-order text form. Builds a nested
// intermediate and then lays it out breadth-first so children stay
// contiguous, matching generate().
class TreeParser {
 public:
  explicit TreeParser(std::string_view text) : text_(text) {}

  SplitTree run() {
    Parsed root = node();
    skip_space();
    if (pos_ != text_.size()) fail("trailing characters");

    SplitTree tree;
    std::vector<const Parsed*> order{&root};
    tree.nodes_.push_back({root.occupancy, 0});
    for (std::size_t i = 0; i < order.size(); ++i) {
      const Parsed* p = order[i];
      if (p->children.empty()) continue;
      if (tree.d_ == 0) tree.d_ = static_cast<int>(p->children.size());
      if (static_cast<int>(p->children.size()) != tree.d_) {
        fail("every collision node needs the same number of children");
      }
      tree.nodes_[i].first_child = static_cast<std::uint32_t>(tree.nodes_.size());
      for (const Parsed& c : p->children) {
        order.push_back(&c);
        tree.nodes_.push_back({c.occupancy, 0});
      }
    }
    tree.validate();
    return tree;
  }

 private:
  struct Parsed {
    int occupancy = 0;
    std::vector<Parsed> children;
  };

  Parsed node() {
    skip_space();
    Parsed p;
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      p.occupancy = p.occupancy * 10 + (text_[pos_] - '0');
      ++pos_;
    }
    if (pos_ == start) fail("expected an occupancy");
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      p.children.push_back(node());
      skip_space();
      while (pos_ < text_.size() && text_[pos_] == ',') {
        ++pos_;
        p.children.push_back(node());
        skip_space();
      }
      if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')'");
      ++pos_;
    }
    return p;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw ValidationError("cannot parse tree '" + std::string(text_) + "' at offset " +
                          std::to_string(pos_) + ": " + why);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

SplitTree SplitTree::parse(std::string_view text) { return TreeParser(text).run(); }

void SplitTree::validate() const {
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    const Node& node = nodes_[id];
    const bool has_children = node.first_child != 0;
    if (node.occupancy <= 1 && has_children) {
      throw ValidationError("node with occupancy <= 1 must be a leaf");
    }
    if (node.occupancy >= 2) {
      if (!has_children) throw ValidationError("collision node without children");
      int sum = 0;
      for (NodeId c : children(id)) sum += nodes_[c].occupancy;
      if (sum != node.occupancy) {
        throw ValidationError("children occupancies do not sum to the parent's");
      }
    }
  }
}

int SplitTree::internal_count() const noexcept {
  return static_cast<int>(std::count_if(nodes_.begin(), nodes_.end(),
                                        [](const Node& n) { return n.occupancy >= 2; }));
}

int SplitTree::height() const {
  std::vector<int> depth(nodes_.size(), 0);
  int height = 0;
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    height = std::max(height, depth[id]);
    for (NodeId c : children(id)) depth[c] = depth[id] + 1;
  }
  return height;
}

namespace {

void write_node(const SplitTree& tree, NodeId id, std::string& out) {
  out += std::to_string(tree.occupancy(id));
  if (tree.is_leaf(id)) return;
  out += '(';
  bool first = true;
  for (NodeId c : tree.children(id)) {
    if (!first) out += ',';
    first = false;
    write_node(tree, c, out);
  }
  out += ')';
}

}  // namespace

std::string SplitTree::to_string() const {
  std::string out;
  write_node(*this, kRoot, out);
  return out;
}

}  // namespace sicta
