#ifndef HEADLAYER_TREE_HPP
#define HEADLAYER_TREE_HPP

#include <string>
#include <utility>
#include <vector>

#include "headlayer/error.hpp"

namespace headlayer {

// Ordered constituency tree stored as a node arena. Preterminals carry the
// POS tag in `label`, the word form in `word`, and a 1-based token index.
// Nonterminal labels are stored raw; normalization happens at use sites.
struct TreeNode {
  std::string label;
  std::vector<int> children;  // empty for preterminals
  std::string word;           // preterminal only
  int token_index = 0;        // preterminal only, 1-based
  bool preterminal = false;
};

class ConstTree {
 public:
  int add_preterminal(std::string tag, std::string word, int token_index) {
    TreeNode n;
    n.label = std::move(tag);
    n.word = std::move(word);
    n.token_index = token_index;
    n.preterminal = true;
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }

  int add_nonterminal(std::string label, std::vector<int> children) {
    TreeNode n;
    n.label = std::move(label);
    n.children = std::move(children);
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }

  void set_root(int id) { root_ = id; }
  int root() const { return root_; }
  bool empty() const { return root_ < 0; }

  const TreeNode& node(int id) const { return nodes_[id]; }
  int size() const { return static_cast<int>(nodes_.size()); }

  bool is_preterminal(int id) const { return nodes_[id].preterminal; }

  // Token count = number of preterminals.
  int token_count() const {
    int n = 0;
    for (const TreeNode& nd : nodes_) n += nd.preterminal ? 1 : 0;
    return n;
  }

  // Preterminal node ids in token order.
  std::vector<int> preterminals() const {
    std::vector<int> out;
    collect_preterminals(root_, out);
    return out;
  }

  // Nonterminal node ids in preorder (root first, children left to right).
  std::vector<int> nonterminals_preorder() const {
    std::vector<int> out;
    collect_nonterminals(root_, out);
    return out;
  }

  // Contiguous token interval [first, last] dominated by each node,
  // indexed by node id.
  std::vector<std::pair<int, int>> yield_spans() const {
    std::vector<std::pair<int, int>> spans(nodes_.size(), {0, -1});
    compute_span(root_, spans);
    return spans;
  }

 private:
  void collect_preterminals(int id, std::vector<int>& out) const {
    if (id < 0) return;
    const TreeNode& n = nodes_[id];
    if (n.preterminal) {
      out.push_back(id);
      return;
    }
    for (int c : n.children) collect_preterminals(c, out);
  }

  void collect_nonterminals(int id, std::vector<int>& out) const {
    if (id < 0) return;
    const TreeNode& n = nodes_[id];
    if (n.preterminal) return;
    out.push_back(id);
    for (int c : n.children) collect_nonterminals(c, out);
  }

  std::pair<int, int> compute_span(int id, std::vector<std::pair<int, int>>& spans) const {
    const TreeNode& n = nodes_[id];
    if (n.preterminal) {
      spans[id] = {n.token_index, n.token_index};
      return spans[id];
    }
    int lo = 0, hi = -1;
    for (int c : n.children) {
      auto s = compute_span(c, spans);
      if (hi < 0) {
        lo = s.first;
        hi = s.second;
      } else {
        hi = s.second;
      }
    }
    spans[id] = {lo, hi};
    return spans[id];
  }

  std::vector<TreeNode> nodes_;
  int root_ = -1;
};

inline bool structural_equal(const ConstTree& a, int ida, const ConstTree& b, int idb) {
  const TreeNode& na = a.node(ida);
  const TreeNode& nb = b.node(idb);
  if (na.preterminal != nb.preterminal || na.label != nb.label) return false;
  if (na.preterminal) return na.word == nb.word && na.token_index == nb.token_index;
  if (na.children.size() != nb.children.size()) return false;
  for (size_t i = 0; i < na.children.size(); ++i)
    if (!structural_equal(a, na.children[i], b, nb.children[i])) return false;
  return true;
}

inline bool structural_equal(const ConstTree& a, const ConstTree& b) {
  if (a.empty() || b.empty()) return a.empty() == b.empty();
  return structural_equal(a, a.root(), b, b.root());
}

inline bool has_intermediate_nodes(const ConstTree& t) {
  for (int id : t.nonterminals_preorder())
    if (!t.node(id).label.empty() && t.node(id).label[0] == '@') return true;
  return false;
}

}  // namespace headlayer

#endif
