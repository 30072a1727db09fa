#ifndef HEADLAYER_HEAD_ASSIGNMENT_HPP
#define HEADLAYER_HEAD_ASSIGNMENT_HPP

#include <sstream>
#include <string>
#include <vector>

#include "headlayer/error.hpp"
#include "headlayer/tree.hpp"

namespace headlayer {

// Head-child index (1-based position within the child list) for every
// nonterminal node of one tree, keyed by arena node id.
class HeadAssignment {
 public:
  HeadAssignment() = default;
  explicit HeadAssignment(int node_count) : index_(node_count, 0) {}

  void set(int node_id, int head_index) {
    if (node_id >= static_cast<int>(index_.size())) index_.resize(node_id + 1, 0);
    index_[node_id] = head_index;
  }

  bool has(int node_id) const {
    return node_id < static_cast<int>(index_.size()) && index_[node_id] > 0;
  }

  int at(int node_id) const {
    if (!has(node_id))
      throw Error(ErrorKind::MissingHead, "no head for node " + std::to_string(node_id));
    return index_[node_id];
  }

  // Head child's node id.
  int head_child(const ConstTree& tree, int node_id) const {
    return tree.node(node_id).children[at(node_id) - 1];
  }

  bool operator==(const HeadAssignment& other) const {
    size_t n = std::max(index_.size(), other.index_.size());
    for (size_t i = 0; i < n; ++i) {
      int a = i < index_.size() ? index_[i] : 0;
      int b = i < other.index_.size() ? other.index_[i] : 0;
      if (a != b) return false;
    }
    return true;
  }

 private:
  std::vector<int> index_;  // 0 = unset
};

// Sidecar text format: one line per sentence, space-separated
// "preorderIndex:headIndex" pairs, preorder counted over nonterminals only.
inline std::string format_sidecar_line(const ConstTree& tree, const HeadAssignment& heads) {
  std::string out;
  std::vector<int> order = tree.nonterminals_preorder();
  for (size_t i = 0; i < order.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(i);
    out += ':';
    out += std::to_string(heads.at(order[i]));
  }
  return out;
}

inline HeadAssignment parse_sidecar_line(const ConstTree& tree, const std::string& line,
                                         int line_no = 0) {
  std::vector<int> order = tree.nonterminals_preorder();
  HeadAssignment heads(tree.size());
  std::istringstream ss(line);
  std::string pair;
  size_t seen = 0;
  while (ss >> pair) {
    size_t colon = pair.find(':');
    if (colon == std::string::npos)
      throw Error(ErrorKind::BadSidecar, "line " + std::to_string(line_no) + ": bad pair \"" + pair + "\"");
    int pre = -1, idx = -1;
    try {
      pre = std::stoi(pair.substr(0, colon));
      idx = std::stoi(pair.substr(colon + 1));
    } catch (const std::exception&) {
      throw Error(ErrorKind::BadSidecar, "line " + std::to_string(line_no) + ": bad pair \"" + pair + "\"");
    }
    if (pre < 0 || pre >= static_cast<int>(order.size()))
      throw Error(ErrorKind::BadSidecar,
                  "line " + std::to_string(line_no) + ": preorder index " + std::to_string(pre) +
                      " out of range");
    int node = order[pre];
    int arity = static_cast<int>(tree.node(node).children.size());
    if (idx < 1 || idx > arity)
      throw Error(ErrorKind::BadSidecar,
                  "line " + std::to_string(line_no) + ": head index " + std::to_string(idx) +
                      " out of range for node with " + std::to_string(arity) + " children");
    if (heads.has(node))
      throw Error(ErrorKind::BadSidecar, "line " + std::to_string(line_no) +
                                             ": duplicate entry for preorder index " +
                                             std::to_string(pre));
    heads.set(node, idx);
    ++seen;
  }
  if (seen != order.size())
    throw Error(ErrorKind::BadSidecar,
                "line " + std::to_string(line_no) + ": " + std::to_string(seen) + " pairs for " +
                    std::to_string(order.size()) + " nonterminals");
  return heads;
}

}  // namespace headlayer

#endif
