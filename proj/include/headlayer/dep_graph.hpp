#ifndef HEADLAYER_DEP_GRAPH_HPP
#define HEADLAYER_DEP_GRAPH_HPP

#include <string>
#include <vector>

#include "headlayer/error.hpp"

namespace headlayer {

// Single-rooted dependency tree over tokens 1..n with artificial root 0.
// heads[i-1] is the governor of token i.
struct DepGraph {
  int n = 0;
  std::vector<int> heads;
  std::vector<std::string> rels;
  std::vector<std::string> forms;
  std::vector<std::string> pos;

  int head_of(int token) const { return heads[token - 1]; }
};

// Checks the single-root tree invariants. Returns "" when valid, otherwise
// one of "dangling-head", "multiroot", "cycle". Reasons are checked in that
// order so each sentence gets exactly one.
inline std::string dep_tree_violation(const DepGraph& g) {
  for (int i = 1; i <= g.n; ++i) {
    int h = g.head_of(i);
    if (h < 0 || h > g.n) return "dangling-head";
  }
  int roots = 0;
  for (int i = 1; i <= g.n; ++i)
    if (g.head_of(i) == 0) ++roots;
  if (roots > 1) return "multiroot";
  // Zero roots implies a cycle among 1..n; reachability catches both.
  std::vector<std::vector<int>> deps(g.n + 1);
  for (int i = 1; i <= g.n; ++i) deps[g.head_of(i)].push_back(i);
  std::vector<bool> seen(g.n + 1, false);
  std::vector<int> stack = {0};
  seen[0] = true;
  int reached = 0;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : deps[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  if (reached != g.n) return "cycle";
  return "";
}

inline void validate_dep_graph(const DepGraph& g, int sentence_index) {
  std::string reason = dep_tree_violation(g);
  if (!reason.empty())
    throw Error(ErrorKind::NonTreeStructure,
                "sentence " + std::to_string(sentence_index) + ": " + reason);
}

}  // namespace headlayer

#endif
