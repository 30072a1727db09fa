#ifndef HEADLAYER_TREEBANK_HPP
#define HEADLAYER_TREEBANK_HPP

#include <string>
#include <vector>

#include "headlayer/dep_graph.hpp"
#include "headlayer/error.hpp"
#include "headlayer/labels.hpp"
#include "headlayer/tree.hpp"

namespace headlayer {

namespace detail {

// Copies the subtree at `id` into `out`, dropping -NONE- preterminals and any
// nonterminal left childless. Returns the new id or -1 when fully removed.
inline int strip_empties_rec(const ConstTree& in, int id, ConstTree& out, int& next_token) {
  const TreeNode& n = in.node(id);
  if (n.preterminal) {
    if (n.label == "-NONE-") return -1;
    return out.add_preterminal(n.label, n.word, ++next_token);
  }
  std::vector<int> kids;
  for (int c : n.children) {
    int nc = strip_empties_rec(in, c, out, next_token);
    if (nc >= 0) kids.push_back(nc);
  }
  if (kids.empty()) return -1;
  return out.add_nonterminal(n.label, std::move(kids));
}

}  // namespace detail

// Removes empty elements (-NONE- preterminals and the unary material above
// them) and reassigns token indices 1..n'. The input tree is not modified.
inline ConstTree strip_empties(const ConstTree& tree) {
  ConstTree out;
  int next_token = 0;
  int root = detail::strip_empties_rec(tree, tree.root(), out, next_token);
  if (root < 0) throw Error(ErrorKind::EmptyTree, "all terminals are empty elements");
  out.set_root(root);
  return out;
}

struct AlignedSentence {
  ConstTree tree;
  DepGraph dep;
};

struct AlignReport {
  struct Exclusion {
    int index;
    std::string reason;  // "token-count" or "form"
    std::string detail;
  };
  std::vector<Exclusion> excluded;
  std::vector<Exclusion> warnings;  // form mismatches kept in lenient mode
  int kept = 0;
};

// Pairs trees with dependency graphs by position. Token counts must match;
// form mismatches (after escape normalization) exclude the pair in strict
// mode and only warn otherwise.
inline std::vector<AlignedSentence> align(const std::vector<ConstTree>& trees,
                                          const std::vector<DepGraph>& deps,
                                          AlignReport& report, bool strict = false) {
  if (trees.size() != deps.size())
    throw Error(ErrorKind::LengthMismatch,
                std::to_string(trees.size()) + " trees vs " + std::to_string(deps.size()) +
                    " dependency sentences");
  std::vector<AlignedSentence> out;
  for (size_t i = 0; i < trees.size(); ++i) {
    const ConstTree& t = trees[i];
    const DepGraph& d = deps[i];
    int idx = static_cast<int>(i);
    if (t.token_count() != d.n) {
      report.excluded.push_back({idx, "token-count",
                                 std::to_string(t.token_count()) + " vs " + std::to_string(d.n)});
      continue;
    }
    std::string mismatch;
    std::vector<int> pts = t.preterminals();
    for (int k = 0; k < d.n; ++k) {
      if (!forms_match(t.node(pts[k]).word, d.forms[k])) {
        mismatch = "token " + std::to_string(k + 1) + ": \"" + t.node(pts[k]).word +
                   "\" vs \"" + d.forms[k] + "\"";
        break;
      }
    }
    if (!mismatch.empty()) {
      if (strict) {
        report.excluded.push_back({idx, "form", mismatch});
        continue;
      }
      report.warnings.push_back({idx, "form", mismatch});
    }
    out.push_back({t, d});
    ++report.kept;
  }
  return out;
}

}  // namespace headlayer

#endif
