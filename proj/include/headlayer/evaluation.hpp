#ifndef HEADLAYER_EVALUATION_HPP
#define HEADLAYER_EVALUATION_HPP

#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "headlayer/bracketed.hpp"
#include "headlayer/dep_graph.hpp"
#include "headlayer/error.hpp"
#include "headlayer/head_assignment.hpp"
#include "headlayer/labels.hpp"
#include "headlayer/tree.hpp"

namespace headlayer {

struct CategoryCount {
  long long matches = 0;
  long long total = 0;
  double fraction() const {
    return total == 0 ? std::numeric_limits<double>::quiet_NaN()
                      : static_cast<double>(matches) / static_cast<double>(total);
  }
};

struct HeadAccuracy {
  CategoryCount overall;
  std::map<std::string, CategoryCount> by_category;  // normalized parent label
};

// Fraction of nonterminals whose predicted head child matches gold, with a
// per-category breakdown. 0/0 reports NaN.
inline HeadAccuracy head_accuracy(const std::vector<HeadAssignment>& gold,
                                  const std::vector<HeadAssignment>& pred,
                                  const std::vector<ConstTree>& trees) {
  if (gold.size() != pred.size() || gold.size() != trees.size())
    throw Error(ErrorKind::LengthMismatch, "gold/pred/tree list sizes differ");
  HeadAccuracy acc;
  for (size_t s = 0; s < trees.size(); ++s) {
    for (int id : trees[s].nonterminals_preorder()) {
      if (!gold[s].has(id) || !pred[s].has(id))
        throw Error(ErrorKind::NodeSetMismatch,
                    "sentence " + std::to_string(s) + ": node " + std::to_string(id) +
                        " missing from an assignment");
      bool match = gold[s].at(id) == pred[s].at(id);
      std::string cat = normalize_label(trees[s].node(id).label);
      acc.overall.total += 1;
      acc.by_category[cat].total += 1;
      if (match) {
        acc.overall.matches += 1;
        acc.by_category[cat].matches += 1;
      }
    }
  }
  return acc;
}

struct BracketScore {
  double precision = 0;  // percentages
  double recall = 0;
  double f1 = 0;
  double complete_match_rate = 0;
  long long matched = 0;
  long long gold_brackets = 0;
  long long pred_brackets = 0;
};

namespace detail {

using BracketMultiset = std::map<std::tuple<std::string, int, int>, int>;

// (normalized label, start, end) over nonterminal nodes; preterminal
// brackets excluded, the root included, punctuation tokens inside spans.
inline BracketMultiset brackets_of(const ConstTree& tree) {
  BracketMultiset out;
  std::vector<std::pair<int, int>> spans = tree.yield_spans();
  for (int id : tree.nonterminals_preorder()) {
    auto [lo, hi] = spans[id];
    out[{normalize_label(tree.node(id).label), lo, hi}] += 1;
  }
  return out;
}

inline long long intersect_size(const BracketMultiset& a, const BracketMultiset& b) {
  long long m = 0;
  for (const auto& [key, count] : a) {
    auto it = b.find(key);
    if (it != b.end()) m += std::min(count, it->second);
  }
  return m;
}

inline double pct(long long num, long long den) {
  return den == 0 ? std::numeric_limits<double>::quiet_NaN()
                  : 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace detail

struct BracketOptions {
  bool exclude_punct = false;           // legacy scoring
  std::set<std::string> punct_tags;     // used when exclude_punct is set
};

namespace detail {

// Maps token index -> surviving rank (1-based) or 0 for removed tokens.
inline std::vector<int> punct_rank_map(const ConstTree& gold, const std::set<std::string>& tags) {
  std::vector<int> rank(gold.token_count() + 1, 0);
  int next = 0;
  for (int pt : gold.preterminals()) {
    const TreeNode& n = gold.node(pt);
    rank[n.token_index] = tags.count(n.label) ? 0 : ++next;
  }
  return rank;
}

inline BracketMultiset remap_brackets(const ConstTree& tree, const std::vector<int>& rank) {
  BracketMultiset out;
  std::vector<std::pair<int, int>> spans = tree.yield_spans();
  for (int id : tree.nonterminals_preorder()) {
    auto [lo, hi] = spans[id];
    int new_lo = 0, new_hi = 0;
    for (int t = lo; t <= hi && !new_lo; ++t) new_lo = rank[t];
    for (int t = hi; t >= lo && !new_hi; --t) new_hi = rank[t];
    if (!new_lo) continue;  // span was all punctuation
    out[{normalize_label(tree.node(id).label), new_lo, new_hi}] += 1;
  }
  return out;
}

}  // namespace detail

// Labeled bracket precision/recall/F1 (percentages) with complete-match rate
// over bracket multisets. Punctuation is included unless options say not to.
inline BracketScore bracket_prf(const std::vector<ConstTree>& gold,
                                const std::vector<ConstTree>& pred,
                                const BracketOptions& options = {}) {
  if (gold.size() != pred.size())
    throw Error(ErrorKind::LengthMismatch, "gold/pred corpus sizes differ");
  BracketScore score;
  long long complete = 0;
  for (size_t s = 0; s < gold.size(); ++s) {
    if (gold[s].token_count() != pred[s].token_count())
      throw Error(ErrorKind::TokenCountMismatch,
                  "sentence " + std::to_string(s) + ": " + std::to_string(gold[s].token_count()) +
                      " vs " + std::to_string(pred[s].token_count()) + " tokens");
    detail::BracketMultiset gb, pb;
    if (options.exclude_punct) {
      std::vector<int> rank = detail::punct_rank_map(gold[s], options.punct_tags);
      gb = detail::remap_brackets(gold[s], rank);
      pb = detail::remap_brackets(pred[s], rank);
    } else {
      gb = detail::brackets_of(gold[s]);
      pb = detail::brackets_of(pred[s]);
    }
    long long m = detail::intersect_size(gb, pb);
    score.matched += m;
    for (const auto& [k, c] : gb) score.gold_brackets += c;
    for (const auto& [k, c] : pb) score.pred_brackets += c;
    if (gb == pb) ++complete;
  }
  score.precision = detail::pct(score.matched, score.pred_brackets);
  score.recall = detail::pct(score.matched, score.gold_brackets);
  score.f1 = (score.precision + score.recall > 0)
                 ? 2 * score.precision * score.recall / (score.precision + score.recall)
                 : 0.0;
  score.complete_match_rate =
      detail::pct(complete, static_cast<long long>(gold.size()));
  return score;
}

// Unlabeled attachment score: fraction of tokens with the gold governor,
// micro-averaged; punctuation tokens count.
inline double uas(const std::vector<DepGraph>& gold, const std::vector<DepGraph>& pred) {
  if (gold.size() != pred.size())
    throw Error(ErrorKind::LengthMismatch, "gold/pred corpus sizes differ");
  long long correct = 0, total = 0;
  for (size_t s = 0; s < gold.size(); ++s) {
    if (gold[s].n != pred[s].n)
      throw Error(ErrorKind::LengthMismatch,
                  "sentence " + std::to_string(s) + ": " + std::to_string(gold[s].n) + " vs " +
                      std::to_string(pred[s].n) + " tokens");
    for (int i = 1; i <= gold[s].n; ++i) {
      ++total;
      if (gold[s].head_of(i) == pred[s].head_of(i)) ++correct;
    }
  }
  return total == 0 ? std::numeric_limits<double>::quiet_NaN()
                    : static_cast<double>(correct) / static_cast<double>(total);
}

struct TreebankDiff {
  BracketScore brackets;              // @-brackets included
  double complete_match_rate = 0;     // exact structural identity, percent
  struct Example {
    int index;
    std::string a;
    std::string b;
  };
  std::vector<Example> divergent_examples;
};

// Compares two treebanks over the same sentences, counting @-labeled
// brackets (that is what distinguishes spine choices).
inline TreebankDiff treebank_diff(const std::vector<ConstTree>& a,
                                  const std::vector<ConstTree>& b,
                                  int max_examples = 5) {
  TreebankDiff diff;
  diff.brackets = bracket_prf(a, b);
  long long identical = 0;
  for (size_t s = 0; s < a.size(); ++s) {
    if (structural_equal(a[s], b[s])) {
      ++identical;
    } else if (static_cast<int>(diff.divergent_examples.size()) < max_examples) {
      diff.divergent_examples.push_back(
          {static_cast<int>(s), serialize_bracketed(a[s]), serialize_bracketed(b[s])});
    }
  }
  diff.complete_match_rate = detail::pct(identical, static_cast<long long>(a.size()));
  return diff;
}

}  // namespace headlayer

#endif
