#ifndef HEADLAYER_HEAD_INDUCTION_HPP
#define HEADLAYER_HEAD_INDUCTION_HPP

#include <optional>
#include <string>
#include <vector>

#include "headlayer/head_assignment.hpp"
#include "headlayer/treebank.hpp"
#include "headlayer/tree.hpp"

namespace headlayer {

// Tokens in yield(node) whose governor lies outside yield(node); the
// artificial root 0 counts as outside. These are the span-head candidates.
inline std::vector<int> span_head_candidates(const AlignedSentence& sentence, int node_id) {
  std::vector<std::pair<int, int>> spans = sentence.tree.yield_spans();
  auto [lo, hi] = spans[node_id];
  std::vector<int> out;
  for (int i = lo; i <= hi; ++i) {
    int g = sentence.dep.head_of(i);
    if (g < lo || g > hi) out.push_back(i);
  }
  return out;
}

struct InductionFailure {
  int node_id;
  int preorder_index;
  int candidate_count;
};

// Either a complete assignment or the first (preorder) node whose span-head
// candidate set is not a singleton.
struct InductionResult {
  std::optional<HeadAssignment> assignment;
  std::optional<InductionFailure> failure;
  bool ok() const { return assignment.has_value(); }
};

namespace detail {

// Gold head child for one node under the span-head criterion, or the failure
// candidate count when uniqueness does not hold.
inline bool induce_node(const ConstTree& tree, const DepGraph& dep,
                        const std::vector<std::pair<int, int>>& spans, int node_id,
                        int& head_index, int& candidate_count) {
  auto [lo, hi] = spans[node_id];
  int span_head = 0;
  candidate_count = 0;
  for (int i = lo; i <= hi; ++i) {
    int g = dep.head_of(i);
    if (g < lo || g > hi) {
      ++candidate_count;
      span_head = i;
    }
  }
  if (candidate_count != 1) return false;
  const TreeNode& n = tree.node(node_id);
  for (size_t j = 0; j < n.children.size(); ++j) {
    auto [clo, chi] = spans[n.children[j]];
    if (span_head >= clo && span_head <= chi) {
      head_index = static_cast<int>(j) + 1;
      return true;
    }
  }
  return false;  // unreachable on well-formed trees
}

}  // namespace detail

inline InductionResult induce_heads(const AlignedSentence& sentence) {
  const ConstTree& tree = sentence.tree;
  std::vector<std::pair<int, int>> spans = tree.yield_spans();
  std::vector<int> order = tree.nonterminals_preorder();
  HeadAssignment heads(tree.size());
  for (size_t i = 0; i < order.size(); ++i) {
    int head_index = 0, candidates = 0;
    if (!detail::induce_node(tree, sentence.dep, spans, order[i], head_index, candidates)) {
      InductionResult r;
      r.failure = InductionFailure{order[i], static_cast<int>(i), candidates};
      return r;
    }
    heads.set(order[i], head_index);
  }
  InductionResult r;
  r.assignment = std::move(heads);
  return r;
}

// All failing nodes instead of the first one.
inline std::vector<InductionFailure> induction_failures(const AlignedSentence& sentence) {
  const ConstTree& tree = sentence.tree;
  std::vector<std::pair<int, int>> spans = tree.yield_spans();
  std::vector<int> order = tree.nonterminals_preorder();
  std::vector<InductionFailure> out;
  for (size_t i = 0; i < order.size(); ++i) {
    int head_index = 0, candidates = 0;
    if (!detail::induce_node(tree, sentence.dep, spans, order[i], head_index, candidates))
      out.push_back({order[i], static_cast<int>(i), candidates});
  }
  return out;
}

struct CorpusInductionReport {
  struct Entry {
    int sentence_index;
    InductionFailure failure;
  };
  std::vector<Entry> failures;
};

inline std::vector<std::pair<int, HeadAssignment>> induce_corpus(
    const std::vector<AlignedSentence>& sentences, CorpusInductionReport& report) {
  std::vector<std::pair<int, HeadAssignment>> out;
  for (size_t i = 0; i < sentences.size(); ++i) {
    InductionResult r = induce_heads(sentences[i]);
    if (r.ok())
      out.emplace_back(static_cast<int>(i), std::move(*r.assignment));
    else
      report.failures.push_back({static_cast<int>(i), *r.failure});
  }
  return out;
}

}  // namespace headlayer

#endif
