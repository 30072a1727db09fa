#ifndef HEADLAYER_TRANSFER_HPP
#define HEADLAYER_TRANSFER_HPP

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "headlayer/classifier.hpp"
#include "headlayer/error.hpp"
#include "headlayer/evaluation.hpp"
#include "headlayer/head_induction.hpp"
#include "headlayer/labels.hpp"
#include "headlayer/treebank.hpp"

namespace headlayer {

enum class FallbackPolicy { IdentityWithWarning, MapToUnk, Fail };

// Deterministic label interface for cross-resource transfer: phrase labels go
// through phi, POS tags through psi, both looked up after normalize_label.
struct LabelMap {
  std::map<std::string, std::string> phrase_map;  // target -> source
  std::map<std::string, std::string> pos_map;
  FallbackPolicy fallback = FallbackPolicy::IdentityWithWarning;
};

// Line format: "P TARGET SOURCE", "T TARGET SOURCE",
// "FALLBACK identity|unk|error", "#" comments.
inline LabelMap load_label_map(const std::string& text) {
  LabelMap map;
  std::istringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;
    if (kind == "FALLBACK") {
      std::string policy;
      ls >> policy;
      if (policy == "identity")
        map.fallback = FallbackPolicy::IdentityWithWarning;
      else if (policy == "unk")
        map.fallback = FallbackPolicy::MapToUnk;
      else if (policy == "error")
        map.fallback = FallbackPolicy::Fail;
      else
        throw Error(ErrorKind::BadLineKind,
                    "line " + std::to_string(line_no) + ": unknown fallback \"" + policy + "\"");
      continue;
    }
    if (kind != "P" && kind != "T")
      throw Error(ErrorKind::BadLineKind,
                  "line " + std::to_string(line_no) + ": expected P, T, or FALLBACK");
    std::string target, source;
    if (!(ls >> target >> source))
      throw Error(ErrorKind::BadLineKind,
                  "line " + std::to_string(line_no) + ": expected \"" + kind + " TARGET SOURCE\"");
    auto& m = kind == "P" ? map.phrase_map : map.pos_map;
    auto it = m.find(target);
    if (it != m.end() && it->second != source)
      throw Error(ErrorKind::DuplicateEntry,
                  "line " + std::to_string(line_no) + ": conflicting mapping for \"" + target + "\"");
    m[target] = source;
  }
  return map;
}

struct TransferCoverage {
  long long mapped = 0;
  long long identity = 0;  // unmapped, passed through
  long long unk = 0;       // unmapped, replaced by UNK
  std::map<std::string, long long> unmapped_labels;
};

namespace detail {

inline std::string map_label(const std::map<std::string, std::string>& m, const std::string& raw,
                             FallbackPolicy policy, TransferCoverage& coverage) {
  std::string label = normalize_label(raw);
  auto it = m.find(label);
  if (it != m.end()) {
    ++coverage.mapped;
    return it->second;
  }
  ++coverage.unmapped_labels[label];
  switch (policy) {
    case FallbackPolicy::IdentityWithWarning:
      ++coverage.identity;
      return label;
    case FallbackPolicy::MapToUnk:
      ++coverage.unk;
      return "UNK";
    case FallbackPolicy::Fail:
      throw Error(ErrorKind::UnmappedLabel, "\"" + label + "\"");
  }
  return label;
}

}  // namespace detail

// Runs the source model on target configurations mapped through phi/psi;
// indices refer to positions in the original target child lists.
inline HeadAssignment transfer_predict(const HeadModel& model, const LabelMap& map,
                                       const ConstTree& tree, TransferCoverage& coverage) {
  HeadAssignment heads(tree.size());
  for (int id : tree.nonterminals_preorder()) {
    const TreeNode& n = tree.node(id);
    Instance inst;
    inst.parent = detail::map_label(map.phrase_map, n.label, map.fallback, coverage);
    inst.children.reserve(n.children.size());
    for (int c : n.children) {
      const auto& m = tree.is_preterminal(c) ? map.pos_map : map.phrase_map;
      inst.children.push_back(detail::map_label(m, tree.node(c).label, map.fallback, coverage));
    }
    heads.set(id, predict(model, inst));
  }
  return heads;
}

struct TransferEvalReport {
  HeadAccuracy accuracy;  // categories keyed on target (normalized) labels
  TransferCoverage coverage;
  int sentences_scored = 0;
  int induction_failures = 0;
};

// Induces gold heads on the target resource, transfers predictions, and
// scores them; sentences without a unique span head are skipped and counted.
inline TransferEvalReport transfer_eval(const HeadModel& model, const LabelMap& map,
                                        const std::vector<AlignedSentence>& target) {
  TransferEvalReport report;
  std::vector<ConstTree> trees;
  std::vector<HeadAssignment> gold, pred;
  for (const AlignedSentence& sent : target) {
    InductionResult r = induce_heads(sent);
    if (!r.ok()) {
      ++report.induction_failures;
      continue;
    }
    gold.push_back(std::move(*r.assignment));
    pred.push_back(transfer_predict(model, map, sent.tree, report.coverage));
    trees.push_back(sent.tree);
    ++report.sentences_scored;
  }
  report.accuracy = head_accuracy(gold, pred, trees);
  return report;
}

}  // namespace headlayer

#endif
