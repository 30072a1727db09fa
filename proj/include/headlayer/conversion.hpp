#ifndef HEADLAYER_CONVERSION_HPP
#define HEADLAYER_CONVERSION_HPP

#include <string>
#include <utility>
#include <vector>

#include "headlayer/classifier.hpp"
#include "headlayer/dep_graph.hpp"
#include "headlayer/error.hpp"
#include "headlayer/head_assignment.hpp"
#include "headlayer/percolation.hpp"
#include "headlayer/transform.hpp"
#include "headlayer/tree.hpp"

namespace headlayer {

namespace detail {

// Debinarize while projecting an assignment: each surviving node's head child
// follows the @-spine down to the first non-@ descendant, whose position in
// the spliced child list becomes the new head index.
struct AtCollapse {
  const ConstTree& in;
  const HeadAssignment& heads;
  ConstTree out;
  HeadAssignment new_heads;

  // Returns (new ids, original ids) of the spliced expansion.
  std::pair<std::vector<int>, std::vector<int>> rec(int id) {
    const TreeNode& n = in.node(id);
    if (n.preterminal)
      return {{out.add_preterminal(n.label, n.word, n.token_index)}, {id}};
    std::vector<int> new_kids, orig_kids;
    for (int c : n.children) {
      auto [nk, ok] = rec(c);
      new_kids.insert(new_kids.end(), nk.begin(), nk.end());
      orig_kids.insert(orig_kids.end(), ok.begin(), ok.end());
    }
    if (!n.label.empty() && n.label[0] == '@') return {new_kids, orig_kids};

    int target = id;
    do {
      target = heads.head_child(in, target);
    } while (!in.node(target).preterminal && !in.node(target).label.empty() &&
             in.node(target).label[0] == '@');
    int new_id = out.add_nonterminal(n.label, new_kids);
    for (size_t j = 0; j < orig_kids.size(); ++j) {
      if (orig_kids[j] == target) {
        new_heads.set(new_id, static_cast<int>(j) + 1);
        break;
      }
    }
    return {{new_id}, {id}};
  }
};

inline int collapse_rec(const ConstTree& tree, int id, const HeadAssignment& heads,
                        std::vector<int>& governor) {
  const TreeNode& n = tree.node(id);
  if (n.preterminal) return n.token_index;
  std::vector<int> child_heads;
  child_heads.reserve(n.children.size());
  for (int c : n.children) child_heads.push_back(collapse_rec(tree, c, heads, governor));
  int p = heads.at(id);
  int h = child_heads[p - 1];
  for (size_t j = 0; j < child_heads.size(); ++j)
    if (static_cast<int>(j) != p - 1) governor[child_heads[j] - 1] = h;
  return h;
}

}  // namespace detail

struct ConvertOptions {
  bool auto_debinarize = true;
};

// Deterministic constituency-to-dependency conversion: one recursive pass
// returns each subtree's head token and attaches every non-head child's head
// token to it; the root's head token attaches to 0 with relation "root".
// Trees containing @-nodes are debinarized first (heads projected through the
// splice) unless auto_debinarize is off.
inline DepGraph convert(const ConstTree& tree, const HeadAssignment& heads,
                        const ConvertOptions& options = {}) {
  if (has_intermediate_nodes(tree)) {
    if (!options.auto_debinarize)
      throw Error(ErrorKind::IntermediateNodePresent, "tree contains @-labeled nodes");
    const TreeNode& root = tree.node(tree.root());
    if (!root.preterminal && !root.label.empty() && root.label[0] == '@')
      throw Error(ErrorKind::RootIsIntermediate, "root label is \"" + root.label + "\"");
    detail::AtCollapse c{tree, heads, ConstTree{}, HeadAssignment{}};
    auto [ids, orig] = c.rec(tree.root());
    c.out.set_root(ids[0]);
    ConvertOptions flat;
    flat.auto_debinarize = false;
    return convert(c.out, c.new_heads, flat);
  }

  int n = tree.token_count();
  DepGraph dep;
  dep.n = n;
  dep.heads.assign(n, -1);
  dep.rels.assign(n, "_");
  dep.forms.resize(n);
  dep.pos.resize(n);
  for (int pt : tree.preterminals()) {
    const TreeNode& leaf = tree.node(pt);
    dep.forms[leaf.token_index - 1] = leaf.word;
    dep.pos[leaf.token_index - 1] = leaf.label;
  }
  int root_token = detail::collapse_rec(tree, tree.root(), heads, dep.heads);
  dep.heads[root_token - 1] = 0;
  dep.rels[root_token - 1] = "root";
  return dep;
}

// Head sources for corpus conversion. Trees are debinarized before the
// chooser runs so heads are assigned on n-ary configurations.
struct HeadSource {
  enum class Kind { Oracle, Rules, Model, Sidecar } kind;
  const std::vector<DepGraph>* gold_deps = nullptr;      // Oracle
  const RuleTable* rules = nullptr;                      // Rules
  const HeadModel* model = nullptr;                      // Model
  const std::vector<HeadAssignment>* sidecar = nullptr;  // Sidecar, per input tree

  static HeadSource oracle(const std::vector<DepGraph>& deps) {
    return {Kind::Oracle, &deps, nullptr, nullptr, nullptr};
  }
  static HeadSource from_rules(const RuleTable& table) {
    return {Kind::Rules, nullptr, &table, nullptr, nullptr};
  }
  static HeadSource from_model(const HeadModel& m) {
    return {Kind::Model, nullptr, nullptr, &m, nullptr};
  }
  static HeadSource from_sidecar(const std::vector<HeadAssignment>& heads) {
    return {Kind::Sidecar, nullptr, nullptr, nullptr, &heads};
  }
};

inline std::vector<DepGraph> convert_corpus(const std::vector<ConstTree>& trees,
                                            const HeadSource& source) {
  if (source.kind == HeadSource::Kind::Oracle &&
      source.gold_deps->size() != trees.size())
    throw Error(ErrorKind::LengthMismatch, "trees vs gold dependency sentences");
  if (source.kind == HeadSource::Kind::Sidecar && source.sidecar->size() != trees.size())
    throw Error(ErrorKind::LengthMismatch, "trees vs sidecar head assignments");

  std::vector<DepGraph> out;
  out.reserve(trees.size());
  for (size_t i = 0; i < trees.size(); ++i) {
    if (source.kind == HeadSource::Kind::Sidecar) {
      out.push_back(convert(trees[i], (*source.sidecar)[i]));
      continue;
    }
    ConstTree flat = has_intermediate_nodes(trees[i]) ? debinarize(trees[i]) : trees[i];
    HeadAssignment heads;
    switch (source.kind) {
      case HeadSource::Kind::Oracle: {
        InductionResult r = induce_heads({flat, (*source.gold_deps)[i]});
        if (!r.ok())
          throw Error(ErrorKind::InductionFailed,
                      "sentence " + std::to_string(i) + ": " +
                          std::to_string(r.failure->candidate_count) +
                          " span-head candidates at preorder node " +
                          std::to_string(r.failure->preorder_index));
        heads = std::move(*r.assignment);
        break;
      }
      case HeadSource::Kind::Rules:
        heads = percolate_tree(*source.rules, flat);
        break;
      case HeadSource::Kind::Model:
        heads = predict_tree(*source.model, flat);
        break;
      case HeadSource::Kind::Sidecar:
        break;
    }
    ConvertOptions flat_opts;
    flat_opts.auto_debinarize = false;
    out.push_back(convert(flat, heads, flat_opts));
  }
  return out;
}

}  // namespace headlayer

#endif
