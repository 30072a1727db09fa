#ifndef HEADLAYER_TRANSFORM_HPP
#define HEADLAYER_TRANSFORM_HPP

#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "headlayer/error.hpp"
#include "headlayer/head_assignment.hpp"
#include "headlayer/head_induction.hpp"
#include "headlayer/labels.hpp"
#include "headlayer/tree.hpp"

namespace headlayer {

struct DelimiterConfig {
  std::map<std::string, std::string> pair_map;  // left form -> right form
  std::set<std::string> unpaired_right;         // attach to preceding sibling
  std::set<std::string> punct_tags;

  bool is_punct(const ConstTree& tree, int id) const {
    return tree.is_preterminal(id) && punct_tags.count(tree.node(id).label) > 0;
  }

  bool is_opening(const std::string& form) const { return pair_map.count(form) > 0; }

  bool is_closing(const std::string& form) const {
    for (const auto& [l, r] : pair_map)
      if (r == form) return true;
    return false;
  }
};

inline DelimiterConfig default_delimiter_config() {
  DelimiterConfig cfg;
  cfg.pair_map = {
      {"(", ")"},           {"[", "]"},           {"{", "}"},
      {"-LRB-", "-RRB-"},   {"-LSB-", "-RSB-"},   {"-LCB-", "-RCB-"},
      {"“", "”"}, {"‘", "’"}, {"«", "»"},
      {"``", "''"},
  };
  cfg.unpaired_right = {".", ",", ";", ":", "!", "?", "…"};
  cfg.punct_tags = {".", ",", ":", "``", "''", "-LRB-", "-RRB-", "PU"};
  return cfg;
}

// Optional config file: "PAIR left right", "RIGHT form", "TAG tag" lines.
inline DelimiterConfig load_delimiter_config(const std::string& text) {
  DelimiterConfig cfg;
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
    if (kind == "PAIR") {
      std::string l, r;
      if (!(ls >> l >> r))
        throw Error(ErrorKind::BadLineKind, "line " + std::to_string(line_no) + ": PAIR needs two forms");
      cfg.pair_map[l] = r;
    } else if (kind == "RIGHT") {
      std::string f;
      if (!(ls >> f))
        throw Error(ErrorKind::BadLineKind, "line " + std::to_string(line_no) + ": RIGHT needs a form");
      cfg.unpaired_right.insert(f);
    } else if (kind == "TAG") {
      std::string t;
      if (!(ls >> t))
        throw Error(ErrorKind::BadLineKind, "line " + std::to_string(line_no) + ": TAG needs a tag");
      cfg.punct_tags.insert(t);
    } else {
      throw Error(ErrorKind::BadLineKind,
                  "line " + std::to_string(line_no) + ": unknown kind \"" + kind + "\"");
    }
  }
  for (const auto& [l, r] : cfg.pair_map)
    if (cfg.pair_map.count(r) || l == r)
      throw Error(ErrorKind::BadLineKind,
                  "PAIR left and right forms must be disjoint (\"" + l + "\" / \"" + r + "\")");
  return cfg;
}

namespace detail {

// Closing-delimiter position for the opening form at `open`, depth-matched
// over later siblings of the same pair type; -1 when unpaired.
inline int find_closing(const ConstTree& tree, const std::vector<int>& items, int open,
                        const DelimiterConfig& cfg) {
  const std::string& open_form = tree.node(items[open]).word;
  const std::string close_form = cfg.pair_map.at(open_form);
  int depth = 0;
  for (int j = open + 1; j < static_cast<int>(items.size()); ++j) {
    if (!cfg.is_punct(tree, items[j])) continue;
    const std::string& form = tree.node(items[j]).word;
    if (form == open_form && form != close_form) {
      ++depth;
    } else if (form == close_form) {
      if (depth == 0) return j;
      --depth;
    }
  }
  return -1;
}

// Rewrites one child list: matched delimiter spans and unpaired delimiters
// get wrapped into "@"+label nodes. `items` are node ids in `out`'s arena.
inline std::vector<int> wrap_delimiters(ConstTree& out, std::vector<int> items,
                                        const std::string& label, const DelimiterConfig& cfg) {
  std::vector<int> result;
  int plain_close = -1;  // close of a span covering all children: left in place
  int i = 0;
  int n = static_cast<int>(items.size());
  while (i < n) {
    int id = items[i];
    if (i == plain_close || !cfg.is_punct(out, id)) {
      result.push_back(id);
      ++i;
      continue;
    }
    const std::string& form = out.node(id).word;
    if (cfg.is_opening(form)) {
      int close = find_closing(out, items, i, cfg);
      if (close >= 0) {
        if (i == 0 && close == n - 1 && result.empty()) {
          // no vacuous self-wrap; still process the interior
          plain_close = close;
          result.push_back(id);
          ++i;
          continue;
        }
        std::vector<int> span(items.begin() + i, items.begin() + close + 1);
        span = wrap_delimiters(out, std::move(span), label, cfg);
        result.push_back(out.add_nonterminal("@" + label, std::move(span)));
        i = close + 1;
        continue;
      }
      if (i + 1 < n) {  // unpaired left: wrap with following sibling
        result.push_back(out.add_nonterminal("@" + label, {id, items[i + 1]}));
        i += 2;
        continue;
      }
      result.push_back(id);
      ++i;
      continue;
    }
    if (cfg.is_closing(form) || cfg.unpaired_right.count(form) > 0) {
      if (!result.empty()) {  // unpaired right: wrap with preceding sibling
        int prev = result.back();
        result.pop_back();
        result.push_back(out.add_nonterminal("@" + label, {prev, id}));
        ++i;
        continue;
      }
    }
    result.push_back(id);
    ++i;
  }
  return result;
}

inline int normalize_punct_rec(const ConstTree& in, int id, ConstTree& out,
                               const DelimiterConfig& cfg) {
  const TreeNode& n = in.node(id);
  if (n.preterminal) return out.add_preterminal(n.label, n.word, n.token_index);
  std::vector<int> kids;
  kids.reserve(n.children.size());
  for (int c : n.children) kids.push_back(normalize_punct_rec(in, c, out, cfg));
  kids = wrap_delimiters(out, std::move(kids), n.label, cfg);
  return out.add_nonterminal(n.label, std::move(kids));
}

}  // namespace detail

// Punctuation-aware normalization: matched delimiter pairs wrap the inclusive
// sibling span into an "@"+parent node (vacuous whole-span wraps skipped);
// unpaired left delimiters wrap with the following sibling, unpaired right
// delimiters (and sentence-final marks) with the preceding one. Yields and
// token order are unchanged.
inline ConstTree normalize_punct(const ConstTree& tree, const DelimiterConfig& cfg) {
  ConstTree out;
  out.set_root(detail::normalize_punct_rec(tree, tree.root(), out, cfg));
  return out;
}

inline ConstTree normalize_punct(const ConstTree& tree) {
  return normalize_punct(tree, default_delimiter_config());
}

namespace detail {

inline int binarize_rec(const ConstTree& in, int id, const HeadAssignment& heads,
                        ConstTree& out) {
  const TreeNode& n = in.node(id);
  if (n.preterminal) return out.add_preterminal(n.label, n.word, n.token_index);
  std::vector<int> kids;
  kids.reserve(n.children.size());
  for (int c : n.children) kids.push_back(binarize_rec(in, c, heads, out));
  int k = static_cast<int>(kids.size());
  if (k == 1) return out.add_nonterminal(n.label, std::move(kids));
  if (!heads.has(id)) throw Error(ErrorKind::MissingHead, "node " + std::to_string(id));

  int h = heads.at(id);  // 1-based
  std::string at_label = "@" + n.label;
  int spine = kids[h - 1];
  int folds = k - 1;
  int done = 0;
  for (int j = h; j < k; ++j) {  // right siblings, innermost first
    ++done;
    spine = out.add_nonterminal(done == folds ? n.label : at_label, {spine, kids[j]});
  }
  for (int j = h - 2; j >= 0; --j) {  // then left siblings, innermost first
    ++done;
    spine = out.add_nonterminal(done == folds ? n.label : at_label, {kids[j], spine});
  }
  return spine;
}

}  // namespace detail

// Head-driven binarization: the head child seeds the spine; right siblings
// fold in innermost-to-outermost, then left siblings; every introduced node
// is labeled "@"+label and the topmost keeps the original label.
inline ConstTree binarize(const ConstTree& tree, const HeadAssignment& heads) {
  ConstTree out;
  out.set_root(detail::binarize_rec(tree, tree.root(), heads, out));
  return out;
}

namespace detail {

// Returns the spliced expansion of `id`: @-nodes dissolve into their
// children, bottom-up, so nested chains flatten in one pass.
inline std::vector<int> debinarize_rec(const ConstTree& in, int id, ConstTree& out) {
  const TreeNode& n = in.node(id);
  if (n.preterminal) return {out.add_preterminal(n.label, n.word, n.token_index)};
  std::vector<int> kids;
  for (int c : n.children) {
    std::vector<int> expanded = debinarize_rec(in, c, out);
    kids.insert(kids.end(), expanded.begin(), expanded.end());
  }
  if (!n.label.empty() && n.label[0] == '@') return kids;
  return {out.add_nonterminal(n.label, std::move(kids))};
}

}  // namespace detail

inline ConstTree debinarize(const ConstTree& tree) {
  const TreeNode& root = tree.node(tree.root());
  if (!root.preterminal && !root.label.empty() && root.label[0] == '@')
    throw Error(ErrorKind::RootIsIntermediate, "root label is \"" + root.label + "\"");
  ConstTree out;
  std::vector<int> ids = detail::debinarize_rec(tree, tree.root(), out);
  out.set_root(ids[0]);
  return out;
}

// Local head chooser over a (parent label, child labels) configuration;
// labels arrive normalized. Adapters exist for rule tables and models.
using HeadChooser = std::function<int(const std::string&, const std::vector<std::string>&)>;

namespace detail {

inline std::string strip_at(const std::string& label) {
  size_t i = 0;
  while (i < label.size() && label[i] == '@') ++i;
  return label.substr(i);
}

// Head for an @-node: the non-punctuation child when unique; otherwise the
// chooser decides on the configuration under the original (un-@) label. A
// punctuation pick from the chooser falls back to the leftmost
// non-punctuation child.
inline int at_node_head(const ConstTree& tree, int id, const HeadChooser& chooser,
                        const DelimiterConfig& cfg) {
  const TreeNode& n = tree.node(id);
  int k = static_cast<int>(n.children.size());
  std::vector<int> content;
  for (int j = 0; j < k; ++j)
    if (!cfg.is_punct(tree, n.children[j])) content.push_back(j + 1);
  if (content.size() == 1) return content[0];
  if (content.empty()) return 1;
  std::vector<std::string> labels;
  labels.reserve(k);
  for (int c : n.children) labels.push_back(normalize_label(tree.node(c).label));
  int pick = chooser(strip_at(normalize_label(n.label)), labels);
  if (cfg.is_punct(tree, n.children[pick - 1])) return content[0];
  return pick;
}

}  // namespace detail

// Full assignment from a local chooser. @-nodes (from normalization or
// earlier binarization) take the non-punctuation-child rule above.
inline HeadAssignment assign_heads(const ConstTree& tree, const HeadChooser& chooser,
                                   const DelimiterConfig& cfg = default_delimiter_config()) {
  HeadAssignment heads(tree.size());
  for (int id : tree.nonterminals_preorder()) {
    const TreeNode& n = tree.node(id);
    if (!n.label.empty() && n.label[0] == '@') {
      heads.set(id, detail::at_node_head(tree, id, chooser, cfg));
      continue;
    }
    std::vector<std::string> labels;
    labels.reserve(n.children.size());
    for (int c : n.children) labels.push_back(normalize_label(tree.node(c).label));
    heads.set(id, chooser(normalize_label(n.label), labels));
  }
  return heads;
}

// Oracle assignment for a tree that may contain @-nodes. Non-@ nodes follow
// the span-head criterion against the aligned dependencies (their yields are
// unchanged by normalization). @-nodes off the head path have no unique span
// head, so they take the leftmost non-punctuation child.
inline InductionResult induce_heads_extended(const ConstTree& tree, const DepGraph& dep,
                                             const DelimiterConfig& cfg = default_delimiter_config()) {
  std::vector<std::pair<int, int>> spans = tree.yield_spans();
  std::vector<int> order = tree.nonterminals_preorder();
  HeadAssignment heads(tree.size());
  for (size_t i = 0; i < order.size(); ++i) {
    int id = order[i];
    int head_index = 0, candidates = 0;
    if (detail::induce_node(tree, dep, spans, id, head_index, candidates)) {
      heads.set(id, head_index);
      continue;
    }
    const TreeNode& n = tree.node(id);
    if (!n.label.empty() && n.label[0] == '@') {
      HeadChooser leftmost = [](const std::string&, const std::vector<std::string>&) { return 1; };
      heads.set(id, detail::at_node_head(tree, id, leftmost, cfg));
      continue;
    }
    InductionResult r;
    r.failure = InductionFailure{id, static_cast<int>(i), candidates};
    return r;
  }
  InductionResult r;
  r.assignment = std::move(heads);
  return r;
}

}  // namespace headlayer

#endif
