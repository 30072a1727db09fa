#ifndef HEADLAYER_PERCOLATION_HPP
#define HEADLAYER_PERCOLATION_HPP

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "headlayer/error.hpp"
#include "headlayer/head_assignment.hpp"
#include "headlayer/labels.hpp"
#include "headlayer/tree.hpp"

namespace headlayer {

enum class ScanDirection { Left, Right, LeftDis, RightDis };

struct PercolationRule {
  ScanDirection direction;
  std::vector<std::string> priority;
};

// Collins-style head percolation table: ordered rule lines per parent label
// plus a table-wide default direction.
struct RuleTable {
  std::map<std::string, std::vector<PercolationRule>> rules;
  ScanDirection default_direction = ScanDirection::Left;
};

// Line format: "PARENT direction LABEL1 LABEL2 ...". Multiple lines per
// parent are tried in file order. "DEFAULT left|right" sets the fallback;
// "#" starts a comment.
inline RuleTable load_rules(const std::string& text) {
  RuleTable table;
  bool default_seen = false;
  std::istringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string parent, dir;
    if (!(ls >> parent)) continue;
    if (!(ls >> dir))
      throw Error(ErrorKind::BadDirection, "line " + std::to_string(line_no) + ": missing direction");
    if (parent == "DEFAULT") {
      if (default_seen)
        throw Error(ErrorKind::DuplicateDefault, "line " + std::to_string(line_no));
      if (dir == "left")
        table.default_direction = ScanDirection::Left;
      else if (dir == "right")
        table.default_direction = ScanDirection::Right;
      else
        throw Error(ErrorKind::BadDirection,
                    "line " + std::to_string(line_no) + ": DEFAULT must be left or right");
      default_seen = true;
      continue;
    }
    PercolationRule rule;
    if (dir == "left")
      rule.direction = ScanDirection::Left;
    else if (dir == "right")
      rule.direction = ScanDirection::Right;
    else if (dir == "leftdis")
      rule.direction = ScanDirection::LeftDis;
    else if (dir == "rightdis")
      rule.direction = ScanDirection::RightDis;
    else
      throw Error(ErrorKind::BadDirection,
                  "line " + std::to_string(line_no) + ": unknown direction \"" + dir + "\"");
    std::string label;
    while (ls >> label) rule.priority.push_back(label);
    table.rules[parent].push_back(std::move(rule));
  }
  return table;
}

// Collins scan. `left`: priority labels outermost, children left-to-right
// inner; `right`: children right-to-left; `leftdis`/`rightdis`: children
// outermost, set membership inner. An empty priority list acts as a pure
// directional rule (first/last child). Labels must be pre-normalized.
inline int percolate(const RuleTable& table, const std::string& parent_label,
                     const std::vector<std::string>& child_labels) {
  int k = static_cast<int>(child_labels.size());
  auto it = table.rules.find(parent_label);
  if (it != table.rules.end()) {
    for (const PercolationRule& rule : it->second) {
      bool leftward =
          rule.direction == ScanDirection::Left || rule.direction == ScanDirection::LeftDis;
      if (rule.priority.empty()) return leftward ? 1 : k;
      if (rule.direction == ScanDirection::Left) {
        for (const std::string& p : rule.priority)
          for (int j = 0; j < k; ++j)
            if (child_labels[j] == p) return j + 1;
      } else if (rule.direction == ScanDirection::Right) {
        for (const std::string& p : rule.priority)
          for (int j = k - 1; j >= 0; --j)
            if (child_labels[j] == p) return j + 1;
      } else if (rule.direction == ScanDirection::LeftDis) {
        for (int j = 0; j < k; ++j)
          for (const std::string& p : rule.priority)
            if (child_labels[j] == p) return j + 1;
      } else {
        for (int j = k - 1; j >= 0; --j)
          for (const std::string& p : rule.priority)
            if (child_labels[j] == p) return j + 1;
      }
    }
  }
  return table.default_direction == ScanDirection::Left ? 1 : k;
}

// Rule application per node, bottom-up independent; labels normalized here
// since trees store them raw.
inline HeadAssignment percolate_tree(const RuleTable& table, const ConstTree& tree) {
  HeadAssignment heads(tree.size());
  for (int id : tree.nonterminals_preorder()) {
    const TreeNode& n = tree.node(id);
    std::vector<std::string> child_labels;
    child_labels.reserve(n.children.size());
    for (int c : n.children) child_labels.push_back(normalize_label(tree.node(c).label));
    heads.set(id, percolate(table, normalize_label(n.label), child_labels));
  }
  return heads;
}

}  // namespace headlayer

#endif
