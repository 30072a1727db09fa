#ifndef HEADLAYER_CONLL_HPP
#define HEADLAYER_CONLL_HPP

#include <sstream>
#include <string>
#include <vector>

#include "headlayer/dep_graph.hpp"
#include "headlayer/error.hpp"
#include "headlayer/tree.hpp"

namespace headlayer {

namespace detail {

inline std::vector<std::string> split_columns(const std::string& line) {
  std::vector<std::string> fields;
  if (line.find('\t') != std::string::npos) {
    size_t start = 0;
    while (true) {
      size_t tab = line.find('\t', start);
      if (tab == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
  } else {
    std::istringstream ss(line);
    std::string f;
    while (ss >> f) fields.push_back(f);
  }
  return fields;
}

inline bool parse_int(const std::string& s, int& out) {
  if (s.empty()) return false;
  size_t i = 0;
  long v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    v = v * 10 + (s[i] - '0');
    if (v > 1000000000) return false;
  }
  out = static_cast<int>(v);
  return true;
}

}  // namespace detail

// CoNLL-style reader: tab-separated ID FORM LEMMA CPOS POS FEATS HEAD DEPREL
// (>= 8 columns), blank line between sentences, "#" comment lines ignored,
// multi-word and empty-node IDs (containing "-" or ".") skipped. Each
// sentence is validated as a single-rooted tree.
inline std::vector<DepGraph> parse_conll(const std::string& text) {
  std::vector<DepGraph> graphs;
  DepGraph cur;
  int line_no = 0;
  int sentence_index = 0;
  bool in_sentence = false;

  auto flush = [&]() {
    if (!in_sentence) return;
    validate_dep_graph(cur, sentence_index);
    graphs.push_back(std::move(cur));
    cur = DepGraph{};
    in_sentence = false;
    ++sentence_index;
  };

  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    bool blank = line.find_first_not_of(" \t") == std::string::npos;
    if (blank) {
      flush();
      continue;
    }
    if (line[0] == '#') continue;

    std::vector<std::string> f = detail::split_columns(line);
    if (f.size() < 8)
      throw Error(ErrorKind::BadColumnCount,
                  "line " + std::to_string(line_no) + ": expected >= 8 columns, got " +
                      std::to_string(f.size()));
    if (f[0].find('-') != std::string::npos || f[0].find('.') != std::string::npos)
      continue;  // multi-word ranges and empty nodes carry no tree structure

    int id = 0;
    if (!detail::parse_int(f[0], id) || id != cur.n + 1)
      throw Error(ErrorKind::BadTokenId,
                  "line " + std::to_string(line_no) + ": token ids must run 1..n in order");
    int head = 0;
    if (!detail::parse_int(f[6], head))
      throw Error(ErrorKind::BadHeadValue,
                  "line " + std::to_string(line_no) + ": HEAD is not a non-negative integer");

    in_sentence = true;
    ++cur.n;
    cur.forms.push_back(f[1]);
    cur.pos.push_back(f[4] != "_" ? f[4] : f[3]);
    cur.heads.push_back(head);
    cur.rels.push_back(f[7]);
  }
  flush();
  return graphs;
}

// 10-column CoNLL-X layout with "_" for unused fields.
inline std::string write_conll(const DepGraph& g) {
  std::string out;
  for (int i = 1; i <= g.n; ++i) {
    out += std::to_string(i);
    out += '\t';
    out += g.forms[i - 1];
    out += "\t_\t_\t";
    out += g.pos[i - 1].empty() ? "_" : g.pos[i - 1];
    out += "\t_\t";
    out += std::to_string(g.heads[i - 1]);
    out += '\t';
    out += g.rels[i - 1].empty() ? "_" : g.rels[i - 1];
    out += "\t_\t_\n";
  }
  out += '\n';
  return out;
}

inline std::string write_conll(const std::vector<DepGraph>& graphs) {
  std::string out;
  for (const DepGraph& g : graphs) out += write_conll(g);
  return out;
}

}  // namespace headlayer

#endif
