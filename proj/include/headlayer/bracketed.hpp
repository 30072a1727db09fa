#ifndef HEADLAYER_BRACKETED_HPP
#define HEADLAYER_BRACKETED_HPP

#include <cctype>
#include <string>
#include <vector>

#include "headlayer/error.hpp"
#include "headlayer/tree.hpp"

namespace headlayer {

namespace detail {

struct BracketLexer {
  const std::string& text;
  size_t pos = 0;
  int line = 1;

  explicit BracketLexer(const std::string& t) : text(t) {}

  void skip_space() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
      if (text[pos] == '\n') ++line;
      ++pos;
    }
  }

  bool eof() {
    skip_space();
    return pos >= text.size();
  }

  char peek() {
    skip_space();
    return text[pos];
  }

  // Maximal run of non-space, non-paren characters.
  std::string atom() {
    skip_space();
    size_t start = pos;
    while (pos < text.size()) {
      char c = text[pos];
      if (c == '(' || c == ')' || std::isspace(static_cast<unsigned char>(c))) break;
      ++pos;
    }
    return text.substr(start, pos - start);
  }
};

// Parses one parenthesized element. Returns the new node id.
inline int parse_element(BracketLexer& lex, ConstTree& tree, int& next_token) {
  // caller guarantees current char is '('
  ++lex.pos;
  if (lex.eof())
    throw Error(ErrorKind::UnbalancedParens, "unexpected end of input at line " + std::to_string(lex.line));

  std::string label;
  if (lex.peek() != '(' && lex.peek() != ')') label = lex.atom();

  std::vector<int> children;
  std::vector<std::string> words;
  size_t word_pos = 0;
  while (true) {
    if (lex.eof())
      throw Error(ErrorKind::UnbalancedParens, "unexpected end of input at line " + std::to_string(lex.line));
    char c = lex.peek();
    if (c == ')') {
      ++lex.pos;
      break;
    }
    if (c == '(') {
      children.push_back(parse_element(lex, tree, next_token));
    } else {
      word_pos = lex.pos;
      words.push_back(lex.atom());
    }
  }

  if (!children.empty() && !words.empty())
    throw Error(ErrorKind::BadToken,
                "word and constituent mixed under one node at position " + std::to_string(word_pos));
  if (words.size() > 1)
    throw Error(ErrorKind::BadToken, "multiple words under one preterminal at position " + std::to_string(word_pos));
  if (children.empty() && words.empty())
    throw Error(ErrorKind::EmptyConstituent, "empty constituent at position " + std::to_string(lex.pos));

  if (words.size() == 1) {
    if (label.empty())
      throw Error(ErrorKind::BadToken, "word without a tag at position " + std::to_string(word_pos));
    return tree.add_preterminal(label, words[0], ++next_token);
  }
  return tree.add_nonterminal(label, std::move(children));
}

}  // namespace detail

// Reads zero or more Penn-style bracketed trees. An extra outer wrapper pair
// with an empty label ("((S ...))") is stripped.
inline std::vector<ConstTree> parse_bracketed(const std::string& text) {
  std::vector<ConstTree> trees;
  detail::BracketLexer lex(text);
  while (!lex.eof()) {
    char c = lex.peek();
    if (c == ')')
      throw Error(ErrorKind::UnbalancedParens,
                  "unmatched \")\" at line " + std::to_string(lex.line));
    if (c != '(')
      throw Error(ErrorKind::BadToken, "stray token outside tree at line " + std::to_string(lex.line));
    ConstTree tree;
    int next_token = 0;
    int root = detail::parse_element(lex, tree, next_token);
    if (tree.node(root).label.empty() && tree.node(root).children.size() == 1)
      root = tree.node(root).children[0];
    tree.set_root(root);
    trees.push_back(std::move(tree));
  }
  return trees;
}

namespace detail {

inline void serialize_node(const ConstTree& tree, int id, std::string& out) {
  const TreeNode& n = tree.node(id);
  out += '(';
  out += n.label;
  if (n.preterminal) {
    out += ' ';
    out += n.word;
  } else {
    for (int c : n.children) {
      out += ' ';
      serialize_node(tree, c, out);
    }
  }
  out += ')';
}

}  // namespace detail

inline std::string serialize_bracketed(const ConstTree& tree) {
  std::string out;
  detail::serialize_node(tree, tree.root(), out);
  return out;
}

}  // namespace headlayer

#endif
