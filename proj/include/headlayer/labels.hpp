#ifndef HEADLAYER_LABELS_HPP
#define HEADLAYER_LABELS_HPP

#include <string>
#include <unordered_map>

namespace headlayer {

// Strips function tags and co-index suffixes: everything from the first '-'
// or '=' onward. Labels that begin with '-' (e.g. -LRB-, -NONE-) are escape
// forms and pass through unchanged.
inline std::string normalize_label(const std::string& label) {
  if (label.empty() || label[0] == '-') return label;
  size_t cut = label.find_first_of("-=");
  if (cut == std::string::npos) return label;
  return label.substr(0, cut);
}

// Canonical form of a token for alignment: PTB bracket escapes and quote
// escapes map to their literal characters before comparison.
inline std::string normalize_form(const std::string& form) {
  static const std::unordered_map<std::string, std::string> table = {
      {"-LRB-", "("}, {"-RRB-", ")"}, {"-LCB-", "{"}, {"-RCB-", "}"},
      {"-LSB-", "["}, {"-RSB-", "]"}, {"``", "\""},   {"''", "\""},
  };
  auto it = table.find(form);
  return it == table.end() ? form : it->second;
}

inline bool forms_match(const std::string& a, const std::string& b) {
  return normalize_form(a) == normalize_form(b);
}

}  // namespace headlayer

#endif
