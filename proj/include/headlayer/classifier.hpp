#ifndef HEADLAYER_CLASSIFIER_HPP
#define HEADLAYER_CLASSIFIER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "headlayer/error.hpp"
#include "headlayer/head_assignment.hpp"
#include "headlayer/labels.hpp"
#include "headlayer/tree.hpp"

namespace headlayer {

// One constituent configuration: normalized parent label, ordered normalized
// child labels, and (for training data) the gold head-child index.
struct Instance {
  std::string parent;
  std::vector<std::string> children;
  std::optional<int> gold_index;  // 1-based
};

struct TrainConfig {
  int epochs = 10;
  double learning_rate = 0.1;
  double l2 = 1e-6;
  std::uint64_t seed = 42;
};

constexpr int kFeatureTemplateVersion = 1;

// Linear scorer over string features. Missing features contribute 0, so
// prediction is defined for unseen labels.
struct HeadModel {
  std::unordered_map<std::string, double> weights;
  std::set<std::string> label_vocab;
  TrainConfig metadata;

  double weight(const std::string& feature) const {
    auto it = weights.find(feature);
    return it == weights.end() ? 0.0 : it->second;
  }
};

// One instance per nonterminal, preorder, labels normalized; unlexicalized.
inline std::vector<Instance> extract_instances(const ConstTree& tree,
                                               const HeadAssignment* assignment = nullptr) {
  std::vector<Instance> out;
  for (int id : tree.nonterminals_preorder()) {
    const TreeNode& n = tree.node(id);
    Instance inst;
    inst.parent = normalize_label(n.label);
    inst.children.reserve(n.children.size());
    for (int c : n.children) inst.children.push_back(normalize_label(tree.node(c).label));
    if (assignment) inst.gold_index = assignment->at(id);
    out.push_back(std::move(inst));
  }
  return out;
}

inline std::vector<Instance> extract_instances(const ConstTree& tree,
                                               const HeadAssignment& assignment) {
  return extract_instances(tree, &assignment);
}

namespace detail {

inline std::string count_bucket(int k) {
  if (k >= 5) return "5+";
  return std::to_string(k);
}

}  // namespace detail

// Fixed template set, version 1. Candidate is 1-based.
inline std::vector<std::string> featurize(const Instance& inst, int candidate) {
  int k = static_cast<int>(inst.children.size());
  int i = candidate;
  const std::string& p = inst.parent;
  const std::string& c = inst.children[i - 1];
  std::string left = i > 1 ? inst.children[i - 2] : "<s>";
  std::string right = i < k ? inst.children[i] : "</s>";

  std::vector<std::string> feats;
  feats.reserve(14);
  feats.push_back("P=" + p);
  feats.push_back("C=" + c);
  feats.push_back("P=" + p + "&C=" + c);
  feats.push_back("pos=" + std::to_string(i));
  feats.push_back("rpos=" + std::to_string(k - i + 1));
  feats.push_back("P=" + p + "&pos=" + std::to_string(i));
  feats.push_back("L=" + left);
  feats.push_back("R=" + right);
  feats.push_back("P=" + p + "&L=" + left + "&C=" + c);
  feats.push_back("P=" + p + "&C=" + c + "&R=" + right);
  feats.push_back("k=" + detail::count_bucket(k) + "&P=" + p);
  if (i == 1) feats.push_back("is-leftmost&P=" + p);
  if (i == k) feats.push_back("is-rightmost&P=" + p);
  return feats;
}

namespace detail {

inline std::vector<double> candidate_scores(const HeadModel& model, const Instance& inst) {
  int k = static_cast<int>(inst.children.size());
  std::vector<double> scores(k, 0.0);
  for (int i = 1; i <= k; ++i)
    for (const std::string& f : featurize(inst, i)) scores[i - 1] += model.weight(f);
  return scores;
}

inline std::vector<double> softmax(const std::vector<double>& scores) {
  double mx = *std::max_element(scores.begin(), scores.end());
  std::vector<double> p(scores.size());
  double z = 0.0;
  for (size_t i = 0; i < scores.size(); ++i) {
    p[i] = std::exp(scores[i] - mx);
    z += p[i];
  }
  for (double& v : p) v /= z;
  return p;
}

}  // namespace detail

// Argmax over candidate scores; ties broken by smallest index.
inline int predict(const HeadModel& model, const Instance& inst) {
  std::vector<double> scores = detail::candidate_scores(model, inst);
  int best = 1;
  for (int i = 2; i <= static_cast<int>(scores.size()); ++i)
    if (scores[i - 1] > scores[best - 1]) best = i;
  return best;
}

inline HeadAssignment predict_tree(const HeadModel& model, const ConstTree& tree) {
  HeadAssignment heads(tree.size());
  std::vector<int> order = tree.nonterminals_preorder();
  std::vector<Instance> insts = extract_instances(tree);
  for (size_t i = 0; i < order.size(); ++i) heads.set(order[i], predict(model, insts[i]));
  return heads;
}

// Softmax cross-entropy for one instance, and its gradient with respect to
// every touched feature weight (no regularization term).
inline double instance_loss(const HeadModel& model, const Instance& inst,
                            std::unordered_map<std::string, double>* gradient = nullptr) {
  int k = static_cast<int>(inst.children.size());
  int gold = inst.gold_index.value();
  std::vector<double> scores = detail::candidate_scores(model, inst);
  std::vector<double> probs = detail::softmax(scores);
  if (gradient) {
    for (int i = 1; i <= k; ++i) {
      double coeff = probs[i - 1] - (i == gold ? 1.0 : 0.0);
      for (const std::string& f : featurize(inst, i)) (*gradient)[f] += coeff;
    }
  }
  return -std::log(std::max(probs[gold - 1], 1e-300));
}

inline double dataset_loss(const HeadModel& model, const std::vector<Instance>& instances) {
  double total = 0.0;
  for (const Instance& inst : instances) total += instance_loss(model, inst);
  return total / static_cast<double>(instances.size());
}

using EpochCallback = std::function<void(int, const HeadModel&)>;

// Multinomial logistic objective over the k candidates of each instance,
// minimized by SGD with AdaGrad per-feature step sizes and L2 regularization.
// Deterministic given (data, config): shuffling runs off the single seed.
// The callback sees the model after each epoch (checkpoint selection).
inline HeadModel train(const std::vector<Instance>& instances, const TrainConfig& config = {},
                       std::vector<double>* epoch_losses = nullptr,
                       const EpochCallback& after_epoch = nullptr) {
  if (instances.empty()) throw Error(ErrorKind::NoInstances, "no training instances");
  for (size_t i = 0; i < instances.size(); ++i) {
    if (!instances[i].gold_index)
      throw Error(ErrorKind::MissingGold, "instance " + std::to_string(i));
    int k = static_cast<int>(instances[i].children.size());
    if (*instances[i].gold_index < 1 || *instances[i].gold_index > k)
      throw Error(ErrorKind::MissingGold,
                  "instance " + std::to_string(i) + ": gold index out of range");
  }

  HeadModel model;
  model.metadata = config;
  for (const Instance& inst : instances) {
    model.label_vocab.insert(inst.parent);
    for (const std::string& c : inst.children) model.label_vocab.insert(c);
  }

  std::unordered_map<std::string, double> sumsq;
  std::vector<size_t> order(instances.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(config.seed);

  std::unordered_map<std::string, double> grad;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    // Fisher-Yates with the session rng; std::shuffle ordering is not pinned
    // by the standard.
    for (size_t i = order.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(rng() % i);
      std::swap(order[i - 1], order[j]);
    }
    for (size_t idx : order) {
      const Instance& inst = instances[idx];
      grad.clear();
      instance_loss(model, inst, &grad);
      for (auto& [feature, g] : grad) {
        double& w = model.weights[feature];
        double total = g + config.l2 * w;
        double& acc = sumsq[feature];
        acc += total * total;
        w -= config.learning_rate * total / (std::sqrt(acc) + 1e-8);
      }
    }
    if (epoch_losses) epoch_losses->push_back(dataset_loss(model, instances));
    if (after_epoch) after_epoch(epoch, model);
  }
  return model;
}

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

// Text format: "# headlayer-model v1" header block, then one
// "feature<TAB>weight" line per feature. Weights print at full precision so
// load(save(m)) scores identically.
inline std::string save_model(const HeadModel& model) {
  std::string out;
  out += "# headlayer-model v1\n";
  out += "# epochs " + std::to_string(model.metadata.epochs) + "\n";
  out += "# learning_rate " + detail::format_double(model.metadata.learning_rate) + "\n";
  out += "# l2 " + detail::format_double(model.metadata.l2) + "\n";
  out += "# seed " + std::to_string(model.metadata.seed) + "\n";
  out += "# feature_template_version " + std::to_string(kFeatureTemplateVersion) + "\n";
  out += "# labels";
  for (const std::string& l : model.label_vocab) out += " " + l;
  out += "\n";
  std::map<std::string, double> sorted(model.weights.begin(), model.weights.end());
  for (const auto& [feature, weight] : sorted)
    out += feature + "\t" + detail::format_double(weight) + "\n";
  return out;
}

inline HeadModel load_model(const std::string& text) {
  std::istringstream ss(text);
  std::string line;
  int line_no = 0;
  if (!std::getline(ss, line) || line != "# headlayer-model v1")
    throw Error(ErrorKind::BadHeader, "missing \"# headlayer-model v1\" signature");
  ++line_no;

  HeadModel model;
  while (std::getline(ss, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line);
      std::string hash, key;
      ls >> hash >> key;
      if (key == "epochs") ls >> model.metadata.epochs;
      else if (key == "learning_rate") ls >> model.metadata.learning_rate;
      else if (key == "l2") ls >> model.metadata.l2;
      else if (key == "seed") ls >> model.metadata.seed;
      else if (key == "feature_template_version") {
        int v = 0;
        ls >> v;
        if (v != kFeatureTemplateVersion)
          throw Error(ErrorKind::BadHeader,
                      "unsupported feature_template_version " + std::to_string(v));
      } else if (key == "labels") {
        std::string l;
        while (ls >> l) model.label_vocab.insert(l);
      } else {
        throw Error(ErrorKind::BadHeader,
                    "line " + std::to_string(line_no) + ": unknown header key \"" + key + "\"");
      }
      continue;
    }
    size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw Error(ErrorKind::BadWeightLine, "line " + std::to_string(line_no) + ": missing tab");
    std::string feature = line.substr(0, tab);
    std::string value = line.substr(tab + 1);
    char* end = nullptr;
    double w = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0')
      throw Error(ErrorKind::BadWeightLine,
                  "line " + std::to_string(line_no) + ": bad weight \"" + value + "\"");
    model.weights[feature] = w;
  }
  return model;
}

}  // namespace headlayer

#endif
