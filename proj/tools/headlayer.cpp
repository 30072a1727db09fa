// headlayer: constituent headedness toolkit.
//
// Subcommands cover the full pipeline: gold head induction from aligned
// constituency/dependency treebanks, rule-based and learned head choosers,
// punctuation normalization, head-driven binarization, deterministic
// constituency-to-dependency conversion, and the evaluation suite.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "headlayer.hpp"

using namespace headlayer;

namespace {

struct GlobalOptions {
  std::uint64_t seed = 42;
  bool strict_align = false;
  bool quiet = false;
  int jobs = 1;
  std::string exclude_path;  // manual sentence exclusions, one 0-based index per line
};

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open \"" + path + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write \"" + path + "\"");
  out << content;
}

std::string fmt_pct(double v) {
  if (std::isnan(v)) return "NaN";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

const char* kSidecarFooter =
    "Sidecar format: one line per sentence of space-separated\n"
    "\"preorderIndex:headIndex\" pairs; preorder counts nonterminals from 0,\n"
    "headIndex is the 1-based head-child position. Failed sentences leave an\n"
    "empty line.";

const char* kRulesFooter =
    "Rule table format: \"PARENT direction LABEL...\" lines, tried in file\n"
    "order per parent; direction is left|right|leftdis|rightdis; an empty\n"
    "label list is purely directional. \"DEFAULT left|right\" sets the\n"
    "fallback. \"#\" comments. Labels match after function-tag stripping.";

const char* kDelimsFooter =
    "Delimiter config format: \"PAIR left right\", \"RIGHT form\", \"TAG tag\"\n"
    "lines; replaces the built-in bracket pairs, sentence-final forms, and\n"
    "punctuation POS tags.";

const char* kConllFooter =
    "CoNLL format: tab- or space-separated ID FORM LEMMA CPOS POS FEATS HEAD\n"
    "DEPREL [...] rows (>= 8 columns), blank line between sentences, \"#\"\n"
    "comments; IDs with \"-\" or \".\" are skipped. Output uses the 10-column\n"
    "layout with \"_\" for unused fields.";

const char* kMapFooter =
    "Label map format: \"P TARGET SOURCE\" (phrase labels), \"T TARGET SOURCE\"\n"
    "(POS tags), \"FALLBACK identity|unk|error\" for unmapped labels.";

std::vector<ConstTree> read_trees(const std::string& path) {
  return parse_bracketed(read_file(path));
}

std::vector<ConstTree> read_stripped_trees(const std::string& path) {
  std::vector<ConstTree> trees = read_trees(path);
  for (ConstTree& t : trees) t = strip_empties(t);
  return trees;
}

std::set<int> read_exclusions(const std::string& path) {
  std::set<int> out;
  std::istringstream ss(read_file(path));
  std::string line;
  while (std::getline(ss, line)) {
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    int idx;
    while (ls >> idx) out.insert(idx);
  }
  return out;
}

std::vector<AlignedSentence> read_aligned(const std::string& trees_path,
                                          const std::string& deps_path,
                                          const GlobalOptions& global, AlignReport& report) {
  std::vector<ConstTree> trees = read_stripped_trees(trees_path);
  std::vector<DepGraph> deps = parse_conll(read_file(deps_path));
  if (!global.exclude_path.empty()) {
    std::set<int> excluded = read_exclusions(global.exclude_path);
    std::vector<ConstTree> kept_trees;
    std::vector<DepGraph> kept_deps;
    for (size_t i = 0; i < trees.size(); ++i) {
      if (excluded.count(static_cast<int>(i))) {
        if (!global.quiet) std::cerr << "excluded sentence " << i << " (exclusion list)\n";
        continue;
      }
      kept_trees.push_back(std::move(trees[i]));
      if (i < deps.size()) kept_deps.push_back(std::move(deps[i]));
    }
    trees = std::move(kept_trees);
    deps = std::move(kept_deps);
  }
  std::vector<AlignedSentence> aligned = align(trees, deps, report, global.strict_align);
  if (!global.quiet) {
    for (const auto& e : report.excluded)
      std::cerr << "excluded sentence " << e.index << " (" << e.reason << ": " << e.detail << ")\n";
    for (const auto& w : report.warnings)
      std::cerr << "warning: sentence " << w.index << " form mismatch (" << w.detail << ")\n";
  }
  return aligned;
}

std::vector<HeadAssignment> read_sidecar(const std::string& path,
                                         const std::vector<ConstTree>& trees) {
  std::istringstream ss(read_file(path));
  std::vector<HeadAssignment> out;
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (static_cast<size_t>(line_no) > trees.size())
      throw Error(ErrorKind::BadSidecar, "more sidecar lines than trees");
    out.push_back(parse_sidecar_line(trees[line_no - 1], line, line_no));
  }
  if (out.size() != trees.size())
    throw Error(ErrorKind::BadSidecar, std::to_string(out.size()) + " sidecar lines for " +
                                           std::to_string(trees.size()) + " trees");
  return out;
}

HeadChooser rules_chooser(const RuleTable& table) {
  return [&table](const std::string& parent, const std::vector<std::string>& children) {
    return percolate(table, parent, children);
  };
}

HeadChooser model_chooser(const HeadModel& model) {
  return [&model](const std::string& parent, const std::vector<std::string>& children) {
    Instance inst;
    inst.parent = parent;
    inst.children = children;
    return predict(model, inst);
  };
}

// Per-sentence map with deterministic output ordering under --jobs.
template <typename Fn>
std::vector<std::string> map_to_lines(const std::vector<ConstTree>& items, int jobs, Fn&& fn) {
  std::vector<std::string> lines(items.size());
  parallel_for(items.size(), jobs, [&](std::size_t i) { lines[i] = fn(items[i]); });
  return lines;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const std::string& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

struct HeadSourceOptions {
  std::string source;  // rules|model|oracle|file
  std::string rules_path;
  std::string model_path;
  std::string deps_path;
  std::string heads_path;
  std::string delims_path;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--heads", source, "head source: rules|model|oracle|file")
        ->check(CLI::IsMember({"rules", "model", "oracle", "file"}))
        ->required();
    cmd->add_option("--rules", rules_path, "percolation rule table (for --heads rules)");
    cmd->add_option("--model", model_path, "trained head model (for --heads model)");
    cmd->add_option("--deps", deps_path, "CoNLL dependencies (for --heads oracle)");
    cmd->add_option("--heads-file", heads_path, "sidecar head file (for --heads file)");
    cmd->add_option("--delims", delims_path, "delimiter config for @-node head fallbacks");
  }

  DelimiterConfig delims() const {
    return delims_path.empty() ? default_delimiter_config()
                               : load_delimiter_config(read_file(delims_path));
  }

  std::vector<HeadAssignment> resolve(const std::vector<ConstTree>& trees, int jobs) const {
    DelimiterConfig cfg = delims();
    std::vector<HeadAssignment> out(trees.size());
    if (source == "rules") {
      if (rules_path.empty()) throw Error(ErrorKind::IoError, "--heads rules needs --rules");
      RuleTable table = load_rules(read_file(rules_path));
      HeadChooser chooser = rules_chooser(table);
      parallel_for(trees.size(), jobs,
                   [&](std::size_t i) { out[i] = assign_heads(trees[i], chooser, cfg); });
    } else if (source == "model") {
      if (model_path.empty()) throw Error(ErrorKind::IoError, "--heads model needs --model");
      HeadModel model = load_model(read_file(model_path));
      HeadChooser chooser = model_chooser(model);
      parallel_for(trees.size(), jobs,
                   [&](std::size_t i) { out[i] = assign_heads(trees[i], chooser, cfg); });
    } else if (source == "oracle") {
      if (deps_path.empty()) throw Error(ErrorKind::IoError, "--heads oracle needs --deps");
      std::vector<DepGraph> deps = parse_conll(read_file(deps_path));
      if (deps.size() != trees.size())
        throw Error(ErrorKind::LengthMismatch,
                    std::to_string(trees.size()) + " trees vs " + std::to_string(deps.size()) +
                        " dependency sentences");
      parallel_for(trees.size(), jobs, [&](std::size_t i) {
        InductionResult r = induce_heads_extended(trees[i], deps[i], cfg);
        if (!r.ok())
          throw Error(ErrorKind::InductionFailed,
                      "sentence " + std::to_string(i) + ": " +
                          std::to_string(r.failure->candidate_count) +
                          " span-head candidates at preorder node " +
                          std::to_string(r.failure->preorder_index));
        out[i] = std::move(*r.assignment);
      });
    } else {  // file
      if (heads_path.empty()) throw Error(ErrorKind::IoError, "--heads file needs --heads-file");
      out = read_sidecar(heads_path, trees);
    }
    return out;
  }
};

int cmd_induce_heads(const GlobalOptions& global, const std::string& trees_path,
                     const std::string& deps_path, const std::string& out_path, bool verbose) {
  AlignReport areport;
  std::vector<AlignedSentence> aligned = read_aligned(trees_path, deps_path, global, areport);
  std::vector<std::string> lines(aligned.size());
  std::vector<std::string> failures(aligned.size());
  parallel_for(aligned.size(), global.jobs, [&](std::size_t i) {
    if (verbose) {
      std::vector<InductionFailure> fs = induction_failures(aligned[i]);
      if (!fs.empty()) {
        std::string msg;
        for (const auto& f : fs)
          msg += " node " + std::to_string(f.preorder_index) + " (" +
                 std::to_string(f.candidate_count) + " candidates)";
        failures[i] = msg;
        return;
      }
    }
    InductionResult r = induce_heads(aligned[i]);
    if (r.ok()) {
      lines[i] = format_sidecar_line(aligned[i].tree, *r.assignment);
    } else {
      failures[i] = " node " + std::to_string(r.failure->preorder_index) + " (" +
                    std::to_string(r.failure->candidate_count) + " candidates)";
    }
  });
  int failed = 0;
  for (size_t i = 0; i < failures.size(); ++i) {
    if (failures[i].empty()) continue;
    ++failed;
    if (!global.quiet)
      std::cerr << "sentence " << i << ": no unique span head at" << failures[i] << "\n";
  }
  write_file(out_path, join_lines(lines));
  if (!global.quiet)
    std::cerr << "induced " << (lines.size() - failed) << "/" << lines.size() << " sentences\n";
  return 0;
}

int cmd_train(const GlobalOptions& global, const std::string& trees_path,
              const std::string& deps_path, const std::string& out_path, TrainConfig config,
              const std::string& dev_trees_path, const std::string& dev_deps_path) {
  config.seed = global.seed;
  AlignReport areport;
  std::vector<AlignedSentence> aligned = read_aligned(trees_path, deps_path, global, areport);
  CorpusInductionReport ireport;
  auto pairs = induce_corpus(aligned, ireport);
  if (!global.quiet)
    for (const auto& f : ireport.failures)
      std::cerr << "skipping sentence " << f.sentence_index << ": no unique span head\n";
  std::vector<Instance> instances;
  for (const auto& [idx, heads] : pairs) {
    std::vector<Instance> insts = extract_instances(aligned[idx].tree, heads);
    instances.insert(instances.end(), insts.begin(), insts.end());
  }

  HeadModel best;
  if (!dev_trees_path.empty() && !dev_deps_path.empty()) {
    AlignReport dev_report;
    std::vector<AlignedSentence> dev =
        read_aligned(dev_trees_path, dev_deps_path, global, dev_report);
    CorpusInductionReport dev_ireport;
    auto dev_pairs = induce_corpus(dev, dev_ireport);
    std::vector<Instance> dev_instances;
    for (const auto& [idx, heads] : dev_pairs) {
      std::vector<Instance> insts = extract_instances(dev[idx].tree, heads);
      dev_instances.insert(dev_instances.end(), insts.begin(), insts.end());
    }
    if (dev_instances.empty()) throw Error(ErrorKind::NoInstances, "empty development set");
    double best_loss = std::numeric_limits<double>::infinity();
    train(instances, config, nullptr, [&](int epoch, const HeadModel& m) {
      double loss = dataset_loss(m, dev_instances);
      if (!global.quiet) std::cerr << "epoch " << epoch + 1 << ": dev loss " << loss << "\n";
      if (loss < best_loss) {
        best_loss = loss;
        best = m;
      }
    });
  } else {
    best = train(instances, config);
  }
  write_file(out_path, save_model(best));
  if (!global.quiet)
    std::cerr << "trained on " << instances.size() << " instances from " << pairs.size()
              << " sentences\n";
  return 0;
}

int cmd_eval_heads(const GlobalOptions& global, const std::string& trees_path,
                   const std::string& gold_path, const std::string& gold_deps_path,
                   const std::string& pred_path, bool per_category) {
  std::vector<ConstTree> trees;
  std::vector<HeadAssignment> gold;
  if (!gold_deps_path.empty()) {
    AlignReport areport;
    std::vector<AlignedSentence> aligned =
        read_aligned(trees_path, gold_deps_path, global, areport);
    for (const AlignedSentence& s : aligned) {
      InductionResult r = induce_heads(s);
      if (!r.ok())
        throw Error(ErrorKind::InductionFailed,
                    "gold induction failed; filter the corpus with induce-heads first");
      trees.push_back(s.tree);
      gold.push_back(std::move(*r.assignment));
    }
  } else {
    trees = read_trees(trees_path);
    gold = read_sidecar(gold_path, trees);
  }
  std::vector<HeadAssignment> pred = read_sidecar(pred_path, trees);
  HeadAccuracy acc = head_accuracy(gold, pred, trees);
  std::cout << "accuracy=" << fmt_pct(100.0 * acc.overall.fraction()) << "\n";
  std::cout << "matches=" << acc.overall.matches << "\n";
  std::cout << "total=" << acc.overall.total << "\n";
  if (per_category)
    for (const auto& [cat, c] : acc.by_category)
      std::cout << "category_" << cat << "=" << fmt_pct(100.0 * c.fraction()) << " (" << c.matches
                << "/" << c.total << ")\n";
  return 0;
}

int cmd_transfer(const GlobalOptions& global, const std::string& model_path,
                 const std::string& map_path, const std::string& trees_path,
                 const std::string& deps_path, const std::string& out_path) {
  HeadModel model = load_model(read_file(model_path));
  LabelMap map = load_label_map(read_file(map_path));
  if (deps_path.empty()) {
    std::vector<ConstTree> trees = read_trees(trees_path);
    TransferCoverage cov;
    std::vector<std::string> lines;
    lines.reserve(trees.size());
    for (const ConstTree& t : trees)
      lines.push_back(format_sidecar_line(t, transfer_predict(model, map, t, cov)));
    write_file(out_path, join_lines(lines));
    if (!global.quiet)
      std::cerr << "labels mapped=" << cov.mapped << " identity=" << cov.identity
                << " unk=" << cov.unk << "\n";
    return 0;
  }
  AlignReport areport;
  std::vector<AlignedSentence> aligned = read_aligned(trees_path, deps_path, global, areport);
  TransferEvalReport report = transfer_eval(model, map, aligned);
  std::cout << "accuracy=" << fmt_pct(100.0 * report.accuracy.overall.fraction()) << "\n";
  std::cout << "matches=" << report.accuracy.overall.matches << "\n";
  std::cout << "total=" << report.accuracy.overall.total << "\n";
  std::cout << "sentences_scored=" << report.sentences_scored << "\n";
  std::cout << "induction_failures=" << report.induction_failures << "\n";
  std::cout << "labels_mapped=" << report.coverage.mapped << "\n";
  std::cout << "labels_identity=" << report.coverage.identity << "\n";
  std::cout << "labels_unk=" << report.coverage.unk << "\n";
  for (const auto& [cat, c] : report.accuracy.by_category)
    std::cout << "category_" << cat << "=" << fmt_pct(100.0 * c.fraction()) << " (" << c.matches
              << "/" << c.total << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"headlayer: constituent headedness toolkit"};
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--seed", global.seed, "seed for all randomized steps");
  app.add_flag("--strict-align", global.strict_align, "exclude form mismatches instead of warning");
  app.add_flag("--quiet", global.quiet, "suppress progress and warnings on stderr");
  app.add_option("--jobs", global.jobs, "parallel workers for per-sentence stages")
      ->check(CLI::PositiveNumber);
  app.add_option("--exclude", global.exclude_path,
                 "file of 0-based sentence indices dropped before alignment");

  std::function<int()> action;

  {
    auto* cmd = app.add_subcommand(
        "induce-heads", "derive gold head children from aligned trees and dependencies");
    cmd->footer(kSidecarFooter);
    auto trees = std::make_shared<std::string>();
    auto deps = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>("-");
    auto verbose = std::make_shared<bool>(false);
    cmd->add_option("--trees", *trees, "bracketed constituency file")->required();
    cmd->add_option("--deps", *deps, "CoNLL dependency file")->required();
    cmd->add_option("--out", *out, "sidecar head output (default stdout)");
    cmd->add_flag("--verbose", *verbose, "report every failing node, not just the first");
    cmd->callback([&action, &global, trees, deps, out, verbose]() {
      action = [&global, trees, deps, out, verbose]() {
        return cmd_induce_heads(global, *trees, *deps, *out, *verbose);
      };
    });
  }

  {
    auto* cmd = app.add_subcommand("percolate", "assign heads with a Collins-style rule table");
    cmd->footer(kRulesFooter);
    auto rules = std::make_shared<std::string>();
    auto trees = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>("-");
    auto delims = std::make_shared<std::string>();
    cmd->add_option("--rules", *rules, "rule table file")->required();
    cmd->add_option("--trees", *trees, "bracketed constituency file")->required();
    cmd->add_option("--out", *out, "sidecar head output (default stdout)");
    cmd->add_option("--delims", *delims, "delimiter config for @-node fallbacks");
    cmd->callback([&action, &global, rules, trees, out, delims]() {
      action = [&global, rules, trees, out, delims]() {
        RuleTable table = load_rules(read_file(*rules));
        DelimiterConfig cfg = delims->empty() ? default_delimiter_config()
                                              : load_delimiter_config(read_file(*delims));
        std::vector<ConstTree> ts = read_trees(*trees);
        HeadChooser chooser = rules_chooser(table);
        std::vector<std::string> lines = map_to_lines(ts, global.jobs, [&](const ConstTree& t) {
          return format_sidecar_line(t, assign_heads(t, chooser, cfg));
        });
        write_file(*out, join_lines(lines));
        return 0;
      };
    });
  }

  {
    auto* cmd = app.add_subcommand("train", "train the learned head chooser");
    auto trees = std::make_shared<std::string>();
    auto deps = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto dev_trees = std::make_shared<std::string>();
    auto dev_deps = std::make_shared<std::string>();
    auto cfg = std::make_shared<TrainConfig>();
    cmd->add_option("--trees", *trees, "training constituency file")->required();
    cmd->add_option("--deps", *deps, "training CoNLL dependency file")->required();
    cmd->add_option("--out", *out, "model output path")->required();
    cmd->add_option("--dev-trees", *dev_trees, "development constituency file");
    cmd->add_option("--dev-deps", *dev_deps, "development CoNLL dependency file");
    cmd->add_option("--epochs", cfg->epochs, "training epochs");
    cmd->add_option("--lr", cfg->learning_rate, "learning rate");
    cmd->add_option("--l2", cfg->l2, "L2 regularization strength");
    cmd->callback([&action, &global, trees, deps, out, dev_trees, dev_deps, cfg]() {
      action = [&global, trees, deps, out, dev_trees, dev_deps, cfg]() {
        return cmd_train(global, *trees, *deps, *out, *cfg, *dev_trees, *dev_deps);
      };
    });
  }

  {
    auto* cmd = app.add_subcommand("predict-heads", "assign heads with a trained model");
    cmd->footer(kSidecarFooter);
    auto model_path = std::make_shared<std::string>();
    auto trees = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>("-");
    auto delims = std::make_shared<std::string>();
    cmd->add_option("--model", *model_path, "trained model file")->required();
    cmd->add_option("--trees", *trees, "bracketed constituency file")->required();
    cmd->add_option("--out", *out, "sidecar head output (default stdout)");
    cmd->add_option("--delims", *delims, "delimiter config for @-node fallbacks");
    cmd->callback([&action, &global, model_path, trees, out, delims]() {
      action = [&global, model_path, trees, out, delims]() {
        HeadModel model = load_model(read_file(*model_path));
        DelimiterConfig cfg = delims->empty() ? default_delimiter_config()
                                              : load_delimiter_config(read_file(*delims));
        std::vector<ConstTree> ts = read_trees(*trees);
        HeadChooser chooser = model_chooser(model);
        std::vector<std::string> lines = map_to_lines(ts, global.jobs, [&](const ConstTree& t) {
          return format_sidecar_line(t, assign_heads(t, chooser, cfg));
        });
        write_file(*out, join_lines(lines));
        return 0;
      };
    });
  }

  {
    auto* cmd = app.add_subcommand("normalize", "punctuation-aware normalization");
    cmd->footer(kDelimsFooter);
    auto trees = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>("-");
    auto delims = std::make_shared<std::string>();
    cmd->add_option("--trees", *trees, "bracketed constituency file")->required();
    cmd->add_option("--out", *out, "bracketed output (default stdout)");
    cmd->add_option("--delims", *delims, "delimiter config file");
    cmd->callback([&action, &global, trees, out, delims]() {
      action = [&global, trees, out, delims]() {
        DelimiterConfig cfg = delims->empty() ? default_delimiter_config()
                                              : load_delimiter_config(read_file(*delims));
        std::vector<ConstTree> ts = read_trees(*trees);
        std::vector<std::string> lines = map_to_lines(ts, global.jobs, [&](const ConstTree& t) {
          return serialize_bracketed(normalize_punct(t, cfg));
        });
        write_file(*out, join_lines(lines));
        return 0;
      };
    });
  }

  {
    auto* cmd = app.add_subcommand("binarize", "head-driven binarization");
    cmd->footer(kDelimsFooter);
    auto trees = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>("-");
    auto source = std::make_shared<HeadSourceOptions>();
    cmd->add_option("--trees", *trees, "bracketed constituency file")->required();
    cmd->add_option("--out", *out, "bracketed output (default stdout)");
    source->add_to(cmd);
    cmd->callback([&action, &global, trees, out, source]() {
      action = [&global, trees, out, source]() {
        // oracle heads align with the dependency file, so strip traces
        std::vector<ConstTree> ts =
            source->source == "oracle" ? read_stripped_trees(*trees) : read_trees(*trees);
        std::vector<HeadAssignment> heads = source->resolve(ts, global.jobs);
        std::vector<std::string> lines(ts.size());
        parallel_for(ts.size(), global.jobs, [&](std::size_t i) {
          lines[i] = serialize_bracketed(binarize(ts[i], heads[i]));
        });
        write_file(*out, join_lines(lines));
        return 0;
      };
    });
  }

  {
    auto* cmd = app.add_subcommand("debinarize", "splice @-nodes back into their parents");
    auto trees = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>("-");
    cmd->add_option("--trees", *trees, "bracketed (binarized) file")->required();
    cmd->add_option("--out", *out, "bracketed output (default stdout)");
    cmd->callback([&action, &global, trees, out]() {
      action = [&global, trees, out]() {
        std::vector<ConstTree> ts = read_trees(*trees);
        std::vector<std::string> lines = map_to_lines(ts, global.jobs, [](const ConstTree& t) {
          return serialize_bracketed(debinarize(t));
        });
        write_file(*out, join_lines(lines));
        return 0;
      };
    });
  }

  {
    auto* cmd = app.add_subcommand("convert", "constituency-to-dependency conversion");
    cmd->footer(kConllFooter);
    auto trees = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>("-");
    auto source = std::make_shared<HeadSourceOptions>();
    auto no_auto = std::make_shared<bool>(false);
    cmd->add_option("--trees", *trees, "bracketed constituency file")->required();
    cmd->add_option("--out", *out, "CoNLL output (default stdout)");
    cmd->add_flag("--no-auto-debinarize", *no_auto, "reject @-labeled input instead of splicing");
    source->add_to(cmd);
    cmd->callback([&action, &global, trees, out, source, no_auto]() {
      action = [&global, trees, out, source, no_auto]() {
        // oracle conversion aligns with the dependency file, so strip traces
        std::vector<ConstTree> ts =
            source->source == "oracle" ? read_stripped_trees(*trees) : read_trees(*trees);
        // choosers run on n-ary configurations; sidecar files index the
        // input trees as-is, so those project through the @-spines instead
        if (!*no_auto && source->source != "file")
          for (ConstTree& t : ts)
            if (has_intermediate_nodes(t)) t = debinarize(t);
        std::vector<HeadAssignment> heads = source->resolve(ts, global.jobs);
        ConvertOptions opts;
        opts.auto_debinarize = !*no_auto;
        std::vector<std::string> chunks(ts.size());
        parallel_for(ts.size(), global.jobs, [&](std::size_t i) {
          chunks[i] = write_conll(convert(ts[i], heads[i], opts));
        });
        std::string all;
        for (const std::string& c : chunks) all += c;
        write_file(*out, all);
        return 0;
      };
    });
  }

  {
    auto* cmd = app.add_subcommand("eval-heads", "head accuracy against gold heads");
    auto trees = std::make_shared<std::string>();
    auto gold = std::make_shared<std::string>();
    auto deps = std::make_shared<std::string>();
    auto pred = std::make_shared<std::string>();
    auto per_category = std::make_shared<bool>(false);
    cmd->add_option("--trees", *trees, "bracketed constituency file")->required();
    cmd->add_option("--gold", *gold, "gold sidecar head file");
    cmd->add_option("--deps", *deps, "gold CoNLL dependencies (heads induced on the fly)");
    cmd->add_option("--pred", *pred, "predicted sidecar head file")->required();
    cmd->add_flag("--per-category", *per_category, "print the per-category breakdown");
    cmd->callback([&action, &global, trees, gold, deps, pred, per_category]() {
      action = [&global, trees, gold, deps, pred, per_category]() {
        if (gold->empty() && deps->empty())
          throw Error(ErrorKind::IoError, "eval-heads needs --gold or --deps");
        return cmd_eval_heads(global, *trees, *gold, *deps, *pred, *per_category);
      };
    });
  }

  {
    auto* cmd = app.add_subcommand("eval-brackets", "labeled bracket precision/recall/F1");
    auto gold = std::make_shared<std::string>();
    auto pred = std::make_shared<std::string>();
    auto exclude_punct = std::make_shared<bool>(false);
    auto delims = std::make_shared<std::string>();
    cmd->add_option("--gold", *gold, "gold bracketed file")->required();
    cmd->add_option("--pred", *pred, "predicted bracketed file")->required();
    cmd->add_flag("--exclude-punct", *exclude_punct, "legacy punctuation-excluded scoring");
    cmd->add_option("--delims", *delims, "delimiter config naming the punctuation tags");
    cmd->callback([&action, &global, gold, pred, exclude_punct, delims]() {
      action = [&global, gold, pred, exclude_punct, delims]() {
        BracketOptions opts;
        opts.exclude_punct = *exclude_punct;
        DelimiterConfig cfg = delims->empty() ? default_delimiter_config()
                                              : load_delimiter_config(read_file(*delims));
        opts.punct_tags = cfg.punct_tags;
        BracketScore s = bracket_prf(read_trees(*gold), read_trees(*pred), opts);
        std::cout << "precision=" << fmt_pct(s.precision) << "\n";
        std::cout << "recall=" << fmt_pct(s.recall) << "\n";
        std::cout << "f1=" << fmt_pct(s.f1) << "\n";
        std::cout << "complete_match=" << fmt_pct(s.complete_match_rate) << "\n";
        std::cout << "matched=" << s.matched << "\n";
        std::cout << "gold_brackets=" << s.gold_brackets << "\n";
        std::cout << "pred_brackets=" << s.pred_brackets << "\n";
        return 0;
      };
    });
  }

  {
    auto* cmd = app.add_subcommand("eval-uas", "unlabeled attachment score");
    cmd->footer(kConllFooter);
    auto gold = std::make_shared<std::string>();
    auto pred = std::make_shared<std::string>();
    cmd->add_option("--gold", *gold, "gold CoNLL file")->required();
    cmd->add_option("--pred", *pred, "predicted CoNLL file")->required();
    cmd->callback([&action, &global, gold, pred]() {
      action = [&global, gold, pred]() {
        std::vector<DepGraph> g = parse_conll(read_file(*gold));
        std::vector<DepGraph> p = parse_conll(read_file(*pred));
        if (g.size() != p.size())
          throw Error(ErrorKind::LengthMismatch,
                      std::to_string(g.size()) + " gold vs " + std::to_string(p.size()) +
                          " predicted sentences");
        double score = uas(g, p);
        long long total = 0;
        for (const DepGraph& d : g) total += d.n;
        std::cout << "uas=" << fmt_pct(100.0 * score) << "\n";
        std::cout << "tokens=" << total << "\n";
        return 0;
      };
    });
  }

  {
    auto* cmd = app.add_subcommand("diff-binarized",
                                   "compare two binarized treebanks, @-brackets included");
    auto a = std::make_shared<std::string>();
    auto b = std::make_shared<std::string>();
    auto examples = std::make_shared<int>(5);
    cmd->add_option("--a", *a, "first bracketed file (treated as gold)")->required();
    cmd->add_option("--b", *b, "second bracketed file")->required();
    cmd->add_option("--examples", *examples, "max divergent sentence pairs to print");
    cmd->callback([&action, &global, a, b, examples]() {
      action = [&global, a, b, examples]() {
        TreebankDiff diff = treebank_diff(read_trees(*a), read_trees(*b), *examples);
        std::cout << "f1=" << fmt_pct(diff.brackets.f1) << "\n";
        std::cout << "precision=" << fmt_pct(diff.brackets.precision) << "\n";
        std::cout << "recall=" << fmt_pct(diff.brackets.recall) << "\n";
        std::cout << "complete_match=" << fmt_pct(diff.complete_match_rate) << "\n";
        for (size_t i = 0; i < diff.divergent_examples.size(); ++i) {
          std::cout << "divergent_" << i << "_index=" << diff.divergent_examples[i].index << "\n";
          std::cout << "divergent_" << i << "_a=" << diff.divergent_examples[i].a << "\n";
          std::cout << "divergent_" << i << "_b=" << diff.divergent_examples[i].b << "\n";
        }
        return 0;
      };
    });
  }

  {
    auto* cmd =
        app.add_subcommand("transfer", "apply a trained model across resources via a label map");
    cmd->footer(kMapFooter);
    auto model_path = std::make_shared<std::string>();
    auto map_path = std::make_shared<std::string>();
    auto trees = std::make_shared<std::string>();
    auto deps = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>("-");
    cmd->add_option("--model", *model_path, "trained model file")->required();
    cmd->add_option("--map", *map_path, "label map file (phi/psi)")->required();
    cmd->add_option("--trees", *trees, "target bracketed file")->required();
    cmd->add_option("--deps", *deps, "target CoNLL file (enables evaluation)");
    cmd->add_option("--out", *out, "sidecar output when no --deps given");
    cmd->callback([&action, &global, model_path, map_path, trees, deps, out]() {
      action = [&global, model_path, map_path, trees, deps, out]() {
        return cmd_transfer(global, *model_path, *map_path, *trees, *deps, *out);
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << "\n";
    return 2;
  }

  try {
    return action();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
