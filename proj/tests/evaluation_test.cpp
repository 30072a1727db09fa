#include <cmath>
#include <map>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "headlayer/conversion.hpp"
#include "headlayer/evaluation.hpp"
#include "support/fixtures.hpp"
#include "support/random_trees.hpp"

using namespace headlayer;

namespace {

HeadAssignment heads_by_label(const ConstTree& t, const std::map<std::string, int>& by_label) {
  HeadAssignment h(t.size());
  for (int id : t.nonterminals_preorder()) h.set(id, by_label.at(t.node(id).label));
  return h;
}

}  // namespace

TEST_CASE("head_accuracy identity and counting") {
  ConstTree t = fixtures::tree_a();
  HeadAssignment gold = heads_by_label(t, {{"S", 2}, {"NP", 2}, {"VP", 1}});
  HeadAssignment pred = heads_by_label(t, {{"S", 1}, {"NP", 2}, {"VP", 1}});

  HeadAccuracy same = head_accuracy({gold}, {gold}, {t});
  CHECK(same.overall.fraction() == 1.0);

  HeadAccuracy acc = head_accuracy({gold}, {pred}, {t});
  CHECK(acc.overall.matches == 2);
  CHECK(acc.overall.total == 3);
  CHECK(acc.overall.fraction() == Catch::Approx(2.0 / 3.0));
  CHECK(acc.by_category.at("S").matches == 0);
  CHECK(acc.by_category.at("NP").fraction() == 1.0);
}

TEST_CASE("head_accuracy of an empty corpus is NaN") {
  HeadAccuracy acc = head_accuracy({}, {}, {});
  CHECK(std::isnan(acc.overall.fraction()));
}

TEST_CASE("head_accuracy overall equals count-weighted mean of categories") {
  testsupport::RandomTreeGen gen(71);
  std::vector<ConstTree> trees;
  std::vector<HeadAssignment> gold, pred;
  for (int i = 0; i < 30; ++i) {
    ConstTree t = gen.tree();
    gold.push_back(gen.random_heads(t));
    pred.push_back(gen.random_heads(t));
    trees.push_back(std::move(t));
  }
  HeadAccuracy acc = head_accuracy(gold, pred, trees);
  long long matches = 0, total = 0;
  for (const auto& [cat, c] : acc.by_category) {
    matches += c.matches;
    total += c.total;
  }
  CHECK(matches == acc.overall.matches);
  CHECK(total == acc.overall.total);
}

TEST_CASE("head_accuracy detects node-set mismatches") {
  ConstTree t = fixtures::tree_a();
  HeadAssignment full = heads_by_label(t, {{"S", 2}, {"NP", 2}, {"VP", 1}});
  HeadAssignment partial(t.size());
  partial.set(t.root(), 1);
  CHECK_THROWS_MATCHES(head_accuracy({full}, {partial}, {t}), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.kind() == ErrorKind::NodeSetMismatch;
                       }));
}

TEST_CASE("bracket_prf on identical trees is 100 everywhere") {
  std::vector<ConstTree> corpus = {fixtures::tree_a(), parse_bracketed("(NP (NN x))")[0]};
  BracketScore s = bracket_prf(corpus, corpus);
  CHECK(s.precision == 100.0);
  CHECK(s.recall == 100.0);
  CHECK(s.f1 == 100.0);
  CHECK(s.complete_match_rate == 100.0);
}

TEST_CASE("bracket_prf hand-computed example scores F1 40") {
  ConstTree gold = fixtures::tree_a();
  ConstTree pred = parse_bracketed("(S (NP (DT the) (NN dog) (VBZ barks)))")[0];
  BracketScore s = bracket_prf({gold}, {pred});
  CHECK(s.gold_brackets == 3);
  CHECK(s.pred_brackets == 2);
  CHECK(s.matched == 1);
  CHECK(s.precision == Catch::Approx(50.0));
  CHECK(s.recall == Catch::Approx(100.0 / 3.0));
  CHECK(s.f1 == Catch::Approx(40.0));
  CHECK(s.complete_match_rate == 0.0);
}

TEST_CASE("bracket_prf compares labels after normalization") {
  ConstTree gold = parse_bracketed("(S (NP-SBJ (NN x)))")[0];
  ConstTree pred = parse_bracketed("(S (NP (NN x)))")[0];
  BracketScore s = bracket_prf({gold}, {pred});
  CHECK(s.f1 == 100.0);
}

TEST_CASE("bracket_prf rejects token-count mismatches") {
  ConstTree a = fixtures::tree_a();
  ConstTree b = parse_bracketed("(NP (NN x))")[0];
  CHECK_THROWS_MATCHES(bracket_prf({a}, {b}), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.kind() == ErrorKind::TokenCountMismatch;
                       }));
}

TEST_CASE("bracket precision/recall swap under argument swap") {
  testsupport::RandomTreeGen gen(73);
  for (int trial = 0; trial < 30; ++trial) {
    ConstTree t = gen.tree();
    HeadAssignment h = gen.random_heads(t);
    ConstTree a = binarize(t, h);
    ConstTree b = binarize(t, gen.random_heads(t));
    BracketScore ab = bracket_prf({a}, {b});
    BracketScore ba = bracket_prf({b}, {a});
    CHECK(ab.precision == Catch::Approx(ba.recall));
    CHECK(ab.recall == Catch::Approx(ba.precision));
    CHECK(ab.f1 == Catch::Approx(ba.f1));
  }
}

TEST_CASE("bracket_prf can exclude punctuation for legacy scoring") {
  ConstTree gold = parse_bracketed("(S (NP (NN dogs)) (VP (VBP bark)) (. .))")[0];
  // pred attaches the period inside VP: punctuation-included scoring sees
  // different VP spans, punctuation-excluded scoring sees identical ones
  ConstTree pred = parse_bracketed("(S (NP (NN dogs)) (VP (VBP bark) (. .)))")[0];
  BracketScore incl = bracket_prf({gold}, {pred});
  CHECK(incl.f1 < 100.0);
  BracketOptions opts;
  opts.exclude_punct = true;
  opts.punct_tags = default_delimiter_config().punct_tags;
  BracketScore excl = bracket_prf({gold}, {pred}, opts);
  CHECK(excl.f1 == 100.0);
}

TEST_CASE("uas identity, zero, and micro-average") {
  DepGraph d = fixtures::dep_a();
  CHECK(uas({d}, {d}) == 1.0);

  ConstTree t = fixtures::tree_a();
  DepGraph leftmost = convert(t, heads_by_label(t, {{"S", 1}, {"NP", 1}, {"VP", 1}}));
  CHECK(uas({d}, {leftmost}) == 0.0);

  DepGraph single;
  single.n = 1;
  single.heads = {0};
  single.forms = {"x"};
  single.pos = {"NN"};
  single.rels = {"root"};
  CHECK(uas({d, single}, {d, single}) == 1.0);
}

TEST_CASE("uas is invariant to sentence permutation") {
  testsupport::RandomTreeGen gen(79);
  std::vector<DepGraph> gold, pred;
  for (int i = 0; i < 20; ++i) {
    ConstTree t = gen.tree();
    gold.push_back(convert(t, gen.random_heads(t)));
    pred.push_back(convert(t, gen.random_heads(t)));
  }
  double base = uas(gold, pred);
  std::vector<size_t> perm(gold.size());
  for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::mt19937 rng(4);
  for (size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng() % i]);
  std::vector<DepGraph> g2, p2;
  for (size_t i : perm) {
    g2.push_back(gold[i]);
    p2.push_back(pred[i]);
  }
  CHECK(uas(g2, p2) == Catch::Approx(base));
}

TEST_CASE("uas rejects mismatched sentence lengths") {
  DepGraph d = fixtures::dep_a();
  DepGraph shorter;
  shorter.n = 1;
  shorter.heads = {0};
  shorter.forms = {"x"};
  shorter.pos = {"NN"};
  shorter.rels = {"root"};
  CHECK_THROWS_MATCHES(uas({d}, {shorter}), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.kind() == ErrorKind::LengthMismatch;
                       }));
  CHECK_THROWS_AS(uas({d}, {}), Error);
}

TEST_CASE("treebank_diff on identical corpora") {
  std::vector<ConstTree> corpus = {fixtures::tree_a()};
  TreebankDiff diff = treebank_diff(corpus, corpus);
  CHECK(diff.brackets.f1 == 100.0);
  CHECK(diff.complete_match_rate == 100.0);
  CHECK(diff.divergent_examples.empty());
}

TEST_CASE("treebank_diff separates spine choices via @-brackets") {
  ConstTree t = parse_bracketed("(X (A a) (B b) (C c) (D d))")[0];
  HeadAssignment h1(t.size()), h2(t.size());
  h1.set(t.root(), 2);
  h2.set(t.root(), 3);
  ConstTree b1 = binarize(t, h1);
  ConstTree b2 = binarize(t, h2);
  TreebankDiff diff = treebank_diff({b1}, {b2});
  CHECK(diff.complete_match_rate == 0.0);
  CHECK(diff.brackets.f1 > 0.0);
  CHECK(diff.brackets.f1 < 100.0);
  REQUIRE(diff.divergent_examples.size() == 1);
  // non-@ brackets all match once the spines are stripped
  BracketScore stripped = bracket_prf({debinarize(b1)}, {debinarize(b2)});
  CHECK(stripped.f1 == 100.0);
}
