#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "headlayer/conversion.hpp"
#include "headlayer/head_induction.hpp"
#include "support/fixtures.hpp"
#include "support/random_trees.hpp"

using namespace headlayer;

namespace {

int node_by_label(const ConstTree& t, const std::string& label) {
  for (int id : t.nonterminals_preorder())
    if (t.node(id).label == label) return id;
  FAIL("no node labeled " + label);
  return -1;
}

}  // namespace

TEST_CASE("span_head_candidates on fixture A") {
  AlignedSentence sent = fixtures::sentence_a();
  CHECK(span_head_candidates(sent, node_by_label(sent.tree, "NP")) == std::vector<int>{2});
  CHECK(span_head_candidates(sent, node_by_label(sent.tree, "S")) == std::vector<int>{3});
  // preterminal: singleton yield, governor always outside
  for (int pt : sent.tree.preterminals())
    CHECK(span_head_candidates(sent, pt).size() == 1);
}

TEST_CASE("span_head_candidates matches brute force on random sentences") {
  testsupport::RandomTreeGen gen(11);
  for (int trial = 0; trial < 100; ++trial) {
    ConstTree t = gen.tree();
    HeadAssignment h = gen.random_heads(t);
    DepGraph d = convert(t, h);
    AlignedSentence sent{t, d};
    for (int id : t.nonterminals_preorder())
      CHECK(span_head_candidates(sent, id) == testsupport::brute_span_candidates(t, id, d));
  }
}

TEST_CASE("induce_heads on fixture A") {
  InductionResult r = induce_heads(fixtures::sentence_a());
  REQUIRE(r.ok());
  const ConstTree& t = fixtures::tree_a();
  ConstTree tree = fixtures::tree_a();
  CHECK(r.assignment->at(node_by_label(tree, "S")) == 2);
  CHECK(r.assignment->at(node_by_label(tree, "NP")) == 2);
  CHECK(r.assignment->at(node_by_label(tree, "VP")) == 1);
  (void)t;
}

TEST_CASE("induce_heads gives index 1 for unary nodes") {
  ConstTree t = parse_bracketed("(S (NP (NN x)))")[0];
  DepGraph d;
  d.n = 1;
  d.heads = {0};
  d.forms = {"x"};
  d.pos = {"NN"};
  d.rels = {"root"};
  InductionResult r = induce_heads({t, d});
  REQUIRE(r.ok());
  for (int id : t.nonterminals_preorder()) CHECK(r.assignment->at(id) == 1);
}

TEST_CASE("induce_heads reports the first failing node in preorder") {
  // (Y (X (A a) (B b)) (C c)) with a->c, b->c, c->0: H(X) = {1,2}
  ConstTree t = parse_bracketed("(Y (X (A a) (B b)) (C c))")[0];
  DepGraph d;
  d.n = 3;
  d.heads = {3, 3, 0};
  d.forms = {"a", "b", "c"};
  d.pos = {"A", "B", "C"};
  d.rels = {"_", "_", "root"};
  InductionResult r = induce_heads({t, d});
  REQUIRE_FALSE(r.ok());
  CHECK(t.node(r.failure->node_id).label == "X");
  CHECK(r.failure->preorder_index == 1);
  CHECK(r.failure->candidate_count == 2);
  CHECK(induction_failures({t, d}).size() == 1);
}

TEST_CASE("chain consistency: the span head propagates down the head spine") {
  testsupport::RandomTreeGen gen(23);
  for (int trial = 0; trial < 100; ++trial) {
    ConstTree t = gen.tree();
    HeadAssignment hstar = gen.random_heads(t);
    DepGraph d = convert(t, hstar);
    InductionResult r = induce_heads({t, d});
    REQUIRE(r.ok());
    std::vector<std::pair<int, int>> spans = t.yield_spans();
    for (int id : t.nonterminals_preorder()) {
      int child = r.assignment->head_child(t, id);
      std::vector<int> hv = testsupport::brute_span_candidates(t, id, d);
      REQUIRE(hv.size() == 1);
      // the chosen child dominates the span head
      CHECK(hv[0] >= spans[child].first);
      CHECK(hv[0] <= spans[child].second);
      if (t.is_preterminal(child)) continue;
      std::vector<int> hc = testsupport::brute_span_candidates(t, child, d);
      REQUIRE(hc.size() == 1);
      CHECK(hv[0] == hc[0]);
    }
  }
}

TEST_CASE("root property: the root span head is the token attached to 0") {
  testsupport::RandomTreeGen gen(31);
  for (int trial = 0; trial < 50; ++trial) {
    ConstTree t = gen.tree();
    DepGraph d = convert(t, gen.random_heads(t));
    std::vector<int> hv = testsupport::brute_span_candidates(t, t.root(), d);
    REQUIRE(hv.size() == 1);
    CHECK(d.head_of(hv[0]) == 0);
  }
}

TEST_CASE("oracle recovery: induction inverts conversion for any head function") {
  testsupport::RandomTreeGen gen(47);
  for (int trial = 0; trial < 200; ++trial) {
    ConstTree t = gen.tree();
    HeadAssignment hstar = gen.random_heads(t);
    DepGraph d = convert(t, hstar);
    InductionResult r = induce_heads({t, d});
    REQUIRE(r.ok());
    CHECK(*r.assignment == hstar);
  }
}

TEST_CASE("non-recovery witness: uniqueness does not imply dependency roundtrip") {
  // a->c, b->a, c->0: induction succeeds everywhere, but conversion with the
  // induced heads attaches b->c.
  ConstTree t = parse_bracketed("(X (A a) (B b) (C c))")[0];
  DepGraph d;
  d.n = 3;
  d.heads = {3, 1, 0};
  d.forms = {"a", "b", "c"};
  d.pos = {"A", "B", "C"};
  d.rels = {"_", "_", "root"};
  InductionResult r = induce_heads({t, d});
  REQUIRE(r.ok());
  DepGraph back = convert(t, *r.assignment);
  CHECK(back.heads == std::vector<int>{3, 3, 0});
  CHECK(back.heads != d.heads);
}

TEST_CASE("induce_corpus pairs successes and itemizes failures") {
  ConstTree bad_tree = parse_bracketed("(Y (X (A a) (B b)) (C c))")[0];
  DepGraph bad_dep;
  bad_dep.n = 3;
  bad_dep.heads = {3, 3, 0};
  bad_dep.forms = {"a", "b", "c"};
  bad_dep.pos = {"A", "B", "C"};
  bad_dep.rels = {"_", "_", "root"};

  CorpusInductionReport report;
  std::vector<AlignedSentence> corpus = {fixtures::sentence_a(), {bad_tree, bad_dep}};
  auto pairs = induce_corpus(corpus, report);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].first == 0);
  REQUIRE(report.failures.size() == 1);
  CHECK(report.failures[0].sentence_index == 1);
  CHECK(report.failures[0].failure.candidate_count == 2);

  CorpusInductionReport empty_report;
  CHECK(induce_corpus({}, empty_report).empty());
  CHECK(empty_report.failures.empty());
}

TEST_CASE("sidecar format round-trips and validates") {
  ConstTree t = fixtures::tree_a();
  InductionResult r = induce_heads(fixtures::sentence_a());
  REQUIRE(r.ok());
  std::string line = format_sidecar_line(t, *r.assignment);
  CHECK(line == "0:2 1:2 2:1");
  HeadAssignment back = parse_sidecar_line(t, line);
  CHECK(back == *r.assignment);

  CHECK_THROWS_MATCHES(parse_sidecar_line(t, "0:2 1:2"), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.kind() == ErrorKind::BadSidecar;
                       }));
  CHECK_THROWS_MATCHES(parse_sidecar_line(t, "0:2 1:2 2:5"), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.kind() == ErrorKind::BadSidecar;
                       }));
  CHECK_THROWS_MATCHES(parse_sidecar_line(t, "0:2 1:2 9:1"), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.kind() == ErrorKind::BadSidecar;
                       }));
  CHECK_THROWS_MATCHES(parse_sidecar_line(t, "0:2 0:1 2:1"), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.kind() == ErrorKind::BadSidecar;
                       }));
}
