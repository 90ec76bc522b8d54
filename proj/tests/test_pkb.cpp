#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "common.hpp"
#include "oracle.hpp"

using namespace liftcount;
using testgen::close_lg;

namespace {

EngineResult z_of(const PKB &pkb, bool lifting = true) {
  EngineOptions opt;
  opt.lifting = lifting;
  return compute_z(pkb, opt);
}

EngineResult query_of(const PKB &pkb, const std::string &q, bool lifting = true,
                      bool prune = false) {
  EngineOptions opt;
  opt.lifting = lifting;
  opt.prune = prune;
  return compute_query(pkb, parse_query(q, pkb.voc), opt);
}

}  // namespace

TEST_CASE("a bare predicate declaration doubles the total per atom") {
  PKB pkb = parse_model("domain d = {A}\npredicate R(d)\n");
  CHECK(*z_of(pkb).z_den == LogNum::from_linear(2));
  PKB three = parse_model("domain d = 3\npredicate R(d)\n");
  CHECK(close_lg(*z_of(three).z_den, LogNum::from_linear(8)));
}

TEST_CASE("one soft unit formula over one constant") {
  PKB pkb = parse_model("domain d = {A}\npredicate R(d)\n0.5 R(x)\n");
  CHECK(close_lg(*z_of(pkb).z_den, LogNum::from_linear(1.5)));
  CHECK(close_lg(*z_of(pkb, false).z_den, LogNum::from_linear(1.5)));
}

TEST_CASE("one soft unit formula over three constants") {
  PKB pkb = parse_model("domain d = 3\npredicate R(d)\n0.5 R(x)\n");
  CHECK(close_lg(*z_of(pkb).z_den, LogNum::from_linear(3.375)));
}

TEST_CASE("conditioning on a soft formula's atom") {
  PKB pkb = parse_model("domain d = {A}\npredicate R(d)\n0.5 R(x)\n");
  EngineResult r = query_of(pkb, "R(A)");
  CHECK(*r.answer == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("log-stated weights reward violation when negative") {
  PKB pkb = parse_model("domain d = {A}\npredicate R(d)\nw -0.2 R(x)\n");
  CHECK(close_lg(*z_of(pkb).z_den, LogNum::from_linear(1 + std::exp(0.2))));
}

TEST_CASE("unit-potential formulas are inert") {
  PKB pkb = parse_model("domain d = 2\npredicate R(d)\n1 R(x)\n");
  WCNF kb = compile_wcnf(pkb);
  CHECK(kb.clauses.empty());
  CHECK(kb.voc.num_preds() == 1);
  CHECK(close_lg(*z_of(pkb).z_den, LogNum::from_linear(4)));
}

TEST_CASE("hard formulas restrict worlds directly") {
  PKB pkb = parse_model(
      "domain d = {A}\npredicate R(d)\npredicate S(d)\n"
      "hard R(A)\nhard R(A) => S(A)\n");
  CHECK(close_lg(*z_of(pkb).z_den, LogNum::one()));
  EngineResult r = query_of(pkb, "S(A)");
  CHECK(*r.answer == doctest::Approx(1.0));
}

TEST_CASE("an unsatisfiable hard part yields zero and query errors") {
  PKB pkb = parse_model("domain d = {A}\npredicate R(d)\nhard R(A)\nhard !R(A)\n");
  CHECK(z_of(pkb).z_den->is_zero());
  CHECK_THROWS_AS(query_of(pkb, "R(A)"), InconsistentKb);
}

TEST_CASE("evidence conditions the total") {
  PKB pkb = parse_model("domain d = {A}\npredicate R(d)\n0.5 R(x)\n");
  pkb.evidence = parse_evidence("R(A)\n", pkb.voc);
  CHECK(close_lg(*z_of(pkb).z_den, LogNum::one()));
  pkb.evidence = parse_evidence("!R(A)\n", pkb.voc);
  CHECK(close_lg(*z_of(pkb).z_den, LogNum::from_linear(0.5)));
}

TEST_CASE("soft compilation introduces one auxiliary per non-inert formula") {
  PKB pkb = parse_model(
      "domain d = 3\npredicate R(d)\npredicate S(d)\n"
      "0.3 R(x) => S(x)\nhard R(D1) v S(D1)\n");
  // hard formulas add clauses but no predicate; the soft one adds both
  WCNF kb = compile_wcnf(pkb);
  REQUIRE(kb.voc.num_preds() == 3);
  CHECK(kb.voc.pred(2).internal);
  CHECK(kb.voc.pred(2).arg_sorts == std::vector<SortId>{0});
  CHECK(kb.weights[2].first == LogNum::one());
  CHECK(kb.weights[2].second == LogNum::from_linear(0.3));
  CHECK(kb.weights[0].first == LogNum::one());
}

TEST_CASE("auxiliary predicates range over the formula's free variables only") {
  PKB pkb = parse_model(
      "domain d = 3\npredicate R(d)\npredicate T(d, d)\n"
      "0.25 T(x, y) => R(x)\n0.75 R(D2)\n");
  WCNF kb = compile_wcnf(pkb);
  REQUIRE(kb.voc.num_preds() == 4);
  CHECK(kb.voc.pred(2).arg_sorts.size() == 2);  // x and y are free
  CHECK(kb.voc.pred(3).arg_sorts.empty());      // ground formula: nullary aux
}

TEST_CASE("engine totals match world enumeration on the corpus") {
  for (uint64_t i = 0; i < 120; ++i) {
    PKB pkb = testgen::corpus_pkb(i);
    LogNum expect = testoracle::oracle_z(pkb);
    CAPTURE(i);
    CAPTURE(print_model(pkb));
    CHECK(close_lg(*z_of(pkb).z_den, expect));
    CHECK(close_lg(*z_of(pkb, false).z_den, expect));
  }
}

TEST_CASE("query probabilities match world enumeration") {
  for (uint64_t i = 0; i < 60; ++i) {
    PKB pkb = testgen::corpus_pkb(i);
    testgen::TRng g(mix64(i + 7777));
    Query q = testgen::ground_atom_query(pkb, g);
    auto expect = testoracle::oracle_query(pkb, q);
    CAPTURE(i);
    EngineOptions opt;
    if (expect.z_den.is_zero()) {
      CHECK_THROWS_AS(compute_query(pkb, q, opt), InconsistentKb);
      continue;
    }
    EngineResult r = compute_query(pkb, q, opt);
    double want = expect.z_num.is_zero() ? 0.0 : std::exp(expect.z_num.lg - expect.z_den.lg);
    CHECK(*r.answer == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("reachability keeps the query's unification cone") {
  PKB pkb = parse_model(
      "domain d = 2\n"
      "predicate R(d)\npredicate S(d)\npredicate T(d)\npredicate U(d)\n"
      "hard !R(x) v S(x)\nhard !S(x) v T(x)\nhard U(x) v U(x)\n");
  WCNF kb = compile_wcnf(pkb);
  Query q = parse_query("R(D1)", pkb.voc);
  size_t base = kb.clauses.size();
  add_hard_formula(kb, q.formula, q.vars);
  std::vector<Clause> body(kb.clauses.begin(), kb.clauses.begin() + ptrdiff_t(base));
  std::vector<Clause> seeds(kb.clauses.begin() + ptrdiff_t(base), kb.clauses.end());
  auto kept = reachable_clauses(body, seeds, kb.voc);
  CHECK(kept == (std::vector<size_t>{0, 1}));
}

TEST_CASE("pruning preserves query answers") {
  for (uint64_t i = 0; i < 40; ++i) {
    PKB pkb = testgen::corpus_pkb(i + 300);
    testgen::TRng g(mix64(i));
    Query q = testgen::ground_atom_query(pkb, g);
    CAPTURE(i);
    EngineOptions plain;
    EngineOptions pruned;
    pruned.prune = true;
    double a, b;
    try {
      a = *compute_query(pkb, q, plain).answer;
    } catch (const InconsistentKb &) {
      continue;  // undefined conditional; pruning may legitimately disagree
    }
    b = *compute_query(pkb, q, pruned).answer;
    CHECK(a == doctest::Approx(b).epsilon(1e-9));
  }
}
