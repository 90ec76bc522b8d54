#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "common.hpp"
#include "oracle.hpp"
#include "sampler.hpp"

using namespace liftcount;
using testgen::close_lg;

namespace {

// |mean - target| <= k * stderr, evaluated in linear space (values here are
// small enough), with an absolute floor so an exactly-converged estimate
// never trips on rounding.
void check_within(const Estimate &est, LogNum target, double k) {
  LogNum mean = est.mean();
  LogNum se = est.stderr_of_mean();
  if (se.is_zero()) {
    CHECK(close_lg(mean, target, 1e-9));
    return;
  }
  double diff = std::fabs(mean.linear() - target.linear());
  CHECK(diff <= k * se.linear() + 1e-12);
}

GroundKB tiny_ground_kb(testgen::TRng &g) {
  GroundKB kb;
  uint32_t atoms = 1 + testgen::below(g, 6);
  for (uint32_t a = 0; a < atoms; ++a) {
    double wt = testgen::coin(g, 0.1) ? 0.0 : 0.25 + testgen::unit_open(g);
    double wf = testgen::coin(g, 0.1) ? 0.0 : 0.25 + testgen::unit_open(g);
    kb.weights.push_back({LogNum::from_linear(wt), LogNum::from_linear(wf)});
  }
  uint32_t clauses = testgen::below(g, 6);
  for (uint32_t c = 0; c < clauses; ++c) {
    std::vector<int32_t> clause;
    uint32_t len = 1 + testgen::below(g, 3);
    for (uint32_t i = 0; i < len; ++i) {
      int32_t lit = int32_t(1 + testgen::below(g, atoms));
      if (testgen::coin(g, 0.5)) lit = -lit;
      clause.push_back(lit);
    }
    kb.clauses.push_back(clause);
  }
  return kb;
}

}  // namespace

TEST_CASE("branch proposal obeys its fixed rules") {
  LogNum one = LogNum::one();
  LogNum zero = LogNum::zero();
  CHECK(proposal_q_true(2, 1, one, one, false, false) == doctest::Approx(2.0 / 3));
  CHECK(proposal_q_true(0, 0, one, one, false, false) == doctest::Approx(0.5));
  CHECK(proposal_q_true(0, 1, one, one, false, false) == doctest::Approx(1.0 / 3));
  CHECK(proposal_q_true(1, 1, one, zero, false, false) == 1.0);
  CHECK(proposal_q_true(1, 1, zero, one, false, false) == 0.0);
  CHECK(proposal_q_true(3, 3, one, one, true, false) == 0.0);
  CHECK(proposal_q_true(3, 3, one, one, false, true) == 1.0);
  CHECK(proposal_q_true(3, 3, one, one, true, true) == 0.5);
  CHECK(proposal_q_true(3, 3, zero, zero, false, false) == 0.5);
}

TEST_CASE("running estimate: mean, spread, merge") {
  Estimate est;
  est.add(LogNum::from_linear(1));
  est.add(LogNum::from_linear(2));
  est.add(LogNum::from_linear(3));
  CHECK(est.mean().linear() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(est.stderr_of_mean().linear() ==
        doctest::Approx(std::sqrt(1.0 / 3)).epsilon(1e-9));

  Estimate single;
  single.add(LogNum::from_linear(7));
  CHECK(single.stderr_of_mean().is_zero());
  CHECK(single.mean().linear() == doctest::Approx(7.0));

  Estimate flat;
  flat.add(LogNum::from_linear(2));
  flat.add(LogNum::from_linear(2));
  CHECK(flat.stderr_of_mean().is_zero());

  Estimate a, b, whole;
  for (int i = 1; i <= 6; ++i) {
    (i <= 3 ? a : b).add(LogNum::from_linear(double(i)));
    whole.add(LogNum::from_linear(double(i)));
  }
  a.merge(b);
  CHECK(a.n == whole.n);
  // Merging partial sums reassociates the log-space additions, so the result
  // matches the sequential total only up to rounding.
  CHECK(close_lg(a.mean(), whole.mean(), 1e-12));
  CHECK(close_lg(a.stderr_of_mean(), whole.stderr_of_mean(), 1e-12));

  CHECK(Estimate{}.mean().is_zero());
}

TEST_CASE("ground draws average to the exact count") {
  GroundKB kb;
  kb.clauses = {{1, 2}};
  kb.weights.assign(2, {LogNum::one(), LogNum::one()});
  CountOptions opt;
  CountStats stats;
  Estimate est = estimate_ground(kb, opt, 20000, stats);
  check_within(est, LogNum::from_linear(3), 4.0);
  CHECK(est.n == 20000);
}

TEST_CASE("contradictions give exactly-zero draws") {
  GroundKB kb;
  kb.clauses = {{1}, {-1}};
  kb.weights.assign(1, {LogNum::one(), LogNum::one()});
  CountOptions opt;
  CountStats stats;
  Estimate est = estimate_ground(kb, opt, 100, stats);
  CHECK(est.mean().is_zero());
  CHECK(est.sum.is_zero());
}

TEST_CASE("ground sampling is unbiased over random inputs") {
  for (uint64_t i = 0; i < 10; ++i) {
    testgen::TRng g(mix64(7700 + i));
    GroundKB kb = tiny_ground_kb(g);
    CountOptions opt;
    CountStats stats;
    LogNum exact = ground_wmc(kb, opt, stats);
    Estimate est = estimate_ground(kb, opt, 4000, stats);
    CAPTURE(i);
    if (exact.is_zero()) {
      CHECK(est.mean().is_zero());
    } else {
      check_within(est, exact, 5.0);
    }
  }
}

TEST_CASE("lifted draws average to the exact count") {
  PKB pkb = parse_model("domain d = 3\npredicate R(d)\n0.5 R(x)\n");
  WCNF kb = compile_wcnf(pkb);
  LiftedOptions opt;
  LiftedStats stats;
  Estimate est = estimate_lifted(kb, opt, 2000, stats);
  check_within(est, LogNum::from_linear(3.375), 4.0);
}

TEST_CASE("forced moves make draws deterministic and exact") {
  // every false weight is zero, so binomials and branch picks are all forced;
  // the untouched third predicate retires symbolically
  PKB pkb;
  pkb.voc.add_sort_sized("d", 4);
  pkb.voc.add_pred("R", {0});
  pkb.voc.add_pred("S", {0});
  pkb.voc.add_pred("T", {0});
  WCNF kb = compile_wcnf(pkb);
  kb.weights[0] = {LogNum::from_linear(0.7), LogNum::zero()};
  kb.weights[1] = {LogNum::from_linear(0.3), LogNum::zero()};
  std::vector<Clause> cs;
  REQUIRE(push_clause(cs, testgen::ClauseBuilder(kb.voc).lit("R(x)").lit("S(x)").build(),
                      kb.voc));
  kb.clauses = cs;

  LiftedOptions opt;
  LiftedStats stats;
  LogNum expect = LogNum::from_linear(16 * std::pow(0.21, 4));
  CHECK(close_lg(lifted_wmc(kb, opt, stats), expect, 1e-12));

  LiftedOptions sopt = opt;
  sopt.cache = false;
  LiftedStats sstats;
  LiftedCounter counter(kb, sopt, sstats);
  auto [root, factor] = counter.root();
  for (uint64_t i = 0; i < 20; ++i) {
    Rng rng(hash_combine(0, i));
    LogNum draw = factor * sample_lifted_once(counter, root, rng);
    CAPTURE(i);
    CHECK(close_lg(draw, expect, 1e-12));
  }
}

TEST_CASE("each draw has its own stream keyed by index") {
  PKB pkb = parse_model("domain d = 3\npredicate R(d)\n0.5 R(x)\n");
  WCNF kb = compile_wcnf(pkb);
  LiftedOptions opt;
  opt.seed = 7;
  LiftedStats stats;
  Estimate est = estimate_lifted(kb, opt, 2, stats);

  LiftedOptions sopt = opt;
  sopt.cache = false;
  sopt.paranoid = false;
  LiftedStats rstats;
  LiftedCounter counter(kb, sopt, rstats);
  auto [root, factor] = counter.root();
  LogNum total = LogNum::zero();
  for (uint64_t i = 0; i < 2; ++i) {
    Rng rng(hash_combine(opt.seed, i));
    total += factor * sample_lifted_once(counter, root, rng);
  }
  CHECK(est.sum.lg == total.lg);

  // ground path uses the same indexing scheme
  GroundKB g;
  g.clauses = {{1, 2}, {-1, 2}};
  g.weights.assign(2, {LogNum::from_linear(0.5), LogNum::from_linear(1.5)});
  CountOptions gopt;
  gopt.seed = 11;
  CountStats gstats;
  Estimate gest = estimate_ground(g, gopt, 2, gstats);
  LogNum gtotal = LogNum::zero();
  for (uint64_t i = 0; i < 2; ++i) {
    Rng rng(hash_combine(gopt.seed, i));
    CountStats tmp;
    gtotal += sample_ground_once(g, gopt, rng, tmp);
  }
  CHECK(gest.sum.lg == gtotal.lg);
}

TEST_CASE("sampled probability of an entailed query is exactly one") {
  PKB pkb = parse_model("domain d = 4\npredicate R(d)\nhard R(x)\n");
  Query q = parse_query("R(D1)", pkb.voc);
  EngineOptions opt;
  opt.samples = 64;
  EngineResult res = compute_query(pkb, q, opt);
  CHECK(*res.answer == 1.0);
  CHECK(res.samples == 64);
}

TEST_CASE("all-zero denominator draws abort the estimate") {
  PKB pkb = parse_model("domain d = 2\npredicate R(d)\nhard R(D1)\nhard !R(D1)\n");
  Query q = parse_query("R(D2)", pkb.voc);
  EngineOptions opt;
  opt.samples = 16;
  CHECK_THROWS_AS(compute_query(pkb, q, opt), InconclusiveEstimate);
}

TEST_CASE("lifted sampling is unbiased over the corpus") {
  int checked = 0;
  for (uint64_t i = 0; i < 12; ++i) {
    PKB pkb = testgen::corpus_pkb(i + 1300);
    WCNF kb = compile_wcnf(pkb);
    LiftedOptions opt;
    LiftedStats stats;
    LogNum exact = lifted_wmc(kb, opt, stats);
    LiftedStats estats;
    Estimate est = estimate_lifted(kb, opt, 3000, estats);
    CAPTURE(i);
    CAPTURE(print_model(pkb));
    if (exact.is_zero()) {
      CHECK(est.mean().is_zero());
    } else {
      check_within(est, exact, 5.0);
      ++checked;
    }
  }
  CHECK(checked >= 6);  // the corpus slice must mostly be satisfiable
}
