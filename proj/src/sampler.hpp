#pragma once

#include <random>

#include "lifted.hpp"

namespace liftcount {

using Rng = std::mt19937_64;

// Probability of taking the true branch at a split. Branch masses are
// weight x (number of clauses the branch satisfies), so the walk gravitates
// toward satisfying regions. Rules, in order: a dead branch (conditioning
// already produced an empty clause — its true value is zero) gets
// probability 0; if both are dead the value is 0 and the returned 1/2 is
// never used; with no satisfied clauses on either side the choice is
// uniform over live branches; otherwise a zero count is floored to 1/2 a
// clause so any live branch keeps support.
double proposal_q_true(uint64_t n_true, uint64_t n_false, LogNum w_true, LogNum w_false,
                       bool dead_true, bool dead_false);

// Streaming mean/stderr over nonnegative draws, held in log space so counts
// of astronomical magnitude cannot overflow. Mergeable across runs.
struct Estimate {
  uint64_t n = 0;
  LogNum sum = LogNum::zero();     // sum of draws
  LogNum sum_sq = LogNum::zero();  // sum of squared draws

  void add(LogNum x) {
    ++n;
    sum += x;
    sum_sq += x * x;
  }
  void merge(const Estimate &o) {
    n += o.n;
    sum += o.sum;
    sum_sq += o.sum_sq;
  }
  LogNum mean() const;
  // sqrt(sample variance / n); zero when n < 2 or all draws coincide.
  LogNum stderr_of_mean() const;
};

// One importance-sampling draw of the weighted count over the propositional
// clause set. The proposal mirrors the exact engine: unit propagation and
// component products stay deterministic; at each split one branch is drawn
// with probability proportional to (branch weight) x (clauses it satisfies,
// floored at 1/2), and the outcome is reweighted by the inverse probability.
// A branch whose conditioning yields an empty clause has true value zero and
// leaves the proposal's support. E[draw] equals the exact count.
LogNum sample_ground_once(const GroundKB &kb, const CountOptions &opt, Rng &rng,
                          CountStats &stats);

// Lifted analogue, sharing the exact engine's structural steps. Binomial
// splits draw the number of true atoms from the weight-proportional binomial,
// which makes the importance weight a constant (w_true + w_false)^n.
// A decomposer block of multiplicity m multiplies m independent draws;
// collapsing them to one draw raised to m would inflate the expectation
// unless the block's value came out deterministically, in which case the
// power is taken directly.
LogNum sample_lifted_once(LiftedCounter &counter, const Node &root, Rng &rng);

Estimate estimate_ground(const GroundKB &kb, const CountOptions &opt, uint64_t draws,
                         CountStats &stats);
Estimate estimate_lifted(const WCNF &kb, const LiftedOptions &opt, uint64_t draws,
                         LiftedStats &stats);

}  // namespace liftcount
