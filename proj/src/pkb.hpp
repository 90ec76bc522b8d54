#pragma once

#include "logic.hpp"
#include "util.hpp"

namespace liftcount {

// How a formula's weight was written, preserved for round-tripping.
// Potential: the factor a violating grounding contributes, directly.
// LogWeight: stated w, factor exp(-w). Hard: factor 0.
enum class WeightForm : uint8_t { Potential, Hard, LogWeight };

struct WeightedFormula {
  Formula formula;
  std::vector<FormulaVar> vars;
  WeightForm form = WeightForm::Potential;
  double stated = 0;

  double potential() const;
  bool is_hard() const { return form == WeightForm::Hard || potential() == 0; }
};

struct GroundLiteral {
  PredId pred = 0;
  bool neg = false;
  std::vector<ConstId> consts;
};

// A probabilistic knowledge base: each world x is weighted by the product of
// potential^{#violated groundings} over all formulas, hard formulas must hold.
struct PKB {
  Vocabulary voc;
  std::vector<WeightedFormula> formulas;
  std::vector<GroundLiteral> evidence;
};

// Weighted clausal form: all clauses hard; the soft part is carried by
// per-predicate literal weights (true weight, false weight). Soft formulas
// are replaced by an equivalence with a fresh auxiliary predicate over the
// formula's free variables whose false weight is the potential; every other
// weight is 1, which keeps the weighted count equal to the partition sum.
struct WCNF {
  Vocabulary voc;  // user predicates plus the auxiliaries
  std::vector<Clause> clauses;
  std::vector<std::pair<LogNum, LogNum>> weights;  // indexed by PredId

  LogNum w_true(PredId p) const { return weights[p].first; }
  LogNum w_false(PredId p) const { return weights[p].second; }
};

WCNF compile_wcnf(const PKB &pkb);

// Appends one ground unit clause (evidence or a conditioned query literal).
void add_unit(WCNF &kb, const GroundLiteral &l);

// Appends the clausal form of a formula as hard constraints.
void add_hard_formula(WCNF &kb, const Formula &f, const std::vector<FormulaVar> &vars);

// Indices of the clauses that can influence the seed clauses' truth values:
// reachability under atom unification, tracking one binding pattern per
// predicate and widening to the unrestricted pattern when bindings multiply.
// Seeds are included. Clauses outside the result (and predicates they alone
// mention) contribute identical factors to a conditioned and an
// unconditioned run, so dropping them preserves probability ratios.
std::vector<size_t> reachable_clauses(const std::vector<Clause> &clauses,
                                      const std::vector<Clause> &seeds,
                                      const Vocabulary &voc);

}  // namespace liftcount
