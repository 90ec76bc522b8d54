#include "generators.hpp"

#include <cmath>
#include <numeric>
#include <random>

namespace liftcount {

namespace {

// Byte-stable draws on top of the fixed mt19937_64 stream.
struct DetRng {
  std::mt19937_64 g;
  explicit DetRng(uint64_t seed) : g(seed) {}

  uint64_t below(uint64_t k) { return g() % k; }
  bool coin() { return (g() & 1) != 0; }
  double open01() {
    double u = double(g() >> 11) * 0x1.0p-53;  // [0,1)
    return u > 0 ? u : 0.5;
  }
  // First k entries of a uniformly drawn permutation prefix.
  template <typename T>
  void choose_prefix(std::vector<T> &pool, size_t k) {
    for (size_t i = 0; i < k; ++i)
      std::swap(pool[i], pool[i + size_t(below(pool.size() - i))]);
    pool.resize(k);
  }
};

Formula or_fold(std::vector<Formula> lits) {
  Formula f = std::move(lits[0]);
  for (size_t i = 1; i < lits.size(); ++i)
    f = Formula::binary(Formula::Or, std::move(f), std::move(lits[i]));
  return f;
}

}  // namespace

PKB random_pkb(uint32_t n, uint32_t m, uint32_t s, uint32_t e, uint32_t c, uint64_t seed) {
  if (n == 0 || c == 0) throw ModelError("need at least one predicate and one constant");
  if (s == 0 || s > n) throw ModelError("clause size must satisfy 1 <= s <= n");
  if (uint64_t(e) > uint64_t(n) * c) throw ModelError("more evidence atoms than ground atoms");

  DetRng rng(seed);
  PKB pkb;
  SortId obj = pkb.voc.add_sort_sized("obj", c);
  for (uint32_t p = 0; p < n; ++p)
    pkb.voc.add_pred("P" + std::to_string(p + 1), {obj});

  for (uint32_t i = 0; i < m; ++i) {
    std::vector<uint32_t> preds(n);
    std::iota(preds.begin(), preds.end(), 0u);
    rng.choose_prefix(preds, s);
    std::vector<Formula> lits;
    for (uint32_t p : preds) {
      Formula a = Formula::atom(PredId(p), {Term::var(0)});
      lits.push_back(rng.coin() ? Formula::unary(Formula::Not, std::move(a))
                                : std::move(a));
    }
    WeightedFormula wf;
    wf.formula = or_fold(std::move(lits));
    wf.vars = {{"x", obj}};
    wf.form = WeightForm::Potential;
    wf.stated = rng.open01();
    pkb.formulas.push_back(std::move(wf));
  }

  std::vector<uint64_t> atoms(uint64_t(n) * c);
  std::iota(atoms.begin(), atoms.end(), uint64_t(0));
  rng.choose_prefix(atoms, e);
  for (uint64_t a : atoms)
    pkb.evidence.push_back(
        GroundLiteral{PredId(a / c), !rng.coin(), {ConstId(a % c)}});
  return pkb;
}

PKB link_prediction_pkb(uint32_t n_profs, uint32_t n_students, double evidence_fraction,
                        uint64_t seed) {
  if (n_profs == 0 || n_students == 0) throw ModelError("need at least one of each object");
  if (!(evidence_fraction >= 0.0 && evidence_fraction <= 1.0))
    throw ModelError("evidence fraction must lie in [0,1]");

  DetRng rng(seed);
  PKB pkb;
  SortId prof = pkb.voc.add_sort_sized("prof", n_profs);
  SortId student = pkb.voc.add_sort_sized("student", n_students);
  PredId good_prof = pkb.voc.add_pred("GoodProf", {prof});
  PredId good_student = pkb.voc.add_pred("GoodStudent", {student});
  PredId advises = pkb.voc.add_pred("Advises", {prof, student});
  PredId future_prof = pkb.voc.add_pred("FutureProf", {student});
  PredId coauthor = pkb.voc.add_pred("Coauthor", {prof, student});

  Term x = Term::var(0), y = Term::var(1);
  std::vector<FormulaVar> xy = {{"x", prof}, {"y", student}};

  WeightedFormula f1;
  f1.formula = Formula::binary(
      Formula::Implies,
      Formula::binary(Formula::And,
                      Formula::binary(Formula::And, Formula::atom(good_prof, {x}),
                                      Formula::atom(good_student, {y})),
                      Formula::atom(advises, {x, y})),
      Formula::atom(future_prof, {y}));
  f1.vars = xy;
  f1.form = WeightForm::Potential;
  f1.stated = rng.open01();
  pkb.formulas.push_back(std::move(f1));

  WeightedFormula f2;
  f2.formula = Formula::binary(Formula::Implies, Formula::atom(coauthor, {x, y}),
                               Formula::atom(advises, {x, y}));
  f2.vars = xy;
  f2.form = WeightForm::Potential;
  f2.stated = rng.open01();
  pkb.formulas.push_back(std::move(f2));

  // Evidence pool: every ground atom of every declared predicate.
  std::vector<GroundLiteral> pool;
  for (uint32_t p = 0; p < n_profs; ++p) pool.push_back({good_prof, false, {ConstId(p)}});
  for (uint32_t s = 0; s < n_students; ++s)
    pool.push_back({good_student, false, {ConstId(s)}});
  for (uint32_t p = 0; p < n_profs; ++p)
    for (uint32_t s = 0; s < n_students; ++s)
      pool.push_back({advises, false, {ConstId(p), ConstId(s)}});
  for (uint32_t s = 0; s < n_students; ++s)
    pool.push_back({future_prof, false, {ConstId(s)}});
  for (uint32_t p = 0; p < n_profs; ++p)
    for (uint32_t s = 0; s < n_students; ++s)
      pool.push_back({coauthor, false, {ConstId(p), ConstId(s)}});

  size_t take = size_t(std::llround(evidence_fraction * double(pool.size())));
  rng.choose_prefix(pool, take);
  for (GroundLiteral &l : pool) {
    l.neg = !rng.coin();
    pkb.evidence.push_back(std::move(l));
  }
  return pkb;
}

}  // namespace liftcount
