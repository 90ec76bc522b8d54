#pragma once

// Shared helpers for the test binaries: deterministic instance generators
// sized for the brute-force oracles, plus a terse clause builder.

#include <algorithm>
#include <cctype>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "engine.hpp"
#include "generators.hpp"
#include "textio.hpp"

namespace liftcount {
namespace testgen {

using TRng = std::mt19937_64;

// Log-space closeness: |log a - log b| <= tol, i.e. relative closeness of the
// linear values, with zero only equal to zero. The 1.0 floor keeps the bound
// meaningful when the logs sit near zero.
inline bool close_lg(LogNum a, LogNum b, double tol = 1e-9) {
  if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
  return std::fabs(a.lg - b.lg) <=
         tol * std::max({1.0, std::fabs(a.lg), std::fabs(b.lg)});
}

inline uint32_t below(TRng &g, uint32_t k) { return uint32_t(g() % k); }
inline bool coin(TRng &g) { return g() & 1; }
inline double unit_open(TRng &g) {
  double v = double(g() >> 11) * 0x1.0p-53;
  return v == 0 ? 0.5 : v;
}
inline bool coin(TRng &g, double p) { return unit_open(g) < p; }

inline void remap_formula_vars(Formula &f, const uint32_t *remap) {
  if (f.kind == Formula::Atom) {
    for (Term &t : f.args)
      if (t.is_var()) t = Term::var(remap[t.idx]);
    return;
  }
  for (Formula &k : f.kids) remap_formula_vars(k, remap);
}

// A small two-sort instance mixing unary and binary predicates, disjunctive
// formulas over shared variables and constants, soft and occasional hard
// weights, and a little evidence. At most 11 ground atoms.
inline PKB mixed_pkb(TRng &g, bool hard_only = false) {
  PKB pkb;
  SortId sa = pkb.voc.add_sort_sized("alpha", 2 + below(g, 2));
  SortId sb = pkb.voc.add_sort_sized("beta", 2);
  std::vector<PredId> preds;
  preds.push_back(pkb.voc.add_pred("Rel", {sa, sb}));
  preds.push_back(pkb.voc.add_pred("Pa", {sa}));
  if (coin(g)) preds.push_back(pkb.voc.add_pred("Pb", {sb}));

  uint32_t nf = 1 + below(g, hard_only ? 5 : 4);
  for (uint32_t i = 0; i < nf; ++i) {
    bool used[2] = {false, false};
    auto atom = [&]() {
      PredId p = preds[below(g, uint32_t(preds.size()))];
      std::vector<Term> args;
      for (SortId s : pkb.voc.pred(p).arg_sorts) {
        uint32_t vi = (s == sa) ? 0 : 1;
        if (coin(g)) {
          args.push_back(Term::var(vi));
          used[vi] = true;
        } else {
          args.push_back(Term::constant(below(g, pkb.voc.sort_size(s))));
        }
      }
      Formula f = Formula::atom(p, std::move(args));
      return coin(g) ? Formula::unary(Formula::Not, std::move(f)) : f;
    };
    Formula f = atom();
    for (uint32_t k = 1 + below(g, 3); k > 1; --k)
      f = Formula::binary(Formula::Or, std::move(f), atom());

    WeightedFormula wf;
    std::vector<FormulaVar> all = {{"x", sa}, {"y", sb}};
    uint32_t remap[2] = {0, 0};
    for (uint32_t v = 0; v < 2; ++v)
      if (used[v]) {
        remap[v] = uint32_t(wf.vars.size());
        wf.vars.push_back(all[v]);
      }
    remap_formula_vars(f, remap);
    wf.formula = std::move(f);
    if (hard_only || below(g, 5) == 0) {
      wf.form = WeightForm::Hard;
    } else {
      wf.form = WeightForm::Potential;
      wf.stated = unit_open(g);
    }
    pkb.formulas.push_back(std::move(wf));
  }

  if (!hard_only)
    for (uint32_t i = below(g, 3); i > 0; --i) {
      GroundLiteral l;
      l.pred = preds[below(g, uint32_t(preds.size()))];
      for (SortId s : pkb.voc.pred(l.pred).arg_sorts)
        l.consts.push_back(below(g, pkb.voc.sort_size(s)));
      l.neg = coin(g);
      pkb.evidence.push_back(std::move(l));
    }
  return pkb;
}

// Deterministic corpus shared by the unit tests and the acceptance gate:
// sixty percent single-sort unary instances from the library generator, the
// rest mixed-arity. Every instance keeps at most 15 ground atoms.
inline PKB corpus_pkb(uint64_t index) {
  TRng g(mix64(index * 2 + 1));
  if (index % 10 < 6) {
    uint32_t c = 1 + below(g, 3);
    uint32_t n = 1 + below(g, std::min(5u, 15u / c));
    uint32_t m = below(g, 7);
    uint32_t s = 1 + below(g, std::min(n, 3u));
    uint32_t e = below(g, std::min(4u, n * c + 1));
    return random_pkb(n, m, s, e, c, g());
  }
  return mixed_pkb(g);
}

inline PKB hard_only_pkb(uint64_t index) {
  TRng g(mix64(index * 2 + 1));
  return mixed_pkb(g, /*hard_only=*/true);
}

inline Query ground_atom_query(const PKB &pkb, TRng &g) {
  PredId p = below(g, uint32_t(pkb.voc.num_preds()));
  std::vector<Term> args;
  for (SortId s : pkb.voc.pred(p).arg_sorts)
    args.push_back(Term::constant(below(g, pkb.voc.sort_size(s))));
  return Query{Formula::atom(p, std::move(args)), {}};
}

inline Query first_atom_query(const PKB &pkb) {
  std::vector<Term> args(pkb.voc.pred(0).arg_sorts.size(), Term::constant(0));
  return Query{Formula::atom(0, std::move(args)), {}};
}

// Clause construction from literal specs like "!R(x,A)": lowercase arguments
// are variables shared within the builder, capitalized ones constants
// declared in the vocabulary.
class ClauseBuilder {
 public:
  explicit ClauseBuilder(const Vocabulary &voc) : voc_(voc) {}

  ClauseBuilder &lit(const std::string &spec) {
    size_t i = 0;
    Literal l;
    if (spec[i] == '!') {
      l.neg = true;
      ++i;
    }
    size_t open = spec.find('(', i);
    std::string pname = spec.substr(i, open - i);
    l.pred = *voc_.find_pred(pname);
    const auto &sorts = voc_.pred(l.pred).arg_sorts;
    size_t pos = open + 1, arg = 0;
    while (pos < spec.size() && spec[pos] != ')') {
      size_t end = spec.find_first_of(",)", pos);
      std::string tok = spec.substr(pos, end - pos);
      if (std::islower(static_cast<unsigned char>(tok[0]))) {
        auto it = vars_.find(tok);
        if (it == vars_.end()) {
          uint32_t v = clause_.store.add_var(sorts[arg], voc_.sort_size(sorts[arg]));
          it = vars_.emplace(tok, v).first;
        }
        l.args.push_back(Term::var(it->second));
      } else {
        l.args.push_back(Term::constant(voc_.find_const(tok)->second));
      }
      pos = end + (spec[end] == ',' ? 1 : 0);
      ++arg;
    }
    clause_.lits.push_back(std::move(l));
    return *this;
  }

  uint32_t var(const std::string &name) const { return vars_.at(name); }

  Clause build() const { return clause_; }

 private:
  const Vocabulary &voc_;
  Clause clause_;
  std::map<std::string, uint32_t> vars_;
};

}  // namespace testgen
}  // namespace liftcount
