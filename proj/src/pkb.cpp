#include "pkb.hpp"

#include <cmath>
#include <set>

namespace liftcount {

double WeightedFormula::potential() const {
  switch (form) {
    case WeightForm::Potential:
      return stated;
    case WeightForm::Hard:
      return 0;
    case WeightForm::LogWeight:
      return std::exp(-stated);
  }
  return 0;
}

namespace {

void collect_vars(const Formula &f, std::set<uint32_t> &out) {
  if (f.kind == Formula::Atom)
    for (Term t : f.args)
      if (t.is_var()) out.insert(t.idx);
  for (const Formula &k : f.kids) collect_vars(k, out);
}

}  // namespace

void add_hard_formula(WCNF &kb, const Formula &f, const std::vector<FormulaVar> &vars) {
  CNF cnf = cnf_convert(f, vars, kb.voc);
  for (Clause &c : cnf.clauses) kb.clauses.push_back(std::move(c));
}

void add_unit(WCNF &kb, const GroundLiteral &l) {
  Clause c;
  Literal lit;
  lit.pred = l.pred;
  lit.neg = l.neg;
  for (ConstId cid : l.consts) lit.args.push_back(Term::constant(cid));
  c.lits.push_back(std::move(lit));
  kb.clauses.push_back(std::move(c));
}

WCNF compile_wcnf(const PKB &pkb) {
  WCNF kb;
  kb.voc = pkb.voc;
  kb.weights.assign(kb.voc.num_preds(), {LogNum::one(), LogNum::one()});
  for (size_t i = 0; i < pkb.formulas.size(); ++i) {
    const WeightedFormula &wf = pkb.formulas[i];
    if (wf.is_hard()) {
      add_hard_formula(kb, wf.formula, wf.vars);
      continue;
    }
    double phi = wf.potential();
    if (phi == 1) continue;  // violations cost nothing; the formula is inert
    std::set<uint32_t> fv;
    collect_vars(wf.formula, fv);
    std::vector<Term> aux_args;
    std::vector<SortId> aux_sorts;
    for (uint32_t v : fv) {
      aux_args.push_back(Term::var(v));
      aux_sorts.push_back(wf.vars[v].sort);
    }
    PredId aux =
        kb.voc.add_pred("_f" + std::to_string(i + 1), aux_sorts, /*internal=*/true);
    kb.weights.push_back({LogNum::one(), LogNum::from_linear(phi)});
    Formula equiv =
        Formula::binary(Formula::Iff, wf.formula, Formula::atom(aux, std::move(aux_args)));
    add_hard_formula(kb, equiv, wf.vars);
  }
  for (const GroundLiteral &l : pkb.evidence) add_unit(kb, l);
  return kb;
}

namespace {

// Reachability state per predicate: unreached, one binding pattern, or the
// whole predicate.
struct Reach {
  enum Level : uint8_t { None, One, Full } level = None;
  AtomPattern pat;
};

bool covered_by(const AtomPattern &piece, const AtomPattern &pat) {
  return subtract_pattern(piece, pat).empty();
}

}  // namespace

std::vector<size_t> reachable_clauses(const std::vector<Clause> &clauses,
                                      const std::vector<Clause> &seeds,
                                      const Vocabulary &voc) {
  std::vector<Reach> reach(voc.num_preds());

  auto contribute = [&](PredId pred, std::vector<AtomPattern> pieces) -> bool {
    Reach &r = reach[pred];
    if (r.level == Reach::Full) return false;
    bool changed = false;
    for (AtomPattern &p : pieces) {
      if (r.level == Reach::None) {
        r.level = Reach::One;
        r.pat = std::move(p);
        changed = true;
      } else if (!covered_by(p, r.pat)) {
        r.level = Reach::Full;
        changed = true;
        break;
      }
    }
    return changed;
  };

  auto spread = [&](const Clause &c, size_t skip, const ConstraintStore &s) -> bool {
    bool changed = false;
    for (size_t j = 0; j < c.lits.size(); ++j) {
      if (j == skip) continue;
      const Literal &l = c.lits[j];
      changed |= contribute(
          l.pred, project_overlap(s, l.pred, l.args, full_pattern(voc, l.pred)));
    }
    return changed;
  };

  for (const Clause &c : seeds)
    spread(c, c.lits.size(), c.store);

  std::vector<bool> active(clauses.size(), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < clauses.size(); ++i) {
      const Clause &c = clauses[i];
      for (size_t j = 0; j < c.lits.size(); ++j) {
        const Literal &l = c.lits[j];
        const Reach &r = reach[l.pred];
        if (r.level == Reach::None) continue;
        if (r.level == Reach::One && !tuple_overlaps(c.store, l.args, r.pat)) continue;
        if (!active[i]) {
          active[i] = true;
          changed = true;
        }
        if (r.level == Reach::Full) {
          changed |= spread(c, j, c.store);
        } else {
          auto rs = match_restrictions(c.store, l.args, r.pat);
          if (!rs) continue;
          Carve cv = carve(c.store, *rs);
          if (cv.inside) changed |= spread(c, j, *cv.inside);
        }
      }
    }
  }

  std::vector<size_t> out;
  for (size_t i = 0; i < clauses.size(); ++i)
    if (active[i]) out.push_back(i);
  return out;
}

}  // namespace liftcount
