#include "logic.hpp"

#include <algorithm>
#include <set>

namespace liftcount {

bool Clause::normalize() {
  for (Literal &l : lits)
    for (Term &t : l.args) t = store.resolve(t);
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  for (size_t i = 0; i + 1 < lits.size(); ++i)
    if (lits[i].same_atom(lits[i + 1]) && lits[i].neg != lits[i + 1].neg) return false;
  return true;
}

double Clause::num_groundings() const {
  if (!store.consistent()) return 0;
  return store.count_assignments();
}

namespace {

// Negation normal form with Implies/Iff expanded.
Formula to_nnf(const Formula &f, bool negated) {
  switch (f.kind) {
    case Formula::Atom: {
      Formula g = f;
      if (negated) return Formula::unary(Formula::Not, std::move(g));
      return g;
    }
    case Formula::Not:
      return to_nnf(f.kids[0], !negated);
    case Formula::And:
    case Formula::Or: {
      Formula::Kind k = f.kind;
      if (negated) k = (k == Formula::And) ? Formula::Or : Formula::And;
      Formula g;
      g.kind = k;
      for (const Formula &c : f.kids) g.kids.push_back(to_nnf(c, negated));
      return g;
    }
    case Formula::Implies: {
      // a => b  ==  !a v b
      Formula g = Formula::binary(Formula::Or, Formula::unary(Formula::Not, f.kids[0]),
                                  f.kids[1]);
      return to_nnf(g, negated);
    }
    case Formula::Iff: {
      Formula fwd = Formula::binary(Formula::Implies, f.kids[0], f.kids[1]);
      Formula bwd = Formula::binary(Formula::Implies, f.kids[1], f.kids[0]);
      Formula g = Formula::binary(Formula::And, std::move(fwd), std::move(bwd));
      return to_nnf(g, negated);
    }
    case Formula::Exists:
      throw ModelError("existential quantification is not supported");
  }
  throw ModelError("malformed formula");
}

struct ProtoLit {
  PredId pred;
  bool neg;
  std::vector<Term> args;  // vars index the formula table
  bool operator<(const ProtoLit &o) const {
    if (pred != o.pred) return pred < o.pred;
    if (neg != o.neg) return neg < o.neg;
    return args < o.args;
  }
  bool operator==(const ProtoLit &o) const {
    return pred == o.pred && neg == o.neg && args == o.args;
  }
};

constexpr size_t kClauseBudget = 1u << 20;

// Distribution of Or over And on an NNF tree.
std::vector<std::vector<ProtoLit>> distribute(const Formula &f) {
  switch (f.kind) {
    case Formula::Atom:
      return {{ProtoLit{f.pred, false, f.args}}};
    case Formula::Not:
      return {{ProtoLit{f.kids[0].pred, true, f.kids[0].args}}};
    case Formula::And: {
      std::vector<std::vector<ProtoLit>> out;
      for (const Formula &c : f.kids) {
        auto sub = distribute(c);
        out.insert(out.end(), sub.begin(), sub.end());
        if (out.size() > kClauseBudget) throw ModelError("clausal form too large");
      }
      return out;
    }
    case Formula::Or: {
      std::vector<std::vector<ProtoLit>> out = {{}};
      for (const Formula &c : f.kids) {
        auto sub = distribute(c);
        std::vector<std::vector<ProtoLit>> next;
        next.reserve(out.size() * sub.size());
        for (const auto &l : out)
          for (const auto &r : sub) {
            next.push_back(l);
            next.back().insert(next.back().end(), r.begin(), r.end());
          }
        if (next.size() > kClauseBudget) throw ModelError("clausal form too large");
        out = std::move(next);
      }
      return out;
    }
    default:
      throw ModelError("formula not in negation normal form");
  }
}

}  // namespace

CNF cnf_convert(const Formula &f, const std::vector<FormulaVar> &vars, const Vocabulary &voc) {
  // Validate argument sorts before doing anything else.
  auto validate = [&](const Formula &g, auto &&self) -> void {
    if (g.kind == Formula::Atom) {
      const auto &decl = voc.pred(g.pred);
      if (g.args.size() != decl.arg_sorts.size())
        throw ModelError("predicate '" + decl.name + "' arity mismatch");
      for (size_t i = 0; i < g.args.size(); ++i) {
        if (g.args[i].is_var()) {
          if (g.args[i].idx >= vars.size()) throw ModelError("unbound variable index");
          if (vars[g.args[i].idx].sort != decl.arg_sorts[i])
            throw ModelError("variable '" + vars[g.args[i].idx].name +
                             "' used at incompatible argument of '" + decl.name + "'");
        }
      }
    }
    for (const Formula &c : g.kids) self(c, self);
  };
  validate(f, validate);

  Formula nnf = to_nnf(f, false);
  auto proto = distribute(nnf);

  // Dedupe whole clauses in the shared variable space.
  for (auto &cl : proto) {
    std::sort(cl.begin(), cl.end());
    cl.erase(std::unique(cl.begin(), cl.end()), cl.end());
  }
  std::sort(proto.begin(), proto.end());
  proto.erase(std::unique(proto.begin(), proto.end()), proto.end());

  CNF out;
  for (const auto &cl : proto) {
    Clause clause;
    std::map<uint32_t, uint32_t> var_map;  // formula var -> clause var
    auto map_term = [&](Term t) {
      if (t.is_const()) return t;
      auto it = var_map.find(t.idx);
      if (it != var_map.end()) return Term::var(it->second);
      SortId s = vars[t.idx].sort;
      uint32_t v = clause.store.add_var(s, voc.sort_size(s));
      var_map.emplace(t.idx, v);
      return Term::var(v);
    };
    for (const ProtoLit &pl : cl) {
      Literal lit;
      lit.pred = pl.pred;
      lit.neg = pl.neg;
      for (Term t : pl.args) lit.args.push_back(map_term(t));
      clause.lits.push_back(std::move(lit));
    }
    if (!clause.normalize()) continue;  // tautology
    if (!clause.vacuous()) out.clauses.push_back(std::move(clause));
  }
  return out;
}

std::optional<AtomPattern> unify_atoms(const Literal &a, const ConstraintStore &sa,
                                       const Literal &b, const ConstraintStore &sb) {
  if (a.pred != b.pred) return std::nullopt;
  // Build b's occurrence as a pattern: copy the roots its args use.
  AtomPattern pb;
  pb.pred = b.pred;
  std::map<uint32_t, uint32_t> remap;
  for (Term t : b.args) {
    Term r = sb.resolve(t);
    if (r.is_const()) {
      pb.args.push_back(r);
      continue;
    }
    auto it = remap.find(r.idx);
    if (it == remap.end()) {
      uint32_t nv = pb.store.add_var(sb.sort_of(r.idx), sb.live(r.idx));
      remap.emplace(r.idx, nv);
      pb.args.push_back(Term::var(nv));
    } else {
      pb.args.push_back(Term::var(it->second));
    }
  }
  for (auto [u, v] : sb.neq_edges()) {
    auto iu = remap.find(sb.find(u)), iv = remap.find(sb.find(v));
    if (iu != remap.end() && iv != remap.end()) pb.store.require_neq(iu->second, iv->second);
  }
  auto pieces = project_overlap(sa, a.pred, a.args, pb);
  if (pieces.empty()) return std::nullopt;
  // Usually a single pattern; the rare multi-piece fallback returns its
  // first piece here. Callers needing the complete set use project_overlap.
  return pieces.front();
}

uint32_t GroundAtomTable::intern(PredId pred, const std::vector<ConstId> &consts) {
  std::vector<uint32_t> key;
  key.reserve(consts.size() + 1);
  key.push_back(pred);
  key.insert(key.end(), consts.begin(), consts.end());
  auto it = ids_.find(key);
  if (it != ids_.end()) return it->second;
  uint32_t id = uint32_t(keys_.size());
  ids_.emplace(key, id);
  keys_.push_back(std::move(key));
  return id;
}

std::optional<uint32_t> GroundAtomTable::find(PredId pred,
                                              const std::vector<ConstId> &consts) const {
  std::vector<uint32_t> key;
  key.push_back(pred);
  key.insert(key.end(), consts.begin(), consts.end());
  auto it = ids_.find(key);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::string GroundAtomTable::name(const Vocabulary &voc, uint32_t id) const {
  const auto &key = keys_[id];
  const auto &pred = voc.pred(key[0]);
  std::string out = pred.name + "(";
  for (size_t i = 1; i < key.size(); ++i) {
    if (i > 1) out += ",";
    out += voc.const_name(pred.arg_sorts[i - 1], key[i]);
  }
  return out + ")";
}

void ground_clause(const Clause &c, GroundAtomTable &table, GroundClauseSink &sink) {
  std::set<std::vector<int32_t>> dedupe(sink.clauses.begin(), sink.clauses.end());
  c.store.enumerate([&](const std::vector<ConstId> &assignment) {
    std::vector<int32_t> ground;
    ground.reserve(c.lits.size());
    for (const Literal &l : c.lits) {
      std::vector<ConstId> consts;
      consts.reserve(l.args.size());
      for (Term t : l.args) consts.push_back(t.is_const() ? ConstId(t.idx) : assignment[t.idx]);
      uint32_t id = table.intern(l.pred, consts);
      sink.atoms_seen.push_back(id);
      ground.push_back(l.neg ? -int32_t(id + 1) : int32_t(id + 1));
    }
    std::sort(ground.begin(), ground.end(),
              [](int32_t a, int32_t b) { return std::abs(a) != std::abs(b)
                                             ? std::abs(a) < std::abs(b)
                                             : a < b; });
    ground.erase(std::unique(ground.begin(), ground.end()), ground.end());
    for (size_t i = 0; i + 1 < ground.size(); ++i)
      if (ground[i] == -ground[i + 1]) return;  // tautology; atoms already recorded
    if (dedupe.insert(ground).second) sink.clauses.push_back(std::move(ground));
  });
}

}  // namespace liftcount
