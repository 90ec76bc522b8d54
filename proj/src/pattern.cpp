#include "pattern.hpp"

#include <algorithm>
#include <map>

namespace liftcount {

bool apply_restriction(ConstraintStore &s, const Restriction &r) {
  switch (r.kind) {
    case Restriction::EqVars:
      return s.require_eq(r.a, r.b);
    case Restriction::NeqVars:
      return s.require_neq(r.a, r.b);
    case Restriction::Live:
      return s.restrict_live(r.a, r.live);
  }
  return false;
}

bool apply_negation(ConstraintStore &s, const Restriction &r) {
  switch (r.kind) {
    case Restriction::EqVars:
      return s.require_neq(r.a, r.b);
    case Restriction::NeqVars:
      return s.require_eq(r.a, r.b);
    case Restriction::Live: {
      Bitset allowed = s.live(r.a);
      allowed -= r.live;
      return s.restrict_live(r.a, allowed);
    }
  }
  return false;
}

std::optional<std::vector<Restriction>> match_restrictions(const ConstraintStore &store,
                                                           const std::vector<Term> &args,
                                                           const AtomPattern &p) {
  assert(args.size() == p.args.size());
  // Merge: W = store's variables followed by the pattern's.
  ConstraintStore w = store;
  std::vector<uint32_t> pvar(p.store.num_vars(), UINT32_MAX);
  for (uint32_t v = 0; v < p.store.num_vars(); ++v)
    pvar[v] = w.add_var(p.store.sort_of(v), p.store.live(v));
  for (auto [a, b] : p.store.neq_edges())
    if (!w.require_neq(pvar[a], pvar[b])) return std::nullopt;

  for (size_t i = 0; i < args.size(); ++i) {
    Term t = args[i], q = p.args[i];
    if (t.is_const() && q.is_const()) {
      if (t.idx != q.idx) return std::nullopt;
    } else if (t.is_const()) {
      if (!w.require_eq_const(pvar[q.idx], ConstId(t.idx))) return std::nullopt;
    } else if (q.is_const()) {
      if (!w.require_eq_const(t.idx, ConstId(q.idx))) return std::nullopt;
    } else {
      if (!w.require_eq(t.idx, pvar[q.idx])) return std::nullopt;
    }
  }
  if (!w.consistent()) return std::nullopt;

  // Extract the merged structure as restrictions over the original store.
  std::vector<Restriction> rs;
  size_t n = store.num_vars();
  std::map<uint32_t, std::vector<uint32_t>> groups;  // W root -> original roots
  for (uint32_t v = 0; v < n; ++v)
    if (store.find(v) == v) groups[w.find(v)].push_back(v);

  for (auto &[wr, members] : groups)
    for (size_t i = 1; i < members.size(); ++i)
      rs.push_back(Restriction::eq(members[0], members[i]));

  for (auto &[wr, members] : groups) {
    Bitset base = store.live(members[0]);
    for (size_t i = 1; i < members.size(); ++i) base &= store.live(members[i]);
    const Bitset &merged = w.live(members[0]);
    if (!base.subset_of(merged)) rs.push_back(Restriction::domain(members[0], merged));
  }

  for (auto [a, b] : w.neq_edges()) {
    uint32_t ra = w.find(a), rb = w.find(b);
    auto ga = groups.find(ra), gb = groups.find(rb);
    if (ga == groups.end() || gb == groups.end()) continue;  // pattern-only root
    bool already = false;
    for (uint32_t ma : ga->second)
      for (uint32_t mb : gb->second)
        if (store.has_neq(ma, mb)) already = true;
    if (!already) rs.push_back(Restriction::neq(ga->second[0], gb->second[0]));
  }
  return rs;
}

Carve carve(const ConstraintStore &store, const std::vector<Restriction> &rs) {
  Carve out;
  for (size_t j = 0; j < rs.size(); ++j) {
    ConstraintStore piece = store;
    bool ok = true;
    for (size_t i = 0; i < j && ok; ++i) ok = apply_restriction(piece, rs[i]);
    if (ok) ok = apply_negation(piece, rs[j]);
    if (ok && piece.consistent()) out.outside.push_back(std::move(piece));
  }
  ConstraintStore inside = store;
  bool ok = true;
  for (const Restriction &r : rs)
    if (!(ok = apply_restriction(inside, r))) break;
  if (ok && inside.consistent()) out.inside = std::move(inside);
  return out;
}

namespace {

// Pattern whose variables are exactly the distinct roots of `args` in `w`,
// assuming extension to the rest of w is unconstrained or already checked.
AtomPattern restrict_to_args(const ConstraintStore &w, PredId pred,
                             const std::vector<Term> &args) {
  AtomPattern out;
  out.pred = pred;
  std::map<uint32_t, uint32_t> remap;  // w root -> pattern var
  for (Term t : args) {
    Term r = w.resolve(t);
    if (r.is_const()) {
      out.args.push_back(r);
      continue;
    }
    auto it = remap.find(r.idx);
    if (it == remap.end()) {
      uint32_t nv = out.store.add_var(w.sort_of(r.idx), w.live(r.idx));
      remap.emplace(r.idx, nv);
      out.args.push_back(Term::var(nv));
    } else {
      out.args.push_back(Term::var(it->second));
    }
  }
  for (auto [a, b] : w.neq_edges()) {
    auto ia = remap.find(w.find(a)), ib = remap.find(w.find(b));
    if (ia != remap.end() && ib != remap.end())
      out.store.require_neq(ia->second, ib->second);
  }
  return out;
}

bool extension_safe(const ConstraintStore &w, const std::vector<Term> &args) {
  std::vector<uint32_t> internal;
  for (Term t : args)
    if (t.is_var()) internal.push_back(w.find(t.idx));
  std::map<uint32_t, uint32_t> degree;
  for (auto [a, b] : w.neq_edges()) {
    degree[w.find(a)]++;
    degree[w.find(b)]++;
  }
  for (auto [a, b] : w.neq_edges()) {
    uint32_t ra = w.find(a), rb = w.find(b);
    bool ia = std::find(internal.begin(), internal.end(), ra) != internal.end();
    bool ib = std::find(internal.begin(), internal.end(), rb) != internal.end();
    if (ia && ib) continue;
    uint32_t outside = ia ? rb : ra;
    if (w.live(outside).count() <= degree[outside]) return false;
  }
  return true;
}

}  // namespace

std::vector<AtomPattern> project_overlap(const ConstraintStore &store, PredId pred,
                                         const std::vector<Term> &args,
                                         const AtomPattern &p) {
  auto rs = match_restrictions(store, args, p);
  if (!rs) return {};
  ConstraintStore w = store;
  for (const Restriction &r : *rs)
    if (!apply_restriction(w, r)) return {};
  if (!w.consistent() || w.count_groundings(args) == 0) return {};

  if (extension_safe(w, args)) {
    AtomPattern out = restrict_to_args(w, pred, args);
    if (out.empty()) return {};
    return {std::move(out)};
  }

  // Tight coupling to outside variables: enumerate the extendable tuples.
  std::vector<AtomPattern> out;
  std::vector<std::vector<ConstId>> seen;
  w.enumerate([&](const std::vector<ConstId> &assignment) {
    std::vector<ConstId> tuple;
    tuple.reserve(args.size());
    for (Term t : args)
      tuple.push_back(t.is_const() ? ConstId(t.idx) : assignment[t.idx]);
    if (std::find(seen.begin(), seen.end(), tuple) != seen.end()) return;
    seen.push_back(tuple);
    if (seen.size() > 65536) throw ModelError("projection fallback exceeded tuple budget");
    AtomPattern g;
    g.pred = pred;
    for (ConstId c : tuple) g.args.push_back(Term::constant(c));
    out.push_back(std::move(g));
  });
  return out;
}

std::optional<AtomPattern> intersect_patterns(const AtomPattern &a, const AtomPattern &b) {
  if (a.pred != b.pred) return std::nullopt;
  auto rs = match_restrictions(a.store, a.args, b);
  if (!rs) return std::nullopt;
  ConstraintStore s = a.store;
  for (const Restriction &r : *rs)
    if (!apply_restriction(s, r)) return std::nullopt;
  if (!s.consistent()) return std::nullopt;
  AtomPattern out = restrict_to_args(s, a.pred, a.args);
  if (out.empty()) return std::nullopt;
  return out;
}

std::vector<AtomPattern> subtract_pattern(const AtomPattern &a, const AtomPattern &b) {
  if (a.pred != b.pred) return {a};
  auto rs = match_restrictions(a.store, a.args, b);
  if (!rs) return {a};
  Carve c = carve(a.store, *rs);
  std::vector<AtomPattern> out;
  for (ConstraintStore &s : c.outside) {
    AtomPattern piece = restrict_to_args(s, a.pred, a.args);
    if (!piece.empty()) out.push_back(std::move(piece));
  }
  return out;
}

bool patterns_overlap(const AtomPattern &a, const AtomPattern &b) {
  return intersect_patterns(a, b).has_value();
}

bool tuple_overlaps(const ConstraintStore &store, const std::vector<Term> &args,
                    const AtomPattern &p) {
  if (!store.consistent()) return false;
  auto rs = match_restrictions(store, args, p);
  if (!rs) return false;
  ConstraintStore s = store;
  for (const Restriction &r : *rs)
    if (!apply_restriction(s, r)) return false;
  return s.consistent() && s.count_groundings(args) > 0;
}

AtomPattern full_pattern(const Vocabulary &voc, PredId pred) {
  AtomPattern out;
  out.pred = pred;
  for (SortId s : voc.pred(pred).arg_sorts) {
    uint32_t v = out.store.add_var(s, voc.sort_size(s));
    out.args.push_back(Term::var(v));
  }
  return out;
}

AtomPattern ground_pattern(const Vocabulary &voc, PredId pred,
                           const std::vector<ConstId> &consts) {
  (void)voc;
  AtomPattern out;
  out.pred = pred;
  for (ConstId c : consts) out.args.push_back(Term::constant(c));
  return out;
}

uint64_t pattern_hash(const AtomPattern &p) {
  uint64_t h = hash_combine(0xa70a, p.pred);
  for (Term t : p.args) {
    Term r = p.store.resolve(t);
    h = hash_combine(h, (uint64_t(r.kind) << 32) | r.idx);
  }
  return hash_combine(h, p.store.content_hash());
}

}  // namespace liftcount
