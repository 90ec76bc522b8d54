#include "lifted.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace liftcount {

namespace {

// Degree of root r in the store's inequality graph.
uint32_t neq_degree(const ConstraintStore &st, uint32_t r) {
  uint32_t d = 0;
  for (auto [a, b] : st.neq_edges())
    if (st.find(a) == r || st.find(b) == r) ++d;
  return d;
}

}  // namespace

bool push_clause(std::vector<Clause> &out, Clause c, const Vocabulary &voc) {
  if (!c.store.propagate()) return true;  // no groundings: vacuous
  if (!c.normalize()) return true;        // tautology
  if (!c.store.consistent()) return true;
  if (c.num_groundings() == 0) return true;
  if (c.lits.empty()) return false;  // an unsatisfiable ground instance

  std::set<uint32_t> used;
  for (const Literal &l : c.lits)
    for (Term t : l.args)
      if (t.is_var()) used.insert(c.store.find(t.idx));

  for (uint32_t r = 0; r < c.store.num_vars(); ++r) {
    if (c.store.find(r) != r || used.count(r)) continue;
    uint32_t degree = neq_degree(c.store, r);
    if (degree == 0 || c.store.live(r).count() > degree) continue;  // always extendable
    // Tightly constrained unused variable: replace the clause by one copy
    // per value. The copies' instance sets union to the original's.
    bool ok = true;
    c.store.live(r).for_each([&](uint32_t value) {
      Clause copy = c;
      copy.store.require_eq_const(r, value);
      if (!push_clause(out, std::move(copy), voc)) ok = false;
    });
    return ok;
  }

  // Rebuild the store over used roots only.
  Clause nc;
  std::map<uint32_t, uint32_t> remap;
  for (uint32_t r : used) remap.emplace(r, nc.store.add_var(c.store.sort_of(r), c.store.live(r)));
  for (auto [a, b] : c.store.neq_edges()) {
    auto ia = remap.find(c.store.find(a)), ib = remap.find(c.store.find(b));
    if (ia != remap.end() && ib != remap.end()) nc.store.require_neq(ia->second, ib->second);
  }
  nc.lits = std::move(c.lits);
  for (Literal &l : nc.lits)
    for (Term &t : l.args)
      if (t.is_var()) t = Term::var(remap.at(c.store.find(t.idx)));
  std::sort(nc.lits.begin(), nc.lits.end());
  out.push_back(std::move(nc));
  return true;
}

std::vector<AtomPattern> pack_tuples(const Vocabulary &voc, PredId pred,
                                     std::vector<std::vector<ConstId>> tuples) {
  const auto &sorts = voc.pred(pred).arg_sorts;

  // Recursive grouping: values at the current position with identical
  // remainder sets merge into one product block.
  struct Block {
    std::vector<Bitset> lives;  // one per position from here on
  };
  auto rec = [&](auto &&self, std::vector<std::vector<ConstId>> rows,
                 size_t pos) -> std::vector<Block> {
    if (pos == sorts.size()) return {Block{}};
    // Rows reaching depth pos are already sliced down to positions pos..end,
    // so the current value is always at the front.
    std::map<ConstId, std::vector<std::vector<ConstId>>> by_value;
    for (auto &row : rows) {
      ConstId v = row[0];
      std::vector<ConstId> rest(row.begin() + 1, row.end());
      by_value[v].push_back(std::move(rest));
    }
    std::map<std::vector<std::vector<ConstId>>, Bitset> groups;
    for (auto &[v, rest] : by_value) {
      std::sort(rest.begin(), rest.end());
      rest.erase(std::unique(rest.begin(), rest.end()), rest.end());
      auto [it, fresh] = groups.emplace(std::move(rest), Bitset(voc.sort_size(sorts[pos])));
      it->second.set(v);
    }
    std::vector<Block> out;
    for (auto &[rest, values] : groups) {
      std::vector<std::vector<ConstId>> sub(rest.begin(), rest.end());
      for (Block &b : self(self, std::move(sub), pos + 1)) {
        Block whole;
        whole.lives.push_back(values);
        for (Bitset &lv : b.lives) whole.lives.push_back(std::move(lv));
        out.push_back(std::move(whole));
      }
    }
    return out;
  };

  std::vector<AtomPattern> out;
  if (tuples.empty()) return out;
  // The recursion treats rows positionally; dedupe up front.
  std::sort(tuples.begin(), tuples.end());
  tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
  for (Block &b : rec(rec, std::move(tuples), 0)) {
    AtomPattern p;
    p.pred = pred;
    for (size_t k = 0; k < sorts.size(); ++k) {
      uint32_t v = p.store.add_var(sorts[k], std::move(b.lives[k]));
      p.args.push_back(Term::var(v));
    }
    out.push_back(std::move(p));
  }
  return out;
}

GroundKB ground_node(const Node &node, const WCNF &kb, GroundAtomTable &table) {
  GroundKB out;
  for (const AtomPattern &p : node.pieces) {
    p.store.enumerate([&](const std::vector<ConstId> &assignment) {
      std::vector<ConstId> consts;
      consts.reserve(p.args.size());
      for (Term t : p.args)
        consts.push_back(t.is_const() ? ConstId(t.idx) : assignment[t.idx]);
      table.intern(p.pred, consts);
    });
  }
  uint32_t universe = table.size();
  GroundClauseSink sink;
  for (const Clause &c : node.clauses) ground_clause(c, table, sink);
  for (uint32_t id : sink.atoms_seen)
    if (id >= universe)
      throw std::logic_error("clause atom outside the node universe: " +
                             std::to_string(id));
  out.clauses = std::move(sink.clauses);
  out.weights.reserve(table.size());
  for (uint32_t id = 0; id < table.size(); ++id)
    out.weights.push_back(kb.weights[table.pred_of(id)]);
  return out;
}

LiftedCounter::LiftedCounter(const WCNF &kb, const LiftedOptions &opt, LiftedStats &stats)
    : kb_(kb), opt_(opt), stats_(stats), cache_(opt.cache_bytes) {
  retire_.reserve(kb.weights.size());
  for (const auto &[wt, wf] : kb.weights) retire_.push_back(wt + wf);
}

std::pair<Node, LogNum> LiftedCounter::root() {
  Node node;
  for (PredId p = 0; p < kb_.voc.num_preds(); ++p)
    node.pieces.push_back(full_pattern(kb_.voc, p));

  // Ground unit clauses batch into per-predicate assignments; everything
  // else enters the clause list.
  std::map<std::pair<PredId, bool>, std::vector<std::vector<ConstId>>> units;
  std::map<std::pair<PredId, std::vector<ConstId>>, bool> polarity;
  std::vector<Clause> rest;
  for (Clause c : kb_.clauses) {
    std::vector<Clause> tidied;
    if (!push_clause(tidied, std::move(c), kb_.voc)) return {Node{}, LogNum::zero()};
    for (Clause &t : tidied) {
      bool ground_unit = t.lits.size() == 1;
      std::vector<ConstId> consts;
      if (ground_unit)
        for (Term a : t.lits[0].args) {
          Term r = t.store.resolve(a);
          if (!r.is_const()) {
            ground_unit = false;
            break;
          }
          consts.push_back(ConstId(r.idx));
        }
      if (!ground_unit) {
        rest.push_back(std::move(t));
        continue;
      }
      const Literal &l = t.lits[0];
      auto [it, fresh] = polarity.emplace(std::make_pair(l.pred, consts), !l.neg);
      if (!fresh) {
        if (it->second != !l.neg) return {Node{}, LogNum::zero()};  // contradictory units
        continue;
      }
      units[{l.pred, !l.neg}].push_back(std::move(consts));
    }
  }
  node.clauses = std::move(rest);

  LogNum factor = LogNum::one();
  for (auto &[key, tuples] : units) {
    auto [pred, value] = key;
    LogNum w = value ? kb_.w_true(pred) : kb_.w_false(pred);
    for (AtomPattern &pack : pack_tuples(kb_.voc, pred, std::move(tuples))) {
      factor *= w.pow(pack.count());
      auto next = assign(std::move(node), pred, pack, value);
      if (!next) return {Node{}, LogNum::zero()};
      node = std::move(*next);
    }
  }
  return {std::move(node), factor};
}

LogNum LiftedCounter::run() {
  auto [node, factor] = root();
  if (factor.is_zero()) return LogNum::zero();
  return factor * count(std::move(node));
}

std::optional<Node> LiftedCounter::assign(Node node, PredId pred, const AtomPattern &set,
                                          bool value) {
  if (set.empty()) return node;
  Node out;
  out.pieces.reserve(node.pieces.size());
  for (AtomPattern &piece : node.pieces) {
    if (piece.pred != pred) {
      out.pieces.push_back(std::move(piece));
      continue;
    }
    for (AtomPattern &part : subtract_pattern(piece, set))
      out.pieces.push_back(std::move(part));
  }
  for (Clause &clause : node.clauses) {
    std::vector<Clause> work;
    work.push_back(std::move(clause));
    while (!work.empty()) {
      Clause part = std::move(work.back());
      work.pop_back();
      size_t j = part.lits.size();
      for (size_t i = 0; i < part.lits.size(); ++i)
        if (part.lits[i].pred == pred &&
            tuple_overlaps(part.store, part.lits[i].args, set)) {
          j = i;
          break;
        }
      if (j == part.lits.size()) {
        if (!push_clause(out.clauses, std::move(part), kb_.voc)) return std::nullopt;
        continue;
      }
      auto rs = match_restrictions(part.store, part.lits[j].args, set);
      if (!rs) continue;  // overlap vanished under closer inspection
      Carve cv = carve(part.store, *rs);
      for (ConstraintStore &o : cv.outside) {
        Clause oc;
        oc.store = std::move(o);
        oc.lits = part.lits;
        work.push_back(std::move(oc));
      }
      if (!cv.inside) continue;
      bool lit_true = part.lits[j].neg != value;
      if (lit_true) continue;  // clause instances satisfied
      Clause ic;
      ic.store = std::move(*cv.inside);
      ic.lits = std::move(part.lits);
      ic.lits.erase(ic.lits.begin() + ptrdiff_t(j));
      work.push_back(std::move(ic));
    }
  }
  return out;
}

LogNum LiftedCounter::sweep(Node &node) {
  LogNum factor = LogNum::one();
  std::vector<AtomPattern> kept;
  kept.reserve(node.pieces.size());
  for (AtomPattern &piece : node.pieces) {
    bool touched = false;
    for (const Clause &c : node.clauses) {
      for (const Literal &l : c.lits)
        if (l.pred == piece.pred && tuple_overlaps(c.store, l.args, piece)) {
          touched = true;
          break;
        }
      if (touched) break;
    }
    if (touched)
      kept.push_back(std::move(piece));
    else
      factor *= retire_[piece.pred].pow(piece.count());
  }
  node.pieces = std::move(kept);
  return factor;
}

std::vector<Node> LiftedCounter::split_components(const Node &node) {
  size_t nc = node.clauses.size(), np = node.pieces.size();
  std::vector<uint32_t> parent(nc + np);
  for (uint32_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](uint32_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  auto join = [&](uint32_t a, uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  // Clauses connect through pieces: two clauses sharing a ground atom both
  // overlap the piece containing it, so clause-piece edges suffice.
  for (size_t ci = 0; ci < nc; ++ci)
    for (const Literal &l : node.clauses[ci].lits)
      for (size_t pi = 0; pi < np; ++pi)
        if (node.pieces[pi].pred == l.pred &&
            tuple_overlaps(node.clauses[ci].store, l.args, node.pieces[pi]))
          join(uint32_t(ci), uint32_t(nc + pi));
  std::map<uint32_t, Node> groups;
  for (size_t ci = 0; ci < nc; ++ci)
    groups[find(uint32_t(ci))].clauses.push_back(node.clauses[ci]);
  for (size_t pi = 0; pi < np; ++pi)
    groups[find(uint32_t(nc + pi))].pieces.push_back(node.pieces[pi]);
  std::vector<Node> out;
  out.reserve(groups.size());
  for (auto &[root, group] : groups) out.push_back(std::move(group));
  return out;
}

std::optional<LiftedCounter::Decomposer> LiftedCounter::find_decomposer(
    const Node &node) const {
  if (node.clauses.empty()) return std::nullopt;
  std::set<std::pair<PredId, uint32_t>> tried;
  for (const Clause &seed_clause : node.clauses)
    for (const Literal &seed_lit : seed_clause.lits)
      for (uint32_t seed_pos = 0; seed_pos < seed_lit.args.size(); ++seed_pos) {
        if (!tried.emplace(seed_lit.pred, seed_pos).second) continue;
        std::set<std::pair<PredId, uint32_t>> positions{{seed_lit.pred, seed_pos}};
        std::vector<uint32_t> dvar(node.clauses.size());
        bool ok = true, grew = true;
        while (ok && grew) {
          grew = false;
          // One variable per clause must fill every closure position.
          std::vector<bool> defined(node.clauses.size(), false);
          for (size_t ci = 0; ci < node.clauses.size() && ok; ++ci) {
            const Clause &c = node.clauses[ci];
            for (const Literal &l : c.lits)
              for (uint32_t k = 0; k < l.args.size(); ++k) {
                if (!positions.count({l.pred, k})) continue;
                Term t = c.store.resolve(l.args[k]);
                if (t.is_const()) {
                  ok = false;
                  break;
                }
                uint32_t r = c.store.find(t.idx);
                if (!defined[ci]) {
                  defined[ci] = true;
                  dvar[ci] = r;
                } else if (dvar[ci] != r) {
                  ok = false;
                  break;
                }
              }
          }
          if (!ok) break;
          // Defined clauses: the variable must reach every literal; its
          // other positions join the closure.
          for (size_t ci = 0; ci < node.clauses.size() && ok; ++ci) {
            if (!defined[ci]) continue;
            const Clause &c = node.clauses[ci];
            for (const Literal &l : c.lits) {
              bool present = false;
              for (uint32_t k = 0; k < l.args.size(); ++k) {
                Term t = c.store.resolve(l.args[k]);
                if (t.is_var() && c.store.find(t.idx) == dvar[ci]) {
                  present = true;
                  if (positions.emplace(l.pred, k).second) grew = true;
                }
              }
              if (!present) {
                ok = false;
                break;
              }
            }
          }
          if (!ok || grew) continue;
          for (bool d : defined)
            if (!d) {
              ok = false;
              break;
            }
        }
        if (!ok) continue;
        Decomposer out;
        out.positions.assign(positions.begin(), positions.end());
        out.sort = kb_.voc.pred(out.positions[0].first).arg_sorts[out.positions[0].second];
        return out;
      }
  return std::nullopt;
}

LiftedCounter::DecompBlocks LiftedCounter::prepare_decomposer(const Node &node,
                                                              const Decomposer &d) {
  DecompBlocks out;
  std::set<std::pair<PredId, uint32_t>> closure(d.positions.begin(), d.positions.end());

  // Within each piece, atoms whose closure positions disagree are reachable
  // by no clause in any block: retire them. The rest collapse to one value
  // variable per piece.
  struct EqPiece {
    AtomPattern pat;
    Term value;  // variable root or constant filling the closure positions
  };
  std::vector<EqPiece> eq_pieces;
  for (const AtomPattern &orig : node.pieces) {
    AtomPattern piece = orig;
    std::vector<uint32_t> ks;
    for (uint32_t k = 0; k < piece.args.size(); ++k)
      if (closure.count({piece.pred, k})) ks.push_back(k);
    if (ks.empty())
      throw std::logic_error("piece predicate escapes the decomposer closure");
    std::vector<Restriction> rs;
    bool feasible = true;
    Term t0 = piece.store.resolve(piece.args[ks[0]]);
    for (size_t i = 1; i < ks.size() && feasible; ++i) {
      Term ti = piece.store.resolve(piece.args[ks[i]]);
      if (t0.is_var() && ti.is_var()) {
        uint32_t a = piece.store.find(t0.idx), b = piece.store.find(ti.idx);
        if (a != b) rs.push_back(Restriction::eq(a, b));
      } else if (t0.is_var() || ti.is_var()) {
        uint32_t v = piece.store.find(t0.is_var() ? t0.idx : ti.idx);
        ConstId c = ConstId(t0.is_var() ? ti.idx : t0.idx);
        Bitset allow(piece.store.live(v).size());
        allow.set(c);
        rs.push_back(Restriction::domain(v, std::move(allow)));
      } else if (t0.idx != ti.idx) {
        feasible = false;
      }
    }
    if (!feasible) {
      out.retired *= retire_[piece.pred].pow(piece.count());
      continue;
    }
    Carve cv = carve(piece.store, rs);
    for (ConstraintStore &o : cv.outside) {
      AtomPattern op{piece.pred, piece.args, std::move(o)};
      out.retired *= retire_[piece.pred].pow(op.count());
    }
    if (!cv.inside) continue;
    AtomPattern ip{piece.pred, std::move(piece.args), std::move(*cv.inside)};
    if (ip.empty()) continue;
    Term value = ip.store.resolve(ip.args[ks[0]]);
    if (value.is_var()) value = Term::var(ip.store.find(value.idx));
    eq_pieces.push_back(EqPiece{std::move(ip), value});
  }

  // Interchangeability classes of the whole node justify evaluating one
  // block member and raising to the block size.
  auto classes = classify_constants(node.clauses, node.pieces, kb_.voc);
  const SortClasses &sc = classes[d.sort];

  // Decomposer roots per clause (recomputed; find_decomposer validated them).
  std::vector<uint32_t> dvar(node.clauses.size(), UINT32_MAX);
  for (size_t ci = 0; ci < node.clauses.size(); ++ci) {
    const Clause &c = node.clauses[ci];
    for (const Literal &l : c.lits)
      for (uint32_t k = 0; k < l.args.size() && dvar[ci] == UINT32_MAX; ++k)
        if (closure.count({l.pred, k})) {
          Term t = c.store.resolve(l.args[k]);
          if (!t.is_var()) throw std::logic_error("decomposer position holds a constant");
          dvar[ci] = c.store.find(t.idx);
        }
    if (dvar[ci] == UINT32_MAX)
      throw std::logic_error("clause without a decomposer variable");
  }

  for (const Bitset &block : sc.members) {
    // Blocks either lie inside or outside each domain wholesale; probe with
    // the first member.
    uint32_t c0 = uint32_t(block.first());
    Node sub;
    bool relevant = false;
    for (size_t ci = 0; ci < node.clauses.size(); ++ci) {
      if (!node.clauses[ci].store.live(dvar[ci]).test(c0)) continue;
      Clause copy = node.clauses[ci];
      copy.store.require_eq_const(dvar[ci], c0);
      if (!push_clause(sub.clauses, std::move(copy), kb_.voc)) {
        out.conflict = true;
        return out;
      }
      relevant = true;
    }
    for (const EqPiece &ep : eq_pieces) {
      if (ep.value.is_const()) {
        if (block.test(ep.value.idx)) {
          sub.pieces.push_back(ep.pat);
          relevant = true;
        }
        continue;
      }
      if (!ep.pat.store.live(ep.value.idx).test(c0)) continue;
      AtomPattern copy = ep.pat;
      copy.store.require_eq_const(ep.value.idx, c0);
      if (copy.empty()) continue;
      sub.pieces.push_back(std::move(copy));
      relevant = true;
    }
    if (!relevant) continue;
    out.blocks.emplace_back(std::move(sub), double(block.count()));
  }
  return out;
}

LogNum LiftedCounter::apply_decomposer(Node node, const Decomposer &d) {
  DecompBlocks prep = prepare_decomposer(node, d);
  if (prep.conflict) return LogNum::zero();
  LogNum total = prep.retired;
  for (auto &[sub, mult] : prep.blocks) {
    total *= count(std::move(sub)).pow(mult);
    if (total.is_zero()) return total;
  }
  return total;
}

LiftedCounter::SplitChoice LiftedCounter::choose_split(const Node &node) const {
  auto classes = classify_constants(node.clauses, node.pieces, kb_.voc);

  SplitChoice best;
  bool have = false;
  uint64_t best_n = 0;
  double best_mass = 0;
  uint64_t best_rank = 0;

  for (size_t pi = 0; pi < node.pieces.size(); ++pi) {
    const AtomPattern &piece = node.pieces[pi];
    std::set<uint32_t> roots;
    for (Term t : piece.args) {
      Term r = piece.store.resolve(t);
      if (r.is_var()) roots.insert(piece.store.find(r.idx));
    }
    SplitChoice cand;
    cand.piece = pi;
    uint64_t n = 1;
    if (roots.size() == 1) {
      uint32_t r = *roots.begin();
      const Bitset &live = piece.store.live(r);
      const SortClasses &sc = classes[piece.store.sort_of(r)];
      uint32_t cls = sc.class_of[uint32_t(live.first())];
      if (sc.members[cls] == live) {
        cand.binomial = true;
        cand.root = r;
        n = live.count();
      }
    }
    if (!cand.binomial) {
      // Ground split: fix the piece's first atom. A dedicated flag marks
      // success because a nullary atom's tuple is legitimately empty.
      struct Stop {};
      bool found = false;
      try {
        piece.store.enumerate([&](const std::vector<ConstId> &assignment) {
          for (Term t : piece.args)
            cand.tuple.push_back(t.is_const() ? ConstId(t.idx) : assignment[t.idx]);
          found = true;
          throw Stop{};
        });
      } catch (const Stop &) {
      }
      if (!found) continue;  // piece vanished; skip
    }
    // How much clause mass the split touches, for tie-breaking.
    double mass = 0;
    for (const Clause &c : node.clauses)
      for (const Literal &l : c.lits)
        if (l.pred == piece.pred && tuple_overlaps(c.store, l.args, piece)) {
          mass += c.num_groundings();
          break;
        }
    uint64_t rank = mix64(opt_.seed ^ pattern_hash(piece));
    if (!have || n > best_n ||
        (n == best_n && (mass > best_mass || (mass == best_mass && rank > best_rank)))) {
      have = true;
      best = std::move(cand);
      best_n = n;
      best_mass = mass;
      best_rank = rank;
    }
  }
  if (!have) {
#ifdef LIFTCOUNT_DEBUG_NOSPLIT
    fprintf(stderr, "NOSPLIT: %zu clauses, %zu pieces\n", node.clauses.size(),
            node.pieces.size());
    for (const Clause &c : node.clauses) {
      fprintf(stderr, "  clause:");
      for (const Literal &l : c.lits) {
        fprintf(stderr, " %s%u(", l.neg ? "!" : "", l.pred);
        for (Term t : l.args)
          fprintf(stderr, t.is_var() ? "v%u," : "C%u,", t.idx);
        fprintf(stderr, ")");
      }
      fprintf(stderr, " [%llu groundings]\n",
              (unsigned long long)c.num_groundings());
    }
    for (const AtomPattern &p : node.pieces) {
      fprintf(stderr, "  piece: %u(", p.pred);
      for (Term t : p.args) fprintf(stderr, t.is_var() ? "v%u," : "C%u,", t.idx);
      fprintf(stderr, ") count=%llu\n", (unsigned long long)p.count());
    }
#endif
    throw std::logic_error("no split available: pieces all empty");
  }
  return best;
}

LogNum LiftedCounter::apply_split(Node node, const SplitChoice &choice) {
  const AtomPattern piece = node.pieces[choice.piece];
  if (!choice.binomial) {
    AtomPattern atom = ground_pattern(kb_.voc, piece.pred, choice.tuple);
    LogNum total = LogNum::zero();
    for (bool value : {true, false}) {
      auto branch = assign(node, piece.pred, atom, value);
      if (!branch) continue;
      LogNum w = value ? kb_.w_true(piece.pred) : kb_.w_false(piece.pred);
      total += w * count(std::move(*branch));
    }
    return total;
  }

  const Bitset &live = piece.store.live(choice.root);
  uint32_t n = live.count();
  LogNum wt = kb_.w_true(piece.pred), wf = kb_.w_false(piece.pred);
  LogNum total = LogNum::zero();
  for (uint32_t t = 0; t <= n; ++t) {
    LogNum branch_w = log_binomial(n, t) * wt.pow(t) * wf.pow(double(n - t));
    if (branch_w.is_zero()) continue;
    Bitset true_set = live.take(t);
    std::optional<Node> branch = node;
    if (t > 0) {
      AtomPattern set = piece;
      set.store.restrict_live(choice.root, true_set);
      branch = assign(std::move(*branch), piece.pred, set, true);
    }
    if (branch && t < n) {
      AtomPattern set = piece;
      set.store.restrict_live(choice.root, live - true_set);
      branch = assign(std::move(*branch), piece.pred, set, false);
    }
    if (!branch) continue;
    total += branch_w * count(std::move(*branch));
  }
  return total;
}

LogNum LiftedCounter::unit_propagate(Node &node, bool &conflict) {
  LogNum factor = LogNum::one();
  conflict = false;
  bool progressed = true;
  while (progressed) {
    progressed = false;
    for (size_t ci = 0; ci < node.clauses.size(); ++ci) {
      if (node.clauses[ci].lits.size() != 1) continue;
      Clause unit = std::move(node.clauses[ci]);
      node.clauses.erase(node.clauses.begin() + ptrdiff_t(ci));
      const Literal &l = unit.lits[0];
      bool value = !l.neg;
      LogNum w = value ? kb_.w_true(l.pred) : kb_.w_false(l.pred);
      auto occ = project_overlap(unit.store, l.pred, l.args,
                                 full_pattern(kb_.voc, l.pred));
      for (const AtomPattern &o : occ) {
        factor *= w.pow(o.count());
        auto next = assign(std::move(node), l.pred, o, value);
        if (!next) {
          conflict = true;
          return factor;
        }
        node = std::move(*next);
      }
      progressed = true;
      break;
    }
  }
  return factor;
}

LogNum LiftedCounter::pure_literals(Node &node) {
  // Sound narrow case only: a predicate whose literals all share one
  // polarity and whose opposite weight is zero can be fixed outright (any
  // assignment using the opposite value weighs zero anyway).
  LogNum factor = LogNum::one();
  for (PredId p = 0; p < kb_.voc.num_preds(); ++p) {
    bool pos = false, neg = false;
    for (const Clause &c : node.clauses)
      for (const Literal &l : c.lits)
        if (l.pred == p) (l.neg ? neg : pos) = true;
    if (!pos && !neg) continue;
    if (pos && neg) continue;
    bool value = pos;
    LogNum opposite = value ? kb_.w_false(p) : kb_.w_true(p);
    if (!opposite.is_zero()) continue;
    LogNum w = value ? kb_.w_true(p) : kb_.w_false(p);
    std::vector<AtomPattern> sets;
    for (const AtomPattern &piece : node.pieces)
      if (piece.pred == p) sets.push_back(piece);
    for (const AtomPattern &set : sets) {
      factor *= w.pow(set.count());
      auto next = assign(std::move(node), p, set, value);
      if (!next) throw std::logic_error("pure literal assignment conflicted");
      node = std::move(*next);
    }
  }
  return factor;
}

void LiftedCounter::verify_node(const Node &node, LogNum claimed) {
  double atoms = 0;
  for (const AtomPattern &p : node.pieces) atoms += p.count();
  if (atoms > 22) return;  // enumeration check only for small states
  GroundAtomTable table;
  GroundKB ground = ground_node(node, kb_, table);
  CountOptions gopt;
  gopt.cache = false;
  gopt.seed = opt_.seed;
  CountStats gstats;
  LogNum truth = ground_wmc(ground, gopt, gstats);
  bool both_zero = truth.is_zero() && claimed.is_zero();
  if (!both_zero && !approx_rel(truth.lg, claimed.lg, 1e-9))
    throw std::logic_error("lifted node value diverges from its ground image");
}

LiftedCounter::Simplified LiftedCounter::simplify(Node &node) {
  Simplified s;
  for (const Clause &c : node.clauses)
    if (c.lits.empty()) {
      s.conflict = true;
      return s;
    }
  if (opt_.unit_prop) {
    bool conflict = false;
    s.factor *= unit_propagate(node, conflict);
    if (conflict) {
      s.conflict = true;
      return s;
    }
  }
  if (opt_.pure_literals) s.factor *= pure_literals(node);
  s.factor *= sweep(node);
  return s;
}

LogNum LiftedCounter::count(Node node) {
  ++stats_.calls;
  if (opt_.max_calls && stats_.calls > opt_.max_calls)
    throw ResourceLimit("recursion budget exhausted");
  stats_.peak_clauses = std::max(stats_.peak_clauses, uint64_t(node.clauses.size()));
  stats_.peak_pieces = std::max(stats_.peak_pieces, uint64_t(node.pieces.size()));

  Simplified s = simplify(node);
  if (s.conflict) return LogNum::zero();
  LogNum factor = s.factor;
  if (node.clauses.empty()) {
    // Sweep retires every piece once no clause remains.
    return factor;
  }

  auto comps = split_components(node);
  if (comps.size() > 1) {
    LogNum value = factor;
    for (Node &comp : comps) {
      value *= count(std::move(comp));
      if (value.is_zero()) return value;
    }
    return value;
  }
  node = std::move(comps[0]);

  std::string key;
  if (opt_.cache) {
    key = canonical_key(node.clauses, node.pieces, kb_.voc);
    if (const LogNum *hit = cache_.find(key)) {
      ++stats_.cache_hits;
      return factor * *hit;
    }
    ++stats_.cache_misses;
  }

  LogNum value;
#ifdef LIFTCOUNT_TRACE
  static bool trace = getenv("LIFTCOUNT_TRACE") != nullptr;
  if (trace) {
    fprintf(stderr, "call %llu: %zu clauses, %zu pieces:",
            (unsigned long long)stats_.calls, node.clauses.size(),
            node.pieces.size());
    for (const AtomPattern &p : node.pieces)
      fprintf(stderr, " %u*%llu", p.pred, (unsigned long long)p.count());
    fprintf(stderr, "\n");
  }
#endif
  if (auto d = find_decomposer(node)) {
#ifdef LIFTCOUNT_TRACE
    if (trace) fprintf(stderr, "  -> decomposer sort %u\n", d->sort);
#endif
    Node copy = node;
    value = apply_decomposer(std::move(copy), *d);
  } else {
    auto choice = choose_split(node);
#ifdef LIFTCOUNT_TRACE
    if (trace)
      fprintf(stderr, "  -> split pred %u %s\n", node.pieces[choice.piece].pred,
              choice.binomial ? "binomial" : "ground");
#endif
    Node copy = node;
    value = apply_split(std::move(copy), choice);
  }
  if (opt_.cache) cache_.insert(std::move(key), value);
  if (opt_.paranoid) verify_node(node, value);
  return factor * value;
}

LogNum lifted_wmc(const WCNF &kb, const LiftedOptions &opt, LiftedStats &stats) {
  LiftedCounter counter(kb, opt, stats);
  return counter.run();
}

}  // namespace liftcount
