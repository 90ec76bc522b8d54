#include "canon.hpp"

#include <algorithm>
#include <map>

namespace liftcount {

namespace {

// One row per constant: everything that distinguishes it inside the node.
// Same row <=> interchangeable.
using Profile = std::vector<uint64_t>;

struct ProfileTable {
  std::vector<std::vector<Profile>> rows;  // [sort][constant]

  explicit ProfileTable(const Vocabulary &voc) {
    rows.resize(voc.num_sorts());
    for (SortId s = 0; s < voc.num_sorts(); ++s)
      rows[s].resize(voc.sort_size(s));
  }

  void add_domain(SortId s, const Bitset &live) {
    for (uint32_t c = 0; c < rows[s].size(); ++c)
      rows[s][c].push_back(live.test(c) ? 1 : 0);
  }
  void mark_explicit(SortId s, ConstId c) {
    // A unique tag: explicit constants cannot share a class with anything.
    rows[s][c].push_back(0x4000000000000000ull + c);
  }

  void add_store(const ConstraintStore &st) {
    for (uint32_t v = 0; v < st.num_vars(); ++v)
      if (st.find(v) == v) add_domain(st.sort_of(v), st.live(v));
  }
};

void scan_args(const ConstraintStore &st, PredId pred, const std::vector<Term> &args,
               const Vocabulary &voc, ProfileTable &table) {
  const auto &sorts = voc.pred(pred).arg_sorts;
  for (size_t i = 0; i < args.size(); ++i) {
    Term t = st.resolve(args[i]);
    if (t.is_const()) table.mark_explicit(sorts[i], t.idx);
  }
}

}  // namespace

std::vector<SortClasses> classify_constants(const std::vector<Clause> &clauses,
                                            const std::vector<AtomPattern> &pieces,
                                            const Vocabulary &voc) {
  ProfileTable table(voc);
  for (const Clause &c : clauses) {
    table.add_store(c.store);
    for (const Literal &l : c.lits) scan_args(c.store, l.pred, l.args, voc, table);
  }
  for (const AtomPattern &p : pieces) {
    table.add_store(p.store);
    scan_args(p.store, p.pred, p.args, voc, table);
  }

  std::vector<SortClasses> out(voc.num_sorts());
  for (SortId s = 0; s < voc.num_sorts(); ++s) {
    uint32_t n = voc.sort_size(s);
    out[s].class_of.assign(n, 0);
    // Scanning constants in order means the first member of each profile
    // creates the class: classes end up numbered by smallest member.
    std::map<Profile, uint32_t> ids;
    for (uint32_t c = 0; c < n; ++c) {
      auto [it, fresh] = ids.emplace(table.rows[s][c], uint32_t(ids.size()));
      if (fresh) out[s].members.emplace_back(n);
      out[s].class_of[c] = it->second;
      out[s].members[it->second].set(c);
    }
  }
  return out;
}

namespace {

struct KeyBuilder {
  const Vocabulary &voc;
  const std::vector<SortClasses> &classes;
  std::string out;
  std::map<std::pair<SortId, uint32_t>, uint32_t> label_of;  // (sort, class) -> label

  void raw(const char *s) { out += s; }
  void num(uint64_t v) {
    char buf[24];
    int n = std::snprintf(buf, sizeof buf, "%llx", (unsigned long long)v);
    out.append(buf, n);
  }
  // References a class, introducing "label=size" on first use so the key
  // pins down how many interchangeable constants back each label.
  void class_ref(SortId s, uint32_t cls) {
    auto [it, fresh] = label_of.emplace(std::make_pair(s, cls), uint32_t(label_of.size()));
    raw("q");
    num(it->second);
    if (fresh) {
      raw("=");
      num(classes[s].members[cls].count());
    }
  }
  void const_ref(SortId s, ConstId c) { class_ref(s, classes[s].class_of[c]); }
  void domain_ref(SortId s, const Bitset &live) {
    // Every domain is a union of whole classes; list them.
    std::vector<uint32_t> cls;
    for (uint32_t cid = 0; cid < classes[s].members.size(); ++cid)
      if (classes[s].members[cid].intersects(live)) cls.push_back(cid);
    raw("{");
    for (uint32_t cid : cls) class_ref(s, cid);
    raw("}");
  }
};

// Serializes one clause/piece with clause-local variable numbering. When
// `kb` is null, emits an order-only form: constants appear as their class
// size, which is renaming-invariant, so sorting by this string is stable
// across isomorphic nodes except for genuine ties.
template <typename EmitConst, typename EmitDomain>
std::string serialize_unit(const ConstraintStore &st,
                           const std::vector<std::pair<PredId, const Literal *>> &lits,
                           const std::vector<Term> *piece_args, PredId piece_pred,
                           const Vocabulary &voc, EmitConst &&emit_const,
                           EmitDomain &&emit_domain) {
  std::string s;
  std::map<uint32_t, uint32_t> local;  // store root -> de Bruijn id
  std::vector<uint32_t> roots;
  auto local_var = [&](uint32_t root) {
    auto [it, fresh] = local.emplace(root, uint32_t(local.size()));
    if (fresh) roots.push_back(root);
    return it->second;
  };
  auto emit_args = [&](PredId pred, const std::vector<Term> &args) {
    const auto &sorts = voc.pred(pred).arg_sorts;
    s += "(";
    for (size_t i = 0; i < args.size(); ++i) {
      Term t = st.resolve(args[i]);
      if (t.is_const()) {
        s += "c";
        s += emit_const(sorts[i], ConstId(t.idx));
      } else {
        s += "v" + std::to_string(local_var(st.find(t.idx)));
      }
    }
    s += ")";
  };
  if (piece_args) {
    s += "P" + std::to_string(piece_pred);
    emit_args(piece_pred, *piece_args);
  } else {
    for (const auto &[pred, lit] : lits) {
      s += lit->neg ? "~" : "+";
      s += std::to_string(pred);
      emit_args(pred, lit->args);
    }
  }
  s += "/";
  for (uint32_t root : roots) {
    s += "[";
    s += emit_domain(st.sort_of(root), st.live(root));
    s += "]";
  }
  // Inequality edges between named roots, sorted.
  std::vector<std::pair<uint32_t, uint32_t>> edges;
  for (auto [a, b] : st.neq_edges()) {
    uint32_t ra = st.find(a), rb = st.find(b);
    auto ia = local.find(ra), ib = local.find(rb);
    if (ia == local.end() || ib == local.end()) continue;  // dormant variable
    uint32_t x = ia->second, y = ib->second;
    if (x > y) std::swap(x, y);
    edges.emplace_back(x, y);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (auto [x, y] : edges) s += "!" + std::to_string(x) + "." + std::to_string(y);
  return s;
}

}  // namespace

std::string canonical_key(const std::vector<Clause> &clauses,
                          const std::vector<AtomPattern> &pieces, const Vocabulary &voc) {
  auto classes = classify_constants(clauses, pieces, voc);

  // Order-only serializations first: invariant strings used to sort units.
  auto order_const = [&](SortId s, ConstId c) {
    uint32_t cls = classes[s].class_of[c];
    return std::to_string(classes[s].members[cls].count()) + "s" + std::to_string(s);
  };
  auto order_domain = [&](SortId s, const Bitset &live) {
    std::vector<uint32_t> sizes;
    for (const Bitset &m : classes[s].members)
      if (m.intersects(live)) sizes.push_back(m.count());
    std::sort(sizes.begin(), sizes.end());
    std::string out = std::to_string(s) + ":";
    for (uint32_t sz : sizes) out += std::to_string(sz) + ",";
    return out;
  };

  auto unit_of_clause = [&](const Clause &c) {
    std::vector<std::pair<PredId, const Literal *>> lits;
    for (const Literal &l : c.lits) lits.emplace_back(l.pred, &l);
    return lits;
  };

  std::vector<std::pair<std::string, size_t>> clause_order, piece_order;
  for (size_t i = 0; i < clauses.size(); ++i)
    clause_order.emplace_back(serialize_unit(clauses[i].store, unit_of_clause(clauses[i]),
                                             nullptr, 0, voc, order_const, order_domain),
                              i);
  for (size_t i = 0; i < pieces.size(); ++i)
    piece_order.emplace_back(serialize_unit(pieces[i].store, {}, &pieces[i].args,
                                            pieces[i].pred, voc, order_const, order_domain),
                             i);
  std::sort(clause_order.begin(), clause_order.end());
  std::sort(piece_order.begin(), piece_order.end());

  // Final pass: stream-wide class labels introduced in first-use order.
  KeyBuilder kb{voc, classes, {}, {}};
  auto emit_const = [&](SortId s, ConstId c) {
    std::string before = std::move(kb.out);
    kb.out.clear();
    kb.const_ref(s, c);
    std::string ref = std::move(kb.out);
    kb.out = std::move(before);
    return ref;
  };
  auto emit_domain = [&](SortId s, const Bitset &live) {
    std::string before = std::move(kb.out);
    kb.out.clear();
    kb.domain_ref(s, live);
    std::string ref = std::move(kb.out);
    kb.out = std::move(before);
    return ref;
  };
  std::string out;
  for (auto &[key, i] : clause_order) {
    out += serialize_unit(clauses[i].store, unit_of_clause(clauses[i]), nullptr, 0, voc,
                          emit_const, emit_domain);
    out += ";";
  }
  out += "|";
  for (auto &[key, i] : piece_order) {
    out += serialize_unit(pieces[i].store, {}, &pieces[i].args, pieces[i].pred, voc,
                          emit_const, emit_domain);
    out += ";";
  }
  return out;
}

}  // namespace liftcount
