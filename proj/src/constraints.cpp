#include "constraints.hpp"

#include <algorithm>
#include <map>

namespace liftcount {

bool ConstraintStore::require_eq(uint32_t u, uint32_t v) {
  if (!consistent_) return false;
  u = find(u);
  v = find(v);
  if (u == v) return true;
  if (has_neq(u, v)) {
    consistent_ = false;
    return false;
  }
  if (vars_[u].sort != vars_[v].sort) {
    consistent_ = false;  // cross-sort equality has no groundings
    return false;
  }
  // union by keeping the smaller index as representative
  if (u > v) std::swap(u, v);
  vars_[v].parent = u;
  vars_[u].live &= vars_[v].live;
  if (vars_[u].live.empty()) consistent_ = false;
  normalize_edges();
  return consistent_ && propagate();
}

bool ConstraintStore::require_eq_const(uint32_t v, ConstId c) {
  if (!consistent_) return false;
  v = find(v);
  if (c >= vars_[v].live.size() || !vars_[v].live.test(c)) {
    consistent_ = false;
    return false;
  }
  Bitset single(vars_[v].live.size());
  single.set(c);
  vars_[v].live = std::move(single);
  return propagate();
}

bool ConstraintStore::require_neq(uint32_t u, uint32_t v) {
  if (!consistent_) return false;
  u = find(u);
  v = find(v);
  if (u == v) {
    consistent_ = false;
    return false;
  }
  if (vars_[u].sort != vars_[v].sort) return true;  // trivially satisfied
  if (u > v) std::swap(u, v);
  if (!has_neq(u, v)) neq_.emplace_back(u, v);
  return propagate();
}

bool ConstraintStore::require_neq_const(uint32_t v, ConstId c) {
  if (!consistent_) return false;
  v = find(v);
  return drop_value(v, c) && propagate();
}

bool ConstraintStore::restrict_live(uint32_t v, const Bitset &allowed) {
  if (!consistent_) return false;
  v = find(v);
  vars_[v].live &= allowed;
  if (vars_[v].live.empty()) consistent_ = false;
  return consistent_ && propagate();
}

bool ConstraintStore::drop_value(uint32_t root, ConstId c) {
  if (c < vars_[root].live.size() && vars_[root].live.test(c)) {
    vars_[root].live.reset(c);
    if (vars_[root].live.empty()) {
      consistent_ = false;
      return false;
    }
  }
  return true;
}

bool ConstraintStore::has_neq(uint32_t u, uint32_t v) const {
  u = find(u);
  v = find(v);
  for (auto [a, b] : neq_) {
    uint32_t ra = find(a), rb = find(b);
    if ((ra == u && rb == v) || (ra == v && rb == u)) return true;
  }
  return false;
}

void ConstraintStore::normalize_edges() {
  std::vector<std::pair<uint32_t, uint32_t>> out;
  for (auto [a, b] : neq_) {
    uint32_t ra = find(a), rb = find(b);
    if (ra == rb) {
      consistent_ = false;
      return;
    }
    if (ra > rb) std::swap(ra, rb);
    auto e = std::make_pair(ra, rb);
    if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
  }
  neq_ = std::move(out);
}

bool ConstraintStore::propagate() {
  if (!consistent_) return false;
  normalize_edges();
  if (!consistent_) return false;
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < neq_.size();) {
      auto [a, b] = neq_[i];
      uint32_t ra = find(a), rb = find(b);
      if (ra == rb) {
        consistent_ = false;
        return false;
      }
      const Bitset &la = vars_[ra].live;
      const Bitset &lb = vars_[rb].live;
      if (!la.intersects(lb)) {  // edge can never be violated
        neq_.erase(neq_.begin() + long(i));
        changed = true;
        continue;
      }
      if (la.count() == 1) {
        if (!drop_value(rb, ConstId(la.first()))) return false;
        neq_.erase(neq_.begin() + long(i));
        changed = true;
        continue;
      }
      if (lb.count() == 1) {
        if (!drop_value(ra, ConstId(lb.first()))) return false;
        neq_.erase(neq_.begin() + long(i));
        changed = true;
        continue;
      }
      ++i;
    }
  }
  for (uint32_t v = 0; v < vars_.size(); ++v)
    if (find(v) == v && vars_[v].live.empty()) {
      consistent_ = false;
      return false;
    }
  return true;
}

Term ConstraintStore::resolve(Term t) const {
  if (t.is_const()) return t;
  uint32_t r = find(t.idx);
  const Bitset &l = vars_[r].live;
  if (l.count() == 1) return Term::constant(ConstId(l.first()));
  return Term::var(r);
}

double ConstraintStore::count_assignments() const {
  std::vector<Term> args;
  std::map<uint32_t, bool> seen;
  for (uint32_t v = 0; v < vars_.size(); ++v) {
    uint32_t r = find(v);
    if (!seen.count(r)) {
      seen[r] = true;
      args.push_back(Term::var(r));
    }
  }
  return count_groundings(args);
}

double ConstraintStore::count_groundings(const std::vector<Term> &args) const {
  if (!consistent_) return 0;

  // Distinct variable roots named by the tuple.
  std::vector<uint32_t> internal;
  for (Term t : args) {
    if (t.is_const()) continue;
    uint32_t r = find(t.idx);
    if (std::find(internal.begin(), internal.end(), r) == internal.end()) internal.push_back(r);
  }
  auto is_internal = [&](uint32_t r) {
    return std::find(internal.begin(), internal.end(), r) != internal.end();
  };

  // Edges among the tuple's variables enter the count; edges reaching outside
  // only matter through extension feasibility.
  std::vector<std::pair<uint32_t, uint32_t>> inner;
  bool tight_outside = false;
  std::map<uint32_t, uint32_t> degree;
  for (auto [a, b] : neq_) {
    uint32_t ra = find(a), rb = find(b);
    degree[ra]++;
    degree[rb]++;
  }
  for (auto [a, b] : neq_) {
    uint32_t ra = find(a), rb = find(b);
    bool ia = is_internal(ra), ib = is_internal(rb);
    if (ia && ib)
      inner.emplace_back(ra, rb);
    else {
      uint32_t outside = ia ? rb : ra;
      // After propagation every edge endpoint has >= 2 live values; a greedy
      // extension of the outside variables exists whenever each has more
      // values than neq partners.
      if (vars_[outside].live.count() <= degree[outside]) tight_outside = true;
    }
  }

  if (!tight_outside) {
    // Inclusion-exclusion over violated inequality edges: forcing a set of
    // edges "equal" merges their endpoints.
    double total = 0;
    size_t m = inner.size();
    assert(m < 20);
    for (size_t mask = 0; mask < (size_t(1) << m); ++mask) {
      std::map<uint32_t, uint32_t> rep;
      for (uint32_t r : internal) rep[r] = r;
      auto findr = [&](uint32_t x) {
        while (rep[x] != x) x = rep[x];
        return x;
      };
      for (size_t e = 0; e < m; ++e)
        if (mask & (size_t(1) << e)) {
          uint32_t a = findr(inner[e].first), b = findr(inner[e].second);
          if (a != b) rep[b] = a;
        }
      std::map<uint32_t, Bitset> classes;
      for (uint32_t r : internal) {
        uint32_t c = findr(r);
        auto it = classes.find(c);
        if (it == classes.end())
          classes.emplace(c, vars_[r].live);
        else
          it->second &= vars_[r].live;
      }
      double term = 1;
      for (auto &[c, l] : classes) term *= double(l.count());
      total += (__builtin_popcountll(mask) % 2 ? -1.0 : 1.0) * term;
    }
    return std::max(total, 0.0);
  }

  // Rare fallback: some outside variable is tightly constrained, so count the
  // distinct internal tuples among full consistent assignments.
  std::vector<std::vector<ConstId>> seen;
  enumerate([&](const std::vector<ConstId> &assignment) {
    std::vector<ConstId> key;
    key.reserve(internal.size());
    for (uint32_t r : internal) key.push_back(assignment[r]);
    if (std::find(seen.begin(), seen.end(), key) == seen.end()) seen.push_back(key);
  });
  return double(seen.size());
}

std::vector<Bitset> ConstraintStore::signature_blocks(const std::vector<uint32_t> &vars,
                                                      SortId domain_sort,
                                                      uint32_t domain_size) const {
  std::vector<std::vector<bool>> sig(domain_size);
  for (uint32_t c = 0; c < domain_size; ++c) {
    sig[c].reserve(vars.size());
    for (uint32_t v : vars) {
      uint32_t r = find(v);
      bool in = vars_[r].sort == domain_sort && c < vars_[r].live.size() &&
                vars_[r].live.test(c);
      sig[c].push_back(in);
    }
  }
  std::vector<Bitset> blocks;
  std::vector<std::vector<bool>> block_sig;
  for (uint32_t c = 0; c < domain_size; ++c) {
    bool anywhere = std::find(sig[c].begin(), sig[c].end(), true) != sig[c].end();
    if (!anywhere) continue;
    auto it = std::find(block_sig.begin(), block_sig.end(), sig[c]);
    if (it == block_sig.end()) {
      block_sig.push_back(sig[c]);
      blocks.emplace_back(domain_size);
      blocks.back().set(c);
    } else {
      blocks[size_t(it - block_sig.begin())].set(c);
    }
  }
  return blocks;
}

uint64_t ConstraintStore::content_hash() const {
  uint64_t h = hash_combine(0x5eed, vars_.size());
  for (uint32_t v = 0; v < vars_.size(); ++v) {
    uint32_t r = find(v);
    h = hash_combine(h, r);
    h = hash_combine(h, vars_[v].sort);
    if (r == v) h = vars_[v].live.hash(h);
  }
  for (auto [a, b] : neq_) h = hash_combine(h, (uint64_t(find(a)) << 32) | find(b));
  return hash_combine(h, consistent_ ? 1 : 0);
}

}  // namespace liftcount
