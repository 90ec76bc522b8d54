#pragma once

#include <cstdint>
#include <vector>

#include "symbols.hpp"
#include "util.hpp"

namespace liftcount {

// A term is a variable slot (index into the owning store) or a constant of
// the sort implied by its argument position.
struct Term {
  enum Kind : uint8_t { Var, Const } kind;
  uint32_t idx;

  static Term var(uint32_t v) { return Term{Var, v}; }
  static Term constant(ConstId c) { return Term{Const, c}; }
  bool is_var() const { return kind == Var; }
  bool is_const() const { return kind == Const; }
  bool operator==(const Term &o) const { return kind == o.kind && idx == o.idx; }
  bool operator<(const Term &o) const {
    return kind != o.kind ? kind < o.kind : idx < o.idx;
  }
};

// Substitution constraints over one clause's variables: equalities are merged
// eagerly (union-find), x != Constant lives in the per-variable domain bitset,
// x != y is kept symbolically. Stores are plain values; branches of the
// search copy the ones they refine.
class ConstraintStore {
 public:
  ConstraintStore() = default;

  uint32_t add_var(SortId sort, uint32_t domain_size) {
    vars_.push_back(VarEntry{sort, uint32_t(vars_.size()), Bitset(domain_size, true)});
    return uint32_t(vars_.size() - 1);
  }
  uint32_t add_var(SortId sort, Bitset live) {
    vars_.push_back(VarEntry{sort, uint32_t(vars_.size()), std::move(live)});
    if (vars_.back().live.empty()) consistent_ = false;
    return uint32_t(vars_.size() - 1);
  }

  size_t num_vars() const { return vars_.size(); }
  SortId sort_of(uint32_t v) const { return vars_[v].sort; }

  uint32_t find(uint32_t v) const {
    while (vars_[v].parent != v) v = vars_[v].parent;
    return v;
  }

  bool consistent() const { return consistent_; }
  void mark_inconsistent() { consistent_ = false; }

  const Bitset &live(uint32_t v) const { return vars_[find(v)].live; }

  // Mutators return the store's consistency after the update.
  bool require_eq(uint32_t u, uint32_t v);
  bool require_eq_const(uint32_t v, ConstId c);
  bool require_neq(uint32_t u, uint32_t v);
  bool require_neq_const(uint32_t v, ConstId c);
  bool restrict_live(uint32_t v, const Bitset &allowed);

  // Re-establishes forward checking: no surviving x != y edge touches a
  // singleton domain, satisfied edges are dropped. Returns consistency.
  bool propagate();

  // Resolves a term to its representative: constants stay, variables follow
  // union-find and collapse to a constant when their domain is a singleton.
  Term resolve(Term t) const;

  const std::vector<std::pair<uint32_t, uint32_t>> &neq_edges() const { return neq_; }
  bool has_neq(uint32_t u, uint32_t v) const;

  // Number of groundings of the atom args (a tuple of terms over this store)
  // that extend to a full consistent assignment of all store variables.
  double count_groundings(const std::vector<Term> &args) const;
  // Number of full variable assignments consistent with the store.
  double count_assignments() const;

  // Enumerates all consistent full assignments (value per variable index).
  // Intended for small stores: grounding, oracles, tests.
  template <typename F>
  void enumerate(F &&f) const;

  // Groups the constants of `domain_sort` by their membership pattern across
  // the listed variables' live domains. Constants absent from every listed
  // domain are omitted. Blocks come back in constant order of their smallest
  // member.
  std::vector<Bitset> signature_blocks(const std::vector<uint32_t> &vars,
                                       SortId domain_sort, uint32_t domain_size) const;

  uint64_t content_hash() const;

 private:
  struct VarEntry {
    SortId sort;
    uint32_t parent;
    Bitset live;  // meaningful at representatives only
  };

  bool drop_value(uint32_t root, ConstId c);
  void normalize_edges();

  std::vector<VarEntry> vars_;
  std::vector<std::pair<uint32_t, uint32_t>> neq_;
  bool consistent_ = true;
};

template <typename F>
void ConstraintStore::enumerate(F &&f) const {
  if (!consistent_) return;
  std::vector<uint32_t> roots;
  for (uint32_t v = 0; v < vars_.size(); ++v)
    if (find(v) == v) roots.push_back(v);
  std::vector<ConstId> value(vars_.size(), 0);
  std::vector<ConstId> assignment(vars_.size(), 0);

  auto rec = [&](auto &&self, size_t i) -> void {
    if (i == roots.size()) {
      for (uint32_t v = 0; v < vars_.size(); ++v) assignment[v] = value[find(v)];
      f(assignment);
      return;
    }
    uint32_t r = roots[i];
    live(r).for_each([&](uint32_t c) {
      for (auto [a, b] : neq_) {
        uint32_t other = UINT32_MAX;
        if (find(a) == r) other = find(b);
        if (find(b) == r) other = find(a);
        if (other == UINT32_MAX) continue;
        // only check partners already assigned (appear earlier in roots)
        for (size_t j = 0; j < i; ++j)
          if (roots[j] == other && value[other] == c) return;
      }
      value[r] = c;
      self(self, i + 1);
    });
  };
  rec(rec, 0);
}

}  // namespace liftcount
