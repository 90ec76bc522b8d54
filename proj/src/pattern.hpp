#pragma once

#include <optional>
#include <vector>

#include "constraints.hpp"
#include "symbols.hpp"

namespace liftcount {

// A set of ground atoms of one predicate: an argument tuple over a private
// constraint store. Used for atom-universe bookkeeping, split sets, and
// reachability patterns.
struct AtomPattern {
  PredId pred = 0;
  std::vector<Term> args;   // variables index into store
  ConstraintStore store;    // owns exactly the pattern's variables

  double count() const { return store.count_groundings(args); }
  bool empty() const { return count() == 0; }
};

// One conjunct of the constraint "this tuple lies inside that pattern",
// expressed over the host store's variables. Negating each conjunct in turn
// carves the complement into disjoint pieces.
struct Restriction {
  enum Kind : uint8_t { EqVars, NeqVars, Live } kind;
  uint32_t a = 0, b = 0;  // variable roots in the host store
  Bitset live;            // Kind::Live: allowed values for a

  static Restriction eq(uint32_t u, uint32_t v) { return {EqVars, u, v, {}}; }
  static Restriction neq(uint32_t u, uint32_t v) { return {NeqVars, u, v, {}}; }
  static Restriction domain(uint32_t v, Bitset allowed) {
    return {Live, v, 0, std::move(allowed)};
  }
};

// Applies r (or its negation) to the store. Returns store consistency.
bool apply_restriction(ConstraintStore &s, const Restriction &r);
bool apply_negation(ConstraintStore &s, const Restriction &r);

// Conjunction over `store` expressing that the grounding of `args` lies in
// pattern `p`. nullopt when the overlap is statically empty. The restrictions
// reproduce exactly the merged store obtained by unifying args with p.
std::optional<std::vector<Restriction>> match_restrictions(const ConstraintStore &store,
                                                           const std::vector<Term> &args,
                                                           const AtomPattern &p);

// Splits `store` into the part satisfying all restrictions (first element,
// if consistent) and disjoint complement parts (one per negated restriction).
struct Carve {
  std::optional<ConstraintStore> inside;
  std::vector<ConstraintStore> outside;
};
Carve carve(const ConstraintStore &store, const std::vector<Restriction> &rs);

// Exact projection of (args over store) intersected with pattern p, returned
// as disjoint patterns (usually one). A tuple is included precisely when it
// extends to a full consistent assignment of the store. Falls back to
// per-tuple enumeration when inequality edges couple the tuple tightly to
// outside variables.
std::vector<AtomPattern> project_overlap(const ConstraintStore &store, PredId pred,
                                         const std::vector<Term> &args,
                                         const AtomPattern &p);

// Intersection as a pattern; nullopt when disjoint.
std::optional<AtomPattern> intersect_patterns(const AtomPattern &a, const AtomPattern &b);

// a minus b, as disjoint patterns.
std::vector<AtomPattern> subtract_pattern(const AtomPattern &a, const AtomPattern &b);

bool patterns_overlap(const AtomPattern &a, const AtomPattern &b);

// Whether the grounding set of `args` over `store` meets pattern p.
bool tuple_overlaps(const ConstraintStore &store, const std::vector<Term> &args,
                    const AtomPattern &p);

// Pattern covering every grounding of the predicate.
AtomPattern full_pattern(const Vocabulary &voc, PredId pred);

// Pattern for one ground atom.
AtomPattern ground_pattern(const Vocabulary &voc, PredId pred,
                           const std::vector<ConstId> &consts);

uint64_t pattern_hash(const AtomPattern &p);

}  // namespace liftcount
