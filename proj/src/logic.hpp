#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pattern.hpp"

namespace liftcount {

struct Literal {
  PredId pred = 0;
  bool neg = false;
  std::vector<Term> args;

  bool same_atom(const Literal &o) const { return pred == o.pred && args == o.args; }
  bool operator==(const Literal &o) const { return neg == o.neg && same_atom(o); }
  bool operator<(const Literal &o) const {
    if (pred != o.pred) return pred < o.pred;
    if (neg != o.neg) return neg < o.neg;
    return args < o.args;
  }
};

// A first-order clause: literals over a private constraint store. Clauses are
// standardized apart by construction since each owns its variables.
struct Clause {
  ConstraintStore store;
  std::vector<Literal> lits;

  // Resolves arguments through the store, drops duplicate literals, sorts.
  // Returns false when the clause is a tautology (complementary identical
  // literals) and should be discarded.
  bool normalize();

  double num_groundings() const;
  bool vacuous() const { return !store.consistent() || num_groundings() == 0; }
};

// Tautological clauses are dropped outright: the atom universe is derived
// from predicate declarations, not clause occurrences, so nothing is lost.
struct CNF {
  std::vector<Clause> clauses;
};

// Quantifier-free formula tree; free variables read as universally
// quantified. Exists is reserved: conversion rejects it.
struct Formula {
  enum Kind : uint8_t { Atom, Not, And, Or, Implies, Iff, Exists } kind = Atom;
  PredId pred = 0;
  std::vector<Term> args;  // Atom only; variables index the formula's table
  std::vector<Formula> kids;

  static Formula atom(PredId p, std::vector<Term> a) {
    Formula f;
    f.kind = Atom;
    f.pred = p;
    f.args = std::move(a);
    return f;
  }
  static Formula unary(Kind k, Formula c) {
    Formula f;
    f.kind = k;
    f.kids.push_back(std::move(c));
    return f;
  }
  static Formula binary(Kind k, Formula l, Formula r) {
    Formula f;
    f.kind = k;
    f.kids.push_back(std::move(l));
    f.kids.push_back(std::move(r));
    return f;
  }
};

struct FormulaVar {
  std::string name;
  SortId sort = 0;
};

// Clausal form by negation normal form plus distribution (no auxiliary
// tautology-preserving encodings: model counts must be preserved exactly).
CNF cnf_convert(const Formula &f, const std::vector<FormulaVar> &vars, const Vocabulary &voc);

// Most general unifier of two atom occurrences under their constraint
// stores, returned as the atom set both occurrences cover; nullopt when no
// common ground instance exists.
std::optional<AtomPattern> unify_atoms(const Literal &a, const ConstraintStore &sa,
                                       const Literal &b, const ConstraintStore &sb);

// Interning of ground atoms for the propositional engine and oracles.
class GroundAtomTable {
 public:
  uint32_t intern(PredId pred, const std::vector<ConstId> &consts);
  uint32_t size() const { return uint32_t(keys_.size()); }
  PredId pred_of(uint32_t id) const { return PredId(keys_[id].front()); }
  const std::vector<uint32_t> &key(uint32_t id) const { return keys_[id]; }
  std::string name(const Vocabulary &voc, uint32_t id) const;
  std::optional<uint32_t> find(PredId pred, const std::vector<ConstId> &consts) const;

 private:
  std::map<std::vector<uint32_t>, uint32_t> ids_;
  std::vector<std::vector<uint32_t>> keys_;
};

// Ground clauses as sorted signed atom ids: +(id+1) positive, -(id+1)
// negated. Duplicate ground clauses collapse; ground tautologies are dropped
// but their atoms are reported.
struct GroundClauseSink {
  std::vector<std::vector<int32_t>> clauses;
  std::vector<uint32_t> atoms_seen;  // every atom mentioned, tautologies included
};
void ground_clause(const Clause &c, GroundAtomTable &table, GroundClauseSink &sink);

}  // namespace liftcount
