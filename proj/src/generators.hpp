#pragma once

#include "pkb.hpp"

namespace liftcount {

// n unary predicates over one c-constant domain. m clauses, each a
// disjunction of s distinct predicates applied to a single shared universal
// variable, every literal negated on a fair coin flip; clause potentials
// drawn uniformly from (0,1). e distinct ground atoms become evidence with
// fair-coin truth values. Identical parameters and seed give byte-identical
// output (the generator rolls its own bounded draws; standard distribution
// objects vary across library implementations).
PKB random_pkb(uint32_t n, uint32_t m, uint32_t s, uint32_t e, uint32_t c, uint64_t seed);

// Two-clause advisor model over typed professor/student domains:
//   GoodProf(x) ^ GoodStudent(y) ^ Advises(x,y) => FutureProf(y)
//   Coauthor(x,y) => Advises(x,y)
// with potentials drawn uniformly from (0,1) and the given fraction of all
// ground atoms fixed as fair-coin evidence.
PKB link_prediction_pkb(uint32_t n_profs, uint32_t n_students, double evidence_fraction,
                        uint64_t seed);

}  // namespace liftcount
