#pragma once

#include <string>
#include <vector>

#include "logic.hpp"

namespace liftcount {

// Interchangeability classes of one sort's constants within a node: two
// constants land in the same class only if they belong to exactly the same
// variable domains (across all clause and piece stores) and neither appears
// explicitly as an argument. Swapping two same-class constants then maps the
// node onto itself, so counts restricted to same-size subsets of a class are
// equal. Every variable domain is a union of whole classes.
struct SortClasses {
  std::vector<uint32_t> class_of;  // per constant of the sort
  std::vector<Bitset> members;     // per class, ordered by smallest member
};

std::vector<SortClasses> classify_constants(const std::vector<Clause> &clauses,
                                            const std::vector<AtomPattern> &pieces,
                                            const Vocabulary &voc);

// Serialization of a node that ignores the identity of constants within an
// interchangeability class (domains become class-label lists with sizes,
// explicit constants are singleton classes). Equal keys imply isomorphic
// nodes and therefore equal counts; isomorphic nodes may still serialize
// differently, which costs a cache miss but never a wrong value.
std::string canonical_key(const std::vector<Clause> &clauses,
                          const std::vector<AtomPattern> &pieces, const Vocabulary &voc);

}  // namespace liftcount
