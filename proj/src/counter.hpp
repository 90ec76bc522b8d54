#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "cache.hpp"
#include "util.hpp"

namespace liftcount {

struct ResourceLimit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Propositional weighted counting input. Literals are signed atom ids,
// +(atom+1) / -(atom+1), sorted within a clause by atom then sign. The sum
// ranges over all assignments of atoms 0..weights.size()-1: atoms that occur
// in no clause contribute (true weight + false weight) factors.
struct GroundKB {
  std::vector<std::vector<int32_t>> clauses;
  std::vector<std::pair<LogNum, LogNum>> weights;
};

struct CountOptions {
  bool cache = true;
  bool unit_prop = true;
  uint64_t seed = 0;
  size_t cache_bytes = size_t(256) << 20;
  uint64_t max_calls = 0;  // 0: unlimited
};

struct CountStats {
  uint64_t calls = 0;
  uint64_t cache_hits = 0;
  uint64_t cache_misses = 0;
};

// Sum over satisfying assignments of per-atom weight products. Recursion:
// unit propagation, then independent-component product, then a two-way split
// on the atom in the most clauses. Atoms that drop out of every live clause
// retire immediately with factor (w_true + w_false). Splits tie-break by a
// hash of the node content and the seed, never by an evolving generator, so
// results are identical with the cache on or off.
LogNum ground_wmc(const GroundKB &kb, const CountOptions &opt, CountStats &stats);

// Internals exposed for direct exercise in tests.
namespace ground_detail {

using ClauseSet = std::vector<std::vector<int32_t>>;

// Makes lit true: satisfied clauses drop, the complementary literal is
// erased. Atoms that stop occurring anywhere (other than lit's own) append
// to `vanished`. nullopt when some clause becomes empty.
std::optional<ClauseSet> condition(const ClauseSet &cs, int32_t lit,
                                   std::vector<uint32_t> &vanished);

// Partition into atom-disjoint clause groups, each sorted, deterministic order.
std::vector<ClauseSet> split_components(const ClauseSet &cs);

// Atom occurring in the most clauses; ties broken by hashing with tie_seed.
uint32_t choose_split_atom(const ClauseSet &cs, uint64_t tie_seed);

std::string serialize(const ClauseSet &cs);

}  // namespace ground_detail

}  // namespace liftcount
