#pragma once

#include "counter.hpp"
#include "lifted.hpp"
#include "sampler.hpp"
#include "textio.hpp"

namespace liftcount {

struct EngineOptions {
  bool lifting = true;
  bool cache = true;
  bool unit_prop = true;
  bool prune = false;         // drop formulas with no literal path to the query
  bool pure_literals = false;
  bool paranoid = false;      // cross-check every lifted node against grounding
  uint64_t seed = 0;
  size_t cache_mb = 256;
  uint64_t max_calls = 0;     // 0: unlimited
  uint64_t samples = 0;       // 0: exact
};

// The hard part of the knowledge base has no satisfying world.
struct InconsistentKb : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A sampled denominator came out all-zero; the ratio is undefined at this
// sample size.
struct InconclusiveEstimate : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EngineResult {
  std::optional<double> answer;     // probability, or linear total when finite
  std::optional<LogNum> z_num;      // conditioned total (query runs)
  std::optional<LogNum> z_den;      // unconditioned total
  std::optional<LogNum> stderr_num;
  std::optional<LogNum> stderr_den;
  uint64_t calls = 0;
  uint64_t cache_hits = 0;
  uint64_t cache_misses = 0;
  uint64_t peak_clauses = 0;
  uint64_t peak_pieces = 0;
  uint64_t samples = 0;
};

// Partition total of the knowledge base (with its evidence).
EngineResult compute_z(const PKB &pkb, const EngineOptions &opt);

// P(query | kb, evidence) as the ratio of the query-conditioned and plain
// totals. Exact mode throws InconsistentKb when the plain total is zero;
// sampling mode estimates both totals on coupled seeds and throws
// InconclusiveEstimate when every denominator draw was zero.
EngineResult compute_query(const PKB &pkb, const Query &query, const EngineOptions &opt);

// Standalone propositional count of a parsed weighted CNF.
EngineResult compute_wcnf(const GroundWcnf &g, const EngineOptions &opt);

// Full propositional image: every ground atom of every declared predicate,
// all clause groundings.
GroundKB ground_image(const WCNF &kb);

}  // namespace liftcount
