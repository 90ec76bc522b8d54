#pragma once

#include <optional>

#include "cache.hpp"
#include "canon.hpp"
#include "counter.hpp"
#include "pkb.hpp"

namespace liftcount {

// One search state: hard first-order clauses still to satisfy plus disjoint
// atom sets ("pieces") whose truth values are undecided. The pieces cover
// every ground atom the clauses can reach and may extend beyond them; a
// piece no clause can touch retires with factor (w_true + w_false)^size.
struct Node {
  std::vector<Clause> clauses;
  std::vector<AtomPattern> pieces;
};

struct LiftedOptions {
  bool cache = true;
  bool unit_prop = true;
  bool pure_literals = false;
  uint64_t seed = 0;
  size_t cache_bytes = size_t(256) << 20;
  uint64_t max_calls = 0;  // 0: unlimited
  bool paranoid = false;   // cross-check every node against the ground engine
};

struct LiftedStats {
  uint64_t calls = 0;
  uint64_t cache_hits = 0;
  uint64_t cache_misses = 0;
  uint64_t peak_clauses = 0;
  uint64_t peak_pieces = 0;
};

// First-order weighted counting by recursive decomposition. Within a node:
// unit clauses propagate set-at-a-time, untouched pieces retire, the node
// splits into unification-disconnected components, domains decompose through
// a variable occurring in every literal of every clause, and otherwise the
// search branches: over the number of true atoms in a symmetric
// single-variable piece (binomial), or on one ground atom as a last resort.
// All tie-breaking hashes the node content with the seed, so cache settings
// never change the result bits.
class LiftedCounter {
 public:
  LiftedCounter(const WCNF &kb, const LiftedOptions &opt, LiftedStats &stats);

  // Root construction plus full count. Zero when the hard part is
  // unsatisfiable.
  LogNum run();

  // Root node after batching all ground unit clauses (evidence); the
  // returned factor multiplies count(node). Zero factor: contradiction.
  std::pair<Node, LogNum> root();

  LogNum count(Node node);

  // --- individual steps, used by the samplers and exercised in tests ---

  // Retires pieces that no clause literal can reach. Returns their factor.
  LogNum sweep(Node &node);

  // Unification-connectivity components (pieces carry their clauses).
  std::vector<Node> split_components(const Node &node);

  // Fixes every atom of `set` (a subset of the pred's pieces) to `value`:
  // clauses shatter and simplify, pieces shrink. nullopt when some clause
  // instance becomes unsatisfiable. The caller pays weight^|set|.
  std::optional<Node> assign(Node node, PredId pred, const AtomPattern &set, bool value);

  // A set of argument positions such that in every clause one variable fills
  // all of them and occurs in every literal: substituting that variable
  // splits the node into one independent copy per constant.
  struct Decomposer {
    std::vector<std::pair<PredId, uint32_t>> positions;
    SortId sort = 0;
  };
  std::optional<Decomposer> find_decomposer(const Node &node) const;

  struct SplitChoice {
    size_t piece = 0;   // index into node.pieces
    bool binomial = false;
    uint32_t root = 0;              // driving variable root (binomial)
    std::vector<ConstId> tuple;     // the atom to branch on (ground split)
  };
  // Requires a node that passed the earlier steps (pieces nonempty).
  SplitChoice choose_split(const Node &node) const;

  // Deterministic per-node simplification: empty-clause detection, unit
  // propagation, optional pure-literal fixing, sweep. The returned factor
  // multiplies whatever the rest of the node counts to.
  struct Simplified {
    LogNum factor = LogNum::one();
    bool conflict = false;
  };
  Simplified simplify(Node &node);

  // Decomposition worked out but not yet evaluated: one representative
  // subproblem per class of interchangeable constants, to be raised to the
  // class size. `retired` covers piece atoms no clause can reach.
  struct DecompBlocks {
    LogNum retired = LogNum::one();
    bool conflict = false;
    std::vector<std::pair<Node, double>> blocks;  // subnode, multiplicity
  };
  DecompBlocks prepare_decomposer(const Node &node, const Decomposer &d);

  LogNum retire_weight(PredId p) const { return retire_[p]; }
  const WCNF &kb() const { return kb_; }
  const LiftedOptions &options() const { return opt_; }

 private:
  LogNum unit_propagate(Node &node, bool &conflict);
  LogNum pure_literals(Node &node);
  LogNum apply_decomposer(Node node, const Decomposer &d);
  LogNum apply_split(Node node, const SplitChoice &choice);
  void verify_node(const Node &node, LogNum claimed);

  const WCNF &kb_;
  const LiftedOptions &opt_;
  LiftedStats &stats_;
  std::vector<LogNum> retire_;  // per pred: w_true + w_false
  LruCache<LogNum> cache_;
};

LogNum lifted_wmc(const WCNF &kb, const LiftedOptions &opt, LiftedStats &stats);

// Disjoint product-form patterns covering exactly the given distinct ground
// tuples; groups values sharing identical remainder sets, so large evidence
// grids compress far below one pattern per tuple.
std::vector<AtomPattern> pack_tuples(const Vocabulary &voc, PredId pred,
                                     std::vector<std::vector<ConstId>> tuples);

// Simplification applied whenever a clause is created or modified: resolves
// arguments, drops duplicate literals, eliminates variables that no literal
// uses (sets of ground clauses collapse duplicates, so such variables only
// multiply copies), and discards tautologies and groundless clauses.
// Inequality edges on an eliminated variable occasionally force a case split
// over its values, hence the vector. Appends to `out`; false when a clause
// instance has no literals left (unsatisfiable node).
bool push_clause(std::vector<Clause> &out, Clause c, const Vocabulary &voc);

// Ground image of a node: clauses grounded, universe = the pieces' atoms.
GroundKB ground_node(const Node &node, const WCNF &kb, GroundAtomTable &table);

}  // namespace liftcount
