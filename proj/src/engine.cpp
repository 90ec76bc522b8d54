#include "engine.hpp"

#include <algorithm>
#include <cmath>

namespace liftcount {

namespace {

LiftedOptions lifted_options(const EngineOptions &opt) {
  LiftedOptions o;
  o.cache = opt.cache;
  o.unit_prop = opt.unit_prop;
  o.pure_literals = opt.pure_literals;
  o.seed = opt.seed;
  o.cache_bytes = opt.cache_mb << 20;
  o.max_calls = opt.max_calls;
  o.paranoid = opt.paranoid;
  return o;
}

CountOptions ground_options(const EngineOptions &opt) {
  CountOptions o;
  o.cache = opt.cache;
  o.unit_prop = opt.unit_prop;
  o.seed = opt.seed;
  o.cache_bytes = opt.cache_mb << 20;
  o.max_calls = opt.max_calls;
  return o;
}

// One exact count through the selected engine, stats accumulated into `out`.
LogNum count_exact(const WCNF &kb, const EngineOptions &opt, EngineResult &out) {
  if (opt.lifting) {
    LiftedStats stats;
    LogNum z = lifted_wmc(kb, lifted_options(opt), stats);
    out.calls += stats.calls;
    out.cache_hits += stats.cache_hits;
    out.cache_misses += stats.cache_misses;
    out.peak_clauses = std::max(out.peak_clauses, stats.peak_clauses);
    out.peak_pieces = std::max(out.peak_pieces, stats.peak_pieces);
    return z;
  }
  CountStats stats;
  LogNum z = ground_wmc(ground_image(kb), ground_options(opt), stats);
  out.calls += stats.calls;
  out.cache_hits += stats.cache_hits;
  out.cache_misses += stats.cache_misses;
  return z;
}

Estimate estimate(const WCNF &kb, const EngineOptions &opt, EngineResult &out) {
  out.samples = opt.samples;
  if (opt.lifting) {
    LiftedStats stats;
    Estimate est = estimate_lifted(kb, lifted_options(opt), opt.samples, stats);
    out.calls += stats.calls;
    return est;
  }
  CountStats stats;
  Estimate est = estimate_ground(ground_image(kb), ground_options(opt), opt.samples, stats);
  out.calls += stats.calls;
  return est;
}

double clamp01(double p) { return std::min(1.0, std::max(0.0, p)); }

}  // namespace

GroundKB ground_image(const WCNF &kb) {
  Node node;
  node.clauses = kb.clauses;
  for (PredId p = 0; p < kb.voc.num_preds(); ++p)
    node.pieces.push_back(full_pattern(kb.voc, p));
  GroundAtomTable table;
  return ground_node(node, kb, table);
}

EngineResult compute_z(const PKB &pkb, const EngineOptions &opt) {
  WCNF kb = compile_wcnf(pkb);
  EngineResult out;
  if (opt.samples == 0) {
    LogNum z = count_exact(kb, opt, out);
    out.z_den = z;
    out.answer = z.linear();
    return out;
  }
  Estimate est = estimate(kb, opt, out);
  out.z_den = est.mean();
  out.stderr_den = est.stderr_of_mean();
  out.answer = est.mean().linear();
  return out;
}

EngineResult compute_query(const PKB &pkb, const Query &query, const EngineOptions &opt) {
  WCNF kb = compile_wcnf(pkb);
  size_t base = kb.clauses.size();
  add_hard_formula(kb, query.formula, query.vars);

  // Numerator: everything; denominator: everything minus the query clauses.
  std::vector<Clause> num_clauses, den_clauses;
  if (opt.prune) {
    std::vector<Clause> body(kb.clauses.begin(), kb.clauses.begin() + ptrdiff_t(base));
    std::vector<Clause> seeds(kb.clauses.begin() + ptrdiff_t(base), kb.clauses.end());
    // Formulas with no unifiable-literal path to the query factor out of
    // both totals identically, so the ratio is unchanged. Contradictions
    // confined to the dropped part escape detection in this mode.
    for (size_t i : reachable_clauses(body, seeds, kb.voc)) {
      num_clauses.push_back(body[i]);
      den_clauses.push_back(body[i]);
    }
    for (size_t i = base; i < kb.clauses.size(); ++i)
      num_clauses.push_back(kb.clauses[i]);
  } else {
    num_clauses = kb.clauses;
    den_clauses.assign(kb.clauses.begin(), kb.clauses.begin() + ptrdiff_t(base));
  }
  WCNF num_kb{kb.voc, std::move(num_clauses), kb.weights};
  WCNF den_kb{kb.voc, std::move(den_clauses), kb.weights};

  EngineResult out;
  if (opt.samples == 0) {
    LogNum num = count_exact(num_kb, opt, out);
    LogNum den = count_exact(den_kb, opt, out);
    if (den.is_zero()) throw InconsistentKb("knowledge base has no satisfying world");
    out.z_num = num;
    out.z_den = den;
    out.answer = num.is_zero() ? 0.0 : clamp01(std::exp(num.lg - den.lg));
    return out;
  }
  Estimate num = estimate(num_kb, opt, out);
  Estimate den = estimate(den_kb, opt, out);
  if (den.mean().is_zero())
    throw InconclusiveEstimate(
        "every denominator draw was zero; raise --samples or use --exact");
  out.z_num = num.mean();
  out.z_den = den.mean();
  out.stderr_num = num.stderr_of_mean();
  out.stderr_den = den.stderr_of_mean();
  out.answer = num.mean().is_zero()
                   ? 0.0
                   : clamp01(std::exp(num.mean().lg - den.mean().lg));
  return out;
}

EngineResult compute_wcnf(const GroundWcnf &g, const EngineOptions &opt) {
  GroundKB kb;
  kb.clauses = g.clauses;
  kb.weights = g.weights;
  EngineResult out;
  if (opt.samples == 0) {
    CountStats stats;
    LogNum z = ground_wmc(kb, ground_options(opt), stats);
    out.calls = stats.calls;
    out.cache_hits = stats.cache_hits;
    out.cache_misses = stats.cache_misses;
    out.z_den = z;
    out.answer = z.linear();
    return out;
  }
  CountStats stats;
  Estimate est = estimate_ground(kb, ground_options(opt), opt.samples, stats);
  out.calls = stats.calls;
  out.samples = opt.samples;
  out.z_den = est.mean();
  out.stderr_den = est.stderr_of_mean();
  out.answer = est.mean().linear();
  return out;
}

}  // namespace liftcount
