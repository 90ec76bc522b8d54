#include "sampler.hpp"

#include <algorithm>
#include <cmath>

namespace liftcount {

LogNum Estimate::mean() const {
  if (n == 0 || sum.is_zero()) return LogNum::zero();
  return LogNum(sum.lg - std::log(double(n)));
}

LogNum Estimate::stderr_of_mean() const {
  if (n < 2 || sum_sq.is_zero()) return LogNum::zero();
  // sum of squared deviations = sum_sq - sum^2/n, nonnegative by
  // Cauchy-Schwarz; the log-space subtraction loses precision only when the
  // draws barely vary, where the answer is ~zero anyway.
  double a = sum_sq.lg;
  double b = 2 * sum.lg - std::log(double(n));
  if (b >= a) return LogNum::zero();
  double dev = a + std::log1p(-std::exp(b - a));
  return LogNum(0.5 * (dev - std::log(double(n - 1)) - std::log(double(n))));
}

double proposal_q_true(uint64_t n_true, uint64_t n_false, LogNum w_true, LogNum w_false,
                       bool dead_true, bool dead_false) {
  dead_true = dead_true || w_true.is_zero();
  dead_false = dead_false || w_false.is_zero();
  if (dead_true) return dead_false ? 0.5 : 0.0;
  if (dead_false) return 1.0;
  if (n_true == 0 && n_false == 0) return 0.5;
  // Masses in log space; the floor keeps support for live branches that
  // satisfy nothing.
  double lt = w_true.lg + std::log(std::max(double(n_true), 0.5));
  double lf = w_false.lg + std::log(std::max(double(n_false), 0.5));
  return 1.0 / (1.0 + std::exp(lf - lt));
}

namespace {

uint32_t draw_binomial(uint32_t n, double p, Rng &rng) {
  if (p <= 0) return 0;
  if (p >= 1) return n;
  return uint32_t(std::binomial_distribution<uint32_t>(n, p)(rng));
}

struct GroundSampler {
  const GroundKB &kb;
  const CountOptions &opt;
  CountStats &stats;
  Rng &rng;

  LogNum weight_of(int32_t lit) const {
    uint32_t atom = uint32_t(std::abs(lit)) - 1;
    return lit > 0 ? kb.weights[atom].first : kb.weights[atom].second;
  }
  LogNum retire(uint32_t atom) const {
    return kb.weights[atom].first + kb.weights[atom].second;
  }

  LogNum draw(ground_detail::ClauseSet cs) {
    ++stats.calls;
    if (opt.max_calls && stats.calls > opt.max_calls)
      throw ResourceLimit("recursion budget exhausted");

    LogNum factor = LogNum::one();
    for (const auto &c : cs)
      if (c.empty()) return LogNum::zero();

    if (opt.unit_prop) {
      bool again = true;
      while (again) {
        again = false;
        for (const auto &c : cs)
          if (c.size() == 1) {
            int32_t lit = c[0];
            std::vector<uint32_t> vanished;
            auto next = ground_detail::condition(cs, lit, vanished);
            if (!next) return LogNum::zero();
            factor *= weight_of(lit);
            for (uint32_t a : vanished) factor *= retire(a);
            cs = std::move(*next);
            again = true;
            break;
          }
      }
    }
    if (cs.empty()) return factor;

    auto comps = ground_detail::split_components(cs);
    if (comps.size() > 1) {
      for (auto &comp : comps) {
        factor *= draw(std::move(comp));
        if (factor.is_zero()) return factor;
      }
      return factor;
    }

    uint32_t atom = ground_detail::choose_split_atom(cs, opt.seed);
    int32_t lits[2] = {int32_t(atom) + 1, -(int32_t(atom) + 1)};
    std::optional<ground_detail::ClauseSet> next[2];
    std::vector<uint32_t> vanished[2];
    uint64_t sat[2];
    for (int i = 0; i < 2; ++i) {
      next[i] = ground_detail::condition(cs, lits[i], vanished[i]);
      sat[i] = 0;
      for (const auto &c : cs)
        if (std::find(c.begin(), c.end(), lits[i]) != c.end()) ++sat[i];
    }
    double q_true = proposal_q_true(sat[0], sat[1], weight_of(lits[0]),
                                    weight_of(lits[1]), !next[0], !next[1]);
    if (!next[0] && !next[1]) return LogNum::zero();
    bool take_true = std::uniform_real_distribution<double>(0, 1)(rng) < q_true;
    int pick = take_true ? 0 : 1;
    double q = take_true ? q_true : 1.0 - q_true;
    if (q <= 0 || !next[pick]) return LogNum::zero();  // picked a valueless branch
    LogNum branch = weight_of(lits[pick]);
    for (uint32_t a : vanished[pick]) branch *= retire(a);
    branch *= draw(std::move(*next[pick]));
    return factor * branch / LogNum::from_linear(q);
  }
};

struct LiftedSampler {
  LiftedCounter &counter;
  Rng &rng;

  struct Draw {
    LogNum value = LogNum::zero();
    bool exact = true;  // no randomness influenced the value
  };

  Draw draw(Node node) {
    auto s = counter.simplify(node);
    if (s.conflict) return {LogNum::zero(), true};
    Draw out{s.factor, true};
    if (node.clauses.empty()) return out;

    auto comps = counter.split_components(node);
    if (comps.size() > 1) {
      for (Node &comp : comps) {
        Draw d = draw(std::move(comp));
        out.value *= d.value;
        out.exact = out.exact && d.exact;
        if (out.value.is_zero()) return out;
      }
      return out;
    }
    node = std::move(comps[0]);

    if (auto dec = counter.find_decomposer(node)) {
      auto prep = counter.prepare_decomposer(node, *dec);
      if (prep.conflict) return {LogNum::zero(), true};
      out.value *= prep.retired;
      for (auto &[sub, mult] : prep.blocks) {
        Draw first = draw(sub);
        if (first.exact) {
          out.value *= first.value.pow(mult);
        } else {
          out.exact = false;
          LogNum acc = first.value;
          for (uint64_t i = 1; i < uint64_t(mult) && !acc.is_zero(); ++i)
            acc *= draw(sub).value;
          out.value *= acc;
        }
        if (out.value.is_zero()) return out;
      }
      return out;
    }

    auto choice = counter.choose_split(node);
    // Value copy: the node is consumed below while the piece is still needed.
    const AtomPattern piece = node.pieces[choice.piece];
    PredId pred = piece.pred;
    LogNum wt = counter.kb().w_true(pred), wf = counter.kb().w_false(pred);

    if (choice.binomial) {
      LogNum total = counter.retire_weight(pred);
      if (total.is_zero()) return {LogNum::zero(), true};
      const Bitset &live = piece.store.live(choice.root);
      uint32_t n = live.count();
      double p = std::exp(wt.lg - total.lg);
      bool forced = p <= 0 || p >= 1;
      uint32_t t = draw_binomial(n, p, rng);
      Bitset true_set = live.take(t);
      std::optional<Node> branch = std::move(node);
      if (t > 0) {
        AtomPattern set = piece;
        set.store.restrict_live(choice.root, true_set);
        branch = counter.assign(std::move(*branch), pred, set, true);
      }
      if (branch && t < n) {
        AtomPattern set = piece;
        set.store.restrict_live(choice.root, live - true_set);
        branch = counter.assign(std::move(*branch), pred, set, false);
      }
      if (!branch) return {LogNum::zero(), true};
      Draw sub = draw(std::move(*branch));
      out.value *= total.pow(n) * sub.value;
      out.exact = sub.exact && forced;
      return out;
    }

    AtomPattern atom = ground_pattern(counter.kb().voc, pred, choice.tuple);
    uint32_t sat[2] = {0, 0};  // clauses satisfied by true / by false
    for (const Clause &c : node.clauses) {
      bool hit[2] = {false, false};
      for (const Literal &l : c.lits)
        if (l.pred == pred && tuple_overlaps(c.store, l.args, atom))
          hit[l.neg ? 1 : 0] = true;
      for (int i = 0; i < 2; ++i)
        if (hit[i]) ++sat[i];
    }
    std::optional<Node> branches[2] = {counter.assign(node, pred, atom, true),
                                       counter.assign(std::move(node), pred, atom, false)};
    LogNum w[2] = {wt, wf};
    double q_true = proposal_q_true(sat[0], sat[1], wt, wf, !branches[0], !branches[1]);
    if (!branches[0] && !branches[1]) return {LogNum::zero(), true};
    bool take_true = std::uniform_real_distribution<double>(0, 1)(rng) < q_true;
    int pick = take_true ? 0 : 1;
    double q = take_true ? q_true : 1.0 - q_true;
    if (q <= 0 || !branches[pick]) return {LogNum::zero(), true};
    Draw sub = draw(std::move(*branches[pick]));
    out.value *= w[pick] * sub.value / LogNum::from_linear(q);
    out.exact = sub.exact && q >= 1.0;
    return out;
  }
};

}  // namespace

LogNum sample_ground_once(const GroundKB &kb, const CountOptions &opt, Rng &rng,
                          CountStats &stats) {
  GroundSampler s{kb, opt, stats, rng};
  LogNum factor = LogNum::one();
  std::vector<bool> seen(kb.weights.size(), false);
  for (const auto &c : kb.clauses)
    for (int32_t lit : c) seen[uint32_t(std::abs(lit)) - 1] = true;
  for (uint32_t a = 0; a < seen.size(); ++a)
    if (!seen[a]) factor *= s.retire(a);
  return factor * s.draw(kb.clauses);
}

LogNum sample_lifted_once(LiftedCounter &counter, const Node &root, Rng &rng) {
  LiftedSampler s{counter, rng};
  return s.draw(root).value;
}

// Each draw runs on its own stream keyed by (seed, index), so draws can be
// computed in any order or in parallel and merge to identical totals.
Estimate estimate_ground(const GroundKB &kb, const CountOptions &opt, uint64_t draws,
                         CountStats &stats) {
  Estimate est;
  for (uint64_t i = 0; i < draws; ++i) {
    Rng rng(hash_combine(opt.seed, i));
    est.add(sample_ground_once(kb, opt, rng, stats));
  }
  return est;
}

Estimate estimate_lifted(const WCNF &kb, const LiftedOptions &opt, uint64_t draws,
                         LiftedStats &stats) {
  LiftedOptions sopt = opt;
  sopt.cache = false;  // reused draw values would correlate the factors below
  sopt.paranoid = false;
  LiftedCounter counter(kb, sopt, stats);
  auto [root, factor] = counter.root();
  Estimate est;
  for (uint64_t i = 0; i < draws; ++i) {
    Rng rng(hash_combine(opt.seed, i));
    if (factor.is_zero())
      est.add(LogNum::zero());
    else
      est.add(factor * sample_lifted_once(counter, root, rng));
  }
  return est;
}

}  // namespace liftcount
