#include "counter.hpp"

#include <algorithm>
#include <cstring>
#include <map>

namespace liftcount {

namespace ground_detail {

namespace {
uint32_t atom_of(int32_t lit) { return uint32_t(std::abs(lit)) - 1; }
}  // namespace

std::optional<ClauseSet> condition(const ClauseSet &cs, int32_t lit,
                                   std::vector<uint32_t> &vanished) {
  ClauseSet out;
  out.reserve(cs.size());
  for (const auto &c : cs) {
    bool satisfied = false;
    for (int32_t l : c)
      if (l == lit) {
        satisfied = true;
        break;
      }
    if (satisfied) continue;
    std::vector<int32_t> kept;
    kept.reserve(c.size());
    for (int32_t l : c)
      if (l != -lit) kept.push_back(l);
    if (kept.empty()) return std::nullopt;
    out.push_back(std::move(kept));
  }
  // Occurrence diff: anything in cs but no longer in out retires.
  std::vector<uint32_t> before, after;
  for (const auto &c : cs)
    for (int32_t l : c) before.push_back(atom_of(l));
  for (const auto &c : out)
    for (int32_t l : c) after.push_back(atom_of(l));
  std::sort(before.begin(), before.end());
  before.erase(std::unique(before.begin(), before.end()), before.end());
  std::sort(after.begin(), after.end());
  after.erase(std::unique(after.begin(), after.end()), after.end());
  std::set_difference(before.begin(), before.end(), after.begin(), after.end(),
                      std::back_inserter(vanished));
  vanished.erase(std::remove(vanished.begin(), vanished.end(), atom_of(lit)),
                 vanished.end());
  return out;
}

std::vector<ClauseSet> split_components(const ClauseSet &cs) {
  // Union-find over the atoms present.
  std::map<uint32_t, uint32_t> parent;
  auto find = [&](uint32_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const auto &c : cs)
    for (int32_t l : c)
      parent.emplace(atom_of(l), atom_of(l));
  for (const auto &c : cs)
    for (size_t i = 1; i < c.size(); ++i) {
      uint32_t a = find(atom_of(c[0])), b = find(atom_of(c[i]));
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  std::map<uint32_t, ClauseSet> groups;
  for (const auto &c : cs) groups[find(atom_of(c[0]))].push_back(c);
  std::vector<ClauseSet> out;
  out.reserve(groups.size());
  for (auto &[root, group] : groups) out.push_back(std::move(group));
  return out;
}

uint32_t choose_split_atom(const ClauseSet &cs, uint64_t tie_seed) {
  std::map<uint32_t, uint32_t> occurrences;
  for (const auto &c : cs)
    for (int32_t l : c) ++occurrences[atom_of(l)];
  uint32_t best = UINT32_MAX;
  uint32_t best_n = 0;
  uint64_t best_rank = 0;
  for (auto [a, n] : occurrences) {
    uint64_t rank = mix64(tie_seed ^ (uint64_t(a) + 0x9e3779b97f4a7c15ull));
    if (best == UINT32_MAX || n > best_n || (n == best_n && rank > best_rank)) {
      best = a;
      best_n = n;
      best_rank = rank;
    }
  }
  return best;
}

std::string serialize(const ClauseSet &cs) {
  ClauseSet sorted = cs;
  std::sort(sorted.begin(), sorted.end());
  std::string out;
  out.reserve(sorted.size() * 8);
  for (const auto &c : sorted) {
    for (int32_t l : c) {
      char buf[4];
      std::memcpy(buf, &l, 4);
      out.append(buf, 4);
    }
    int32_t zero = 0;
    char buf[4];
    std::memcpy(buf, &zero, 4);
    out.append(buf, 4);
  }
  return out;
}

}  // namespace ground_detail

namespace {

using ground_detail::ClauseSet;
using ground_detail::condition;

struct Counter {
  const GroundKB &kb;
  const CountOptions &opt;
  CountStats &stats;
  LruCache<LogNum> cache;

  Counter(const GroundKB &kb, const CountOptions &opt, CountStats &stats)
      : kb(kb), opt(opt), stats(stats), cache(opt.cache_bytes) {}

  LogNum weight_of(int32_t lit) const {
    const auto &w = kb.weights[uint32_t(std::abs(lit)) - 1];
    return lit > 0 ? w.first : w.second;
  }
  LogNum retire(uint32_t atom) const {
    return kb.weights[atom].first + kb.weights[atom].second;
  }

  LogNum count(ClauseSet cs) {
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
        for (const auto &c : cs) {
          if (c.size() != 1) continue;
          int32_t lit = c[0];
          factor = factor * weight_of(lit);
          std::vector<uint32_t> vanished;
          auto next = condition(cs, lit, vanished);
          if (!next) return LogNum::zero();
          for (uint32_t a : vanished) factor = factor * retire(a);
          cs = std::move(*next);
          again = true;
          break;
        }
      }
    }
    if (cs.empty()) return factor;

    auto comps = ground_detail::split_components(cs);
    LogNum value = LogNum::one();
    if (comps.size() == 1) {
      value = cached_split(std::move(comps[0]));
    } else {
      for (auto &comp : comps) value = value * count_component(std::move(comp));
    }
    return factor * value;
  }

  // A component re-enters through count() so component children are visible
  // in the call statistics, but unit propagation cannot fire (a unit clause
  // would have been consumed already when enabled).
  LogNum count_component(ClauseSet cs) { return count(std::move(cs)); }

  LogNum cached_split(ClauseSet cs) {
    std::string key = ground_detail::serialize(cs);
    if (opt.cache) {
      if (const LogNum *hit = cache.find(key)) {
        ++stats.cache_hits;
        return *hit;
      }
      ++stats.cache_misses;
    }
    uint64_t tie = mix64(opt.seed ^ hash_bytes(key.data(), key.size()));
    uint32_t atom = ground_detail::choose_split_atom(cs, tie);
    LogNum total = LogNum::zero();
    for (int32_t lit : {int32_t(atom + 1), -int32_t(atom + 1)}) {
      std::vector<uint32_t> vanished;
      auto next = condition(cs, lit, vanished);
      if (!next) continue;
      LogNum branch = weight_of(lit);
      for (uint32_t a : vanished) branch = branch * retire(a);
      total = total + branch * count(std::move(*next));
    }
    if (opt.cache) cache.insert(std::move(key), total);
    return total;
  }
};

}  // namespace

LogNum ground_wmc(const GroundKB &kb, const CountOptions &opt, CountStats &stats) {
  Counter counter(kb, opt, stats);
  // Atoms never mentioned in any clause retire before the search.
  std::vector<bool> mentioned(kb.weights.size(), false);
  for (const auto &c : kb.clauses)
    for (int32_t l : c) mentioned[uint32_t(std::abs(l)) - 1] = true;
  LogNum outside = LogNum::one();
  for (uint32_t a = 0; a < kb.weights.size(); ++a)
    if (!mentioned[a]) outside = outside * counter.retire(a);
  return outside * counter.count(kb.clauses);
}

}  // namespace liftcount
