#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace liftcount {

// Nonnegative quantity kept as its natural logarithm. Weighted counts overflow
// doubles quickly (2^(c^2) shows up in ordinary runs), so every count in the
// engines lives in this representation. Zero is -inf.
struct LogNum {
  double lg = -std::numeric_limits<double>::infinity();

  LogNum() = default;
  explicit LogNum(double log_value) : lg(log_value) {}

  static LogNum zero() { return LogNum(); }
  static LogNum one() { return LogNum(0.0); }
  static LogNum from_linear(double v) {
    assert(v >= 0.0);
    return v == 0.0 ? zero() : LogNum(std::log(v));
  }

  bool is_zero() const { return std::isinf(lg) && lg < 0; }
  double linear() const { return std::exp(lg); }

  LogNum operator*(LogNum o) const {
    if (is_zero() || o.is_zero()) return zero();
    return LogNum(lg + o.lg);
  }
  LogNum &operator*=(LogNum o) { return *this = *this * o; }

  // Division by zero is a caller bug; keep the assert hot.
  LogNum operator/(LogNum o) const {
    assert(!o.is_zero());
    if (is_zero()) return zero();
    return LogNum(lg - o.lg);
  }

  LogNum operator+(LogNum o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    double hi = lg, lo = o.lg;
    if (hi < lo) std::swap(hi, lo);
    return LogNum(hi + std::log1p(std::exp(lo - hi)));
  }
  LogNum &operator+=(LogNum o) { return *this = *this + o; }

  LogNum pow(double e) const {
    if (is_zero()) return e == 0.0 ? one() : zero();
    return LogNum(lg * e);
  }

  bool operator==(const LogNum &o) const { return lg == o.lg || (is_zero() && o.is_zero()); }
};

inline LogNum log_binomial(uint64_t n, uint64_t k) {
  assert(k <= n);
  return LogNum(std::lgamma(double(n) + 1) - std::lgamma(double(k) + 1) -
                std::lgamma(double(n - k) + 1));
}

inline bool approx_rel(double a, double b, double tol) {
  double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
  return std::fabs(a - b) <= tol * scale;
}

// splitmix64; used for stateless tie-breaking and for deriving per-sample RNG
// streams. Stateless randomness keeps exact runs bitwise reproducible no
// matter which caches or flags are active.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t hash_combine(uint64_t seed, uint64_t v) {
  return mix64(seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)));
}

inline uint64_t hash_bytes(const void *data, size_t len, uint64_t seed = 0) {
  const unsigned char *p = static_cast<const unsigned char *>(data);
  uint64_t h = seed ^ (len * 0x9e3779b97f4a7c15ULL);
  while (len >= 8) {
    uint64_t w;
    __builtin_memcpy(&w, p, 8);
    h = hash_combine(h, w);
    p += 8;
    len -= 8;
  }
  uint64_t tail = 0;
  for (size_t i = 0; i < len; ++i) tail |= uint64_t(p[i]) << (8 * i);
  if (tail) h = hash_combine(h, tail);
  return h;
}

// Dense bit set sized to a domain. Live variable domains are the hottest data
// structure in the lifted engine, so this stays minimal and inline.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(uint32_t size, bool full = false) { resize(size, full); }

  void resize(uint32_t size, bool full = false) {
    size_ = size;
    words_.assign((size + 63) / 64, full ? ~0ULL : 0ULL);
    if (full) trim();
  }

  uint32_t size() const { return size_; }

  bool test(uint32_t i) const {
    assert(i < size_);
    return (words_[i >> 6] >> (i & 63)) & 1;
  }
  void set(uint32_t i) {
    assert(i < size_);
    words_[i >> 6] |= 1ULL << (i & 63);
  }
  void reset(uint32_t i) {
    assert(i < size_);
    words_[i >> 6] &= ~(1ULL << (i & 63));
  }

  uint32_t count() const {
    uint64_t c = 0;
    for (uint64_t w : words_) c += __builtin_popcountll(w);
    return uint32_t(c);
  }
  bool empty() const {
    for (uint64_t w : words_)
      if (w) return false;
    return true;
  }
  bool full() const { return count() == size_; }

  Bitset &operator&=(const Bitset &o) {
    assert(size_ == o.size_);
    for (size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  Bitset &operator|=(const Bitset &o) {
    assert(size_ == o.size_);
    for (size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  // this \ o
  Bitset &operator-=(const Bitset &o) {
    assert(size_ == o.size_);
    for (size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }

  friend Bitset operator&(Bitset a, const Bitset &b) { return a &= b; }
  friend Bitset operator|(Bitset a, const Bitset &b) { return a |= b; }
  friend Bitset operator-(Bitset a, const Bitset &b) { return a -= b; }

  bool intersects(const Bitset &o) const {
    assert(size_ == o.size_);
    for (size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & o.words_[i]) return true;
    return false;
  }
  bool subset_of(const Bitset &o) const {
    assert(size_ == o.size_);
    for (size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }

  bool operator==(const Bitset &o) const { return size_ == o.size_ && words_ == o.words_; }

  int32_t first() const {
    for (size_t i = 0; i < words_.size(); ++i)
      if (words_[i]) return int32_t(i * 64 + __builtin_ctzll(words_[i]));
    return -1;
  }
  int32_t next(uint32_t after) const {
    for (uint32_t i = after + 1; i < size_; ++i)
      if (test(i)) return int32_t(i);
    return -1;
  }

  template <typename F>
  void for_each(F &&f) const {
    for (size_t wi = 0; wi < words_.size(); ++wi) {
      uint64_t w = words_[wi];
      while (w) {
        uint32_t b = uint32_t(__builtin_ctzll(w));
        f(uint32_t(wi * 64 + b));
        w &= w - 1;
      }
    }
  }

  std::vector<uint32_t> members() const {
    std::vector<uint32_t> out;
    out.reserve(count());
    for_each([&](uint32_t i) { out.push_back(i); });
    return out;
  }

  // First n members; used to pick canonical representatives of symmetric
  // assignment blocks.
  Bitset take(uint32_t n) const {
    Bitset out(size_);
    uint32_t got = 0;
    for (size_t wi = 0; wi < words_.size() && got < n; ++wi) {
      uint64_t w = words_[wi];
      while (w && got < n) {
        uint32_t b = uint32_t(__builtin_ctzll(w));
        out.set(uint32_t(wi * 64 + b));
        ++got;
        w &= w - 1;
      }
    }
    assert(got == n);
    return out;
  }

  uint64_t hash(uint64_t seed = 0) const {
    return hash_bytes(words_.data(), words_.size() * 8, hash_combine(seed, size_));
  }

  const std::vector<uint64_t> &words() const { return words_; }

 private:
  void trim() {
    if (size_ & 63) words_.back() &= (1ULL << (size_ & 63)) - 1;
  }
  uint32_t size_ = 0;
  std::vector<uint64_t> words_;
};

}  // namespace liftcount
