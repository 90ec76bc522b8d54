#pragma once

#include <list>
#include <string>
#include <unordered_map>

namespace liftcount {

// Byte-budgeted LRU map from serialized node keys to values.
template <typename V>
class LruCache {
 public:
  explicit LruCache(size_t budget) : budget_(budget) {}

  const V *find(const std::string &key) {
    auto it = index_.find(key);
    if (it == index_.end()) return nullptr;
    order_.splice(order_.begin(), order_, it->second);
    return &it->second->value;
  }

  void insert(std::string key, V value) {
    if (index_.find(key) != index_.end()) return;
    size_t cost = entry_cost(key);
    if (cost > budget_) return;
    order_.push_front(Entry{std::move(key), std::move(value)});
    index_.emplace(order_.front().key, order_.begin());
    bytes_ += cost;
    while (bytes_ > budget_) {
      bytes_ -= entry_cost(order_.back().key);
      index_.erase(order_.back().key);
      order_.pop_back();
    }
  }

  size_t size() const { return order_.size(); }
  size_t bytes() const { return bytes_; }

 private:
  struct Entry {
    std::string key;
    V value;
  };
  static constexpr size_t kOverhead = 64;  // map node + list node estimate
  static size_t entry_cost(const std::string &key) {
    return 2 * key.size() + sizeof(V) + kOverhead;
  }

  size_t budget_;
  size_t bytes_ = 0;
  std::list<Entry> order_;
  std::unordered_map<std::string, typename std::list<Entry>::iterator> index_;
};

}  // namespace liftcount
