#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace liftcount {

using SortId = uint32_t;
using PredId = uint32_t;
// Constants are indexed per sort; bitset positions in live domains.
using ConstId = uint32_t;

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sorts, their constants, and predicate declarations. Everything downstream
// speaks in the integer ids interned here.
class Vocabulary {
 public:
  struct Sort {
    std::string name;
    std::vector<std::string> constants;
    bool auto_named = false;  // declared by cardinality, names generated
  };
  struct Pred {
    std::string name;
    std::vector<SortId> arg_sorts;
    bool internal = false;  // introduced by the compiler, not user visible
  };

  SortId add_sort(const std::string &name, const std::vector<std::string> &constants,
                  bool auto_named = false);
  SortId add_sort_sized(const std::string &name, uint32_t cardinality);

  PredId add_pred(const std::string &name, std::vector<SortId> arg_sorts, bool internal = false);

  std::optional<SortId> find_sort(const std::string &name) const;
  std::optional<PredId> find_pred(const std::string &name) const;
  // Constant names are global: one name belongs to exactly one sort.
  std::optional<std::pair<SortId, ConstId>> find_const(const std::string &name) const;

  const Sort &sort(SortId s) const { return sorts_.at(s); }
  const Pred &pred(PredId p) const { return preds_.at(p); }
  uint32_t sort_size(SortId s) const { return uint32_t(sorts_.at(s).constants.size()); }
  size_t num_sorts() const { return sorts_.size(); }
  size_t num_preds() const { return preds_.size(); }

  const std::string &const_name(SortId s, ConstId c) const {
    return sorts_.at(s).constants.at(c);
  }

  // Number of groundings of predicate p over full domains.
  double full_groundings(PredId p) const;

 private:
  std::vector<Sort> sorts_;
  std::vector<Pred> preds_;
  std::map<std::string, SortId> sort_by_name_;
  std::map<std::string, PredId> pred_by_name_;
  std::map<std::string, std::pair<SortId, ConstId>> const_by_name_;
};

}  // namespace liftcount
