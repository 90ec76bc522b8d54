#include "symbols.hpp"

namespace liftcount {

SortId Vocabulary::add_sort(const std::string &name, const std::vector<std::string> &constants,
                            bool auto_named) {
  if (sort_by_name_.count(name)) throw ModelError("duplicate domain '" + name + "'");
  if (constants.empty()) throw ModelError("domain '" + name + "' is empty");
  SortId id = SortId(sorts_.size());
  for (size_t i = 0; i < constants.size(); ++i) {
    const std::string &c = constants[i];
    if (const_by_name_.count(c))
      throw ModelError("constant '" + c + "' already belongs to another domain");
    const_by_name_.emplace(c, std::make_pair(id, ConstId(i)));
  }
  sorts_.push_back(Sort{name, constants, auto_named});
  sort_by_name_.emplace(name, id);
  return id;
}

SortId Vocabulary::add_sort_sized(const std::string &name, uint32_t cardinality) {
  if (cardinality == 0) throw ModelError("domain '" + name + "' is empty");
  std::string stem = name;
  stem[0] = char(std::toupper(static_cast<unsigned char>(stem[0])));
  std::vector<std::string> constants;
  constants.reserve(cardinality);
  for (uint32_t i = 1; i <= cardinality; ++i) constants.push_back(stem + std::to_string(i));
  return add_sort(name, constants, true);
}

PredId Vocabulary::add_pred(const std::string &name, std::vector<SortId> arg_sorts,
                            bool internal) {
  if (pred_by_name_.count(name)) throw ModelError("duplicate predicate '" + name + "'");
  for (SortId s : arg_sorts)
    if (s >= sorts_.size()) throw ModelError("predicate '" + name + "' uses unknown domain");
  PredId id = PredId(preds_.size());
  preds_.push_back(Pred{name, std::move(arg_sorts), internal});
  pred_by_name_.emplace(name, id);
  return id;
}

std::optional<SortId> Vocabulary::find_sort(const std::string &name) const {
  auto it = sort_by_name_.find(name);
  if (it == sort_by_name_.end()) return std::nullopt;
  return it->second;
}

std::optional<PredId> Vocabulary::find_pred(const std::string &name) const {
  auto it = pred_by_name_.find(name);
  if (it == pred_by_name_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::pair<SortId, ConstId>> Vocabulary::find_const(const std::string &name) const {
  auto it = const_by_name_.find(name);
  if (it == const_by_name_.end()) return std::nullopt;
  return it->second;
}

double Vocabulary::full_groundings(PredId p) const {
  double n = 1;
  for (SortId s : preds_.at(p).arg_sorts) n *= double(sort_size(s));
  return n;
}

}  // namespace liftcount
