#include "report.hpp"

#include <cmath>
#include <cstdlib>

#include "json.hpp"
#include "textio.hpp"

namespace liftcount {

namespace {

using Json = nlohmann::ordered_json;

// Non-finite doubles have no JSON representation; emit null.
Json json_number(const std::optional<double> &v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

// Extras carry pre-formatted values; re-type the numeric ones.
Json json_scalar(const std::string &s) {
  if (s.empty()) return nullptr;
  char *end = nullptr;
  double d = std::strtod(s.c_str(), &end);
  if (end && *end == '\0') return std::isfinite(d) ? Json(d) : Json(nullptr);
  return s;
}

std::string csv_number(const std::optional<double> &v) {
  if (!v) return "";
  return fmt_double(*v);  // non-finite values print as inf/nan deliberately
}

}  // namespace

std::string report_json(const RunReport &r) {
  Json j;
  j["answer"] = json_number(r.answer);
  j["log_z_num"] = json_number(r.log_z_num);
  j["log_z_den"] = json_number(r.log_z_den);
  j["calls"] = r.calls;
  j["cache_hits"] = r.cache_hits;
  j["cache_misses"] = r.cache_misses;
  j["wall_ms"] = r.wall_ms;
  j["seed"] = r.seed;
  for (const auto &[key, value] : r.extras) j[key] = json_scalar(value);
  return j.dump();
}

std::string report_csv_header(const RunReport &r) {
  std::string out = "answer,log_z_num,log_z_den,calls,cache_hits,cache_misses,wall_ms,seed";
  for (const auto &[key, value] : r.extras) out += "," + key;
  return out;
}

std::string report_csv_row(const RunReport &r) {
  std::string out = csv_number(r.answer) + "," + csv_number(r.log_z_num) + "," +
                    csv_number(r.log_z_den) + "," + std::to_string(r.calls) + "," +
                    std::to_string(r.cache_hits) + "," + std::to_string(r.cache_misses) +
                    "," + fmt_double(r.wall_ms) + "," + std::to_string(r.seed);
  for (const auto &[key, value] : r.extras) out += "," + value;
  return out;
}

}  // namespace liftcount
