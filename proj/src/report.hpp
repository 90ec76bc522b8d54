#pragma once

#include <optional>
#include <string>
#include <vector>

namespace liftcount {

// One run's diagnostics. The first eight fields form the fixed report
// schema; extras append run-kind specifics (sample stderr, peak sizes, ...)
// as already-formatted values.
struct RunReport {
  std::optional<double> answer;
  std::optional<double> log_z_num;
  std::optional<double> log_z_den;
  uint64_t calls = 0;
  uint64_t cache_hits = 0;
  uint64_t cache_misses = 0;
  double wall_ms = 0;
  uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> extras;
};

// Flat JSON object; absent/non-finite numeric fields serialize as null.
std::string report_json(const RunReport &r);

// CSV with the fixed columns first, then the extras, in declaration order.
std::string report_csv_header(const RunReport &r);
std::string report_csv_row(const RunReport &r);

}  // namespace liftcount
