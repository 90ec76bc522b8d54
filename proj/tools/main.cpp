// Command-line front end. Talks to the engine exclusively through the C
// interface in liftcount.h; error codes double as exit codes.

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "liftcount.h"

namespace {

struct Cleanup {
  lc_model *model = nullptr;
  lc_result *result = nullptr;
  ~Cleanup() {
    lc_model_free(model);
    lc_result_free(result);
  }
};

int fail(int code, const std::string &msg) {
  std::cerr << "liftcount: " << msg << "\n";
  return code;
}

bool read_file(const std::string &path, std::string &out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

bool write_file(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << text;
  return bool(out);
}

std::string take_string(char *s) {
  std::string out = s ? s : "";
  lc_string_free(s);
  return out;
}

// Common engine/report flags shared by the computing subcommands.
struct RunFlags {
  uint64_t samples = 0;
  bool exact = false;
  uint64_t seed = 0;
  uint32_t cache_mb = 256;
  bool no_cache = false;
  bool no_lifting = false;
  bool no_unit_prop = false;
  bool prune = false;
  bool pure_literals = false;
  bool paranoid = false;
  uint64_t max_calls = 0;
  std::string report;  // "", "json", or "csv"

  void attach(CLI::App *cmd, bool sampling_default) {
    auto *ex = cmd->add_flag("--exact", exact, "exact computation (default)");
    auto *sm = cmd->add_option("--samples", samples, "Monte Carlo draws instead of exact");
    ex->excludes(sm);
    if (sampling_default) samples = 10000;
    cmd->add_option("--seed", seed, "tie-breaking and sampling seed");
    cmd->add_option("--cache-mb", cache_mb, "subproblem cache budget in MiB");
    cmd->add_flag("--no-cache", no_cache, "disable subproblem caching");
    cmd->add_flag("--no-lifting", no_lifting, "ground the problem and count propositionally");
    cmd->add_flag("--no-unit-prop", no_unit_prop, "disable unit propagation");
    cmd->add_flag("--prune", prune,
                  "drop formulas with no literal path to the query "
                  "(query runs only; skips contradictions confined to the dropped part)");
    cmd->add_flag("--pure-literals", pure_literals,
                  "fix single-polarity predicates whose opposite weight is zero");
    cmd->add_flag("--paranoid", paranoid,
                  "cross-check every lifted step against the ground engine (slow)");
    cmd->add_option("--max-calls", max_calls, "abort after this many recursive calls");
    cmd->add_option("--report", report, "machine-readable output: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
  }

  lc_options options() const {
    lc_options opt;
    lc_options_init(&opt);
    opt.samples = exact ? 0 : samples;
    opt.seed = seed;
    opt.cache_mb = cache_mb;
    opt.cache = no_cache ? 0 : 1;
    opt.lifting = no_lifting ? 0 : 1;
    opt.unit_prop = no_unit_prop ? 0 : 1;
    opt.prune = prune ? 1 : 0;
    opt.pure_literals = pure_literals ? 1 : 0;
    opt.paranoid = paranoid ? 1 : 0;
    opt.max_calls = max_calls;
    return opt;
  }
};

int load_model(const std::string &model_path, const std::string &evidence_path,
               Cleanup &own) {
  std::string text;
  if (!read_file(model_path, text))
    return fail(LC_ERR_USAGE, "cannot read model file '" + model_path + "'");
  int rc = lc_model_parse(text.c_str(), &own.model);
  if (rc != LC_OK) return fail(rc, model_path + ": " + lc_last_error());
  if (!evidence_path.empty()) {
    std::string ev;
    if (!read_file(evidence_path, ev))
      return fail(LC_ERR_USAGE, "cannot read evidence file '" + evidence_path + "'");
    rc = lc_model_add_evidence(own.model, ev.c_str());
    if (rc != LC_OK) return fail(rc, evidence_path + ": " + lc_last_error());
  }
  return LC_OK;
}

int emit(const lc_result *result, const RunFlags &flags, const std::string &plain) {
  if (flags.report.empty()) {
    std::cout << plain << "\n";
    return LC_OK;
  }
  char *text = nullptr;
  int rc = flags.report == "json" ? lc_result_json(result, &text)
                                  : lc_result_csv(result, 1, &text);
  if (rc != LC_OK) return fail(rc, lc_last_error());
  std::cout << take_string(text);
  if (flags.report == "json") std::cout << "\n";
  return LC_OK;
}

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int cmd_query(const std::string &model, const std::string &evidence,
              const std::string &query, const RunFlags &flags) {
  Cleanup own;
  int rc = load_model(model, evidence, own);
  if (rc != LC_OK) return rc;
  lc_options opt = flags.options();
  rc = lc_query(own.model, query.c_str(), &opt, &own.result);
  if (rc != LC_OK) return fail(rc, lc_last_error());
  double p = lc_result_answer(own.result);
  std::string plain = fmt_g(p);
  if (opt.samples)
    plain += "  (" + std::to_string(opt.samples) + " samples)";
  return emit(own.result, flags, plain);
}

int cmd_z(const std::string &model, const std::string &evidence, const RunFlags &flags) {
  Cleanup own;
  int rc = load_model(model, evidence, own);
  if (rc != LC_OK) return rc;
  lc_options opt = flags.options();
  rc = lc_z(own.model, &opt, &own.result);
  if (rc != LC_OK) return fail(rc, lc_last_error());
  double lg = lc_result_log_z_den(own.result);
  std::string plain = "Z = " + fmt_g(std::exp(lg)) + "  log Z = " + fmt_g(lg);
  return emit(own.result, flags, plain);
}

int cmd_wmc(const std::string &path, const RunFlags &flags) {
  Cleanup own;
  std::string text;
  if (!read_file(path, text))
    return fail(LC_ERR_USAGE, "cannot read cnf file '" + path + "'");
  lc_options opt = flags.options();
  int rc = lc_wmc(text.c_str(), &opt, &own.result);
  if (rc != LC_OK) return fail(rc, path + ": " + lc_last_error());
  double lg = lc_result_log_z_den(own.result);
  std::string plain = "count = " + fmt_g(std::exp(lg)) + "  log = " + fmt_g(lg);
  return emit(own.result, flags, plain);
}

int write_generated(const std::string &base, char *model_text, char *evidence_text) {
  std::string model = take_string(model_text);
  std::string evidence = take_string(evidence_text);
  if (base.empty()) {
    std::cout << model;
    if (!evidence.empty()) std::cerr << "liftcount: evidence suppressed; pass -o BASE\n";
    return LC_OK;
  }
  if (!write_file(base + ".pkb", model))
    return fail(LC_ERR_USAGE, "cannot write '" + base + ".pkb'");
  if (!write_file(base + ".ev", evidence))
    return fail(LC_ERR_USAGE, "cannot write '" + base + ".ev'");
  std::cout << base << ".pkb\n" << base << ".ev\n";
  return LC_OK;
}

struct BenchRow {
  std::string params;
  lc_result *result = nullptr;
  std::string status = "ok";
};

void bench_emit(const std::string &param_header, std::vector<BenchRow> &rows) {
  // One suite runs one kind of computation, so every completed row carries
  // the same columns; take the header from the first one and pad rows that
  // produced no result to the same width.
  std::string result_header =
      "answer,log_z_num,log_z_den,calls,cache_hits,cache_misses,wall_ms,seed";
  for (BenchRow &row : rows) {
    if (!row.result) continue;
    char *text = nullptr;
    if (lc_result_csv(row.result, 1, &text) == LC_OK) {
      std::string csv = take_string(text);
      result_header = csv.substr(0, csv.find('\n'));
    }
    break;
  }
  size_t commas = size_t(std::count(result_header.begin(), result_header.end(), ','));
  std::cout << param_header << "," << result_header << ",status\n";
  for (BenchRow &row : rows) {
    std::string fields(commas, ',');
    char *text = nullptr;
    if (row.result && lc_result_csv(row.result, 0, &text) == LC_OK) {
      fields = take_string(text);
      if (!fields.empty() && fields.back() == '\n') fields.pop_back();
    }
    std::cout << row.params << "," << fields << "," << row.status << "\n";
    lc_result_free(row.result);
    row.result = nullptr;
  }
}

int cmd_bench_random(uint64_t seed, uint64_t max_calls) {
  std::vector<BenchRow> rows;
  for (uint32_t s : {3u, 5u, 7u, 9u})
    for (uint32_t c : {10u, 20u, 30u, 40u, 50u}) {
      char *model_text = nullptr, *evidence_text = nullptr;
      uint64_t cell_seed = seed * 1000003u + s * 101u + c;
      int rc = lc_generate_random(40, 40, s, c / 10, c, cell_seed, &model_text,
                                  &evidence_text);
      if (rc != LC_OK) return fail(rc, lc_last_error());
      Cleanup own;
      rc = lc_model_parse(model_text, &own.model);
      lc_string_free(model_text);
      if (rc == LC_OK) rc = lc_model_add_evidence(own.model, evidence_text);
      lc_string_free(evidence_text);
      if (rc != LC_OK) return fail(rc, lc_last_error());

      lc_options opt;
      lc_options_init(&opt);
      opt.seed = cell_seed;
      opt.max_calls = max_calls;
      BenchRow row;
      row.params = "random,s=" + std::to_string(s) + ",c=" + std::to_string(c);
      rc = lc_z(own.model, &opt, &row.result);
      if (rc != LC_OK) row.status = (rc == LC_ERR_RESOURCE) ? "resource" : "error";
      rows.push_back(row);
    }
  bench_emit("suite,param1,param2", rows);
  return LC_OK;
}

int cmd_bench_linkpred(uint64_t seed, uint64_t max_calls) {
  std::vector<BenchRow> rows;
  for (uint32_t objects : {10u, 20u, 50u, 100u})
    for (double fraction : {0.2, 0.5, 0.8}) {
      char *model_text = nullptr, *evidence_text = nullptr;
      uint64_t cell_seed = seed * 1000003u + objects * 101u + uint64_t(fraction * 100);
      int rc = lc_generate_linkpred(objects / 2, objects - objects / 2, fraction,
                                    cell_seed, &model_text, &evidence_text);
      if (rc != LC_OK) return fail(rc, lc_last_error());
      Cleanup own;
      rc = lc_model_parse(model_text, &own.model);
      lc_string_free(model_text);
      if (rc == LC_OK) rc = lc_model_add_evidence(own.model, evidence_text);
      lc_string_free(evidence_text);
      if (rc != LC_OK) return fail(rc, lc_last_error());

      lc_options opt;
      lc_options_init(&opt);
      opt.seed = cell_seed;
      opt.max_calls = max_calls;
      BenchRow row;
      row.params = "linkpred,objects=" + std::to_string(objects) +
                   ",evidence=" + fmt_g(fraction);
      rc = lc_z(own.model, &opt, &row.result);
      if (rc != LC_OK) row.status = (rc == LC_ERR_RESOURCE) ? "resource" : "error";
      rows.push_back(row);
    }
  bench_emit("suite,param1,param2", rows);
  return LC_OK;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Exact and Monte Carlo inference for weighted first-order models"};
  app.require_subcommand(1);

  std::string model_path, evidence_path, query_text, wcnf_path, out_base;
  RunFlags query_flags, sample_flags, z_flags, wmc_flags;

  auto *query = app.add_subcommand("query", "conditional probability of a formula");
  query->add_option("-m,--model", model_path, "model file")->required();
  query->add_option("-e,--evidence", evidence_path, "evidence file");
  query->add_option("-q,--query", query_text, "query formula")->required();
  query_flags.attach(query, false);

  auto *sample = app.add_subcommand("sample", "Monte Carlo query estimate");
  sample->add_option("-m,--model", model_path, "model file")->required();
  sample->add_option("-e,--evidence", evidence_path, "evidence file");
  sample->add_option("-q,--query", query_text, "query formula")->required();
  sample_flags.attach(sample, true);

  auto *z = app.add_subcommand("z", "partition total of the model");
  z->add_option("-m,--model", model_path, "model file")->required();
  z->add_option("-e,--evidence", evidence_path, "evidence file");
  z_flags.attach(z, false);

  auto *wmc = app.add_subcommand("wmc", "count a propositional weighted CNF");
  wmc->add_option("-f,--file", wcnf_path, "cnf file")->required();
  wmc_flags.attach(wmc, false);

  uint32_t g_n = 40, g_m = 40, g_s = 3, g_e = 1, g_c = 10;
  uint64_t g_seed = 0;
  auto *gr = app.add_subcommand("gen-random", "emit a random unary-predicate model");
  gr->add_option("--preds", g_n, "number of predicates");
  gr->add_option("--clauses", g_m, "number of clauses");
  gr->add_option("--size", g_s, "literals per clause");
  gr->add_option("--evidence", g_e, "number of evidence atoms");
  gr->add_option("--constants", g_c, "domain size");
  gr->add_option("--seed", g_seed, "generator seed");
  gr->add_option("-o,--out", out_base, "write BASE.pkb and BASE.ev");

  uint32_t l_profs = 50, l_students = 50;
  double l_fraction = 0.2;
  uint64_t l_seed = 0;
  auto *gl = app.add_subcommand("gen-linkpred", "emit the advisor link-prediction model");
  gl->add_option("--profs", l_profs, "number of professors");
  gl->add_option("--students", l_students, "number of students");
  gl->add_option("--fraction", l_fraction, "fraction of atoms observed");
  gl->add_option("--seed", l_seed, "generator seed");
  gl->add_option("-o,--out", out_base, "write BASE.pkb and BASE.ev");

  std::string bench_suite = "random";
  uint64_t bench_seed = 0, bench_max_calls = 0;
  auto *bench = app.add_subcommand("bench", "parameter sweeps, CSV on stdout");
  bench->add_option("--suite", bench_suite, "random or linkpred")
      ->check(CLI::IsMember({"random", "linkpred"}));
  bench->add_option("--seed", bench_seed, "base seed");
  bench->add_option("--max-calls", bench_max_calls, "per-cell recursion budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return LC_ERR_USAGE;
  }

  if (query->parsed()) return cmd_query(model_path, evidence_path, query_text, query_flags);
  if (sample->parsed()) {
    if (sample_flags.exact || sample_flags.samples == 0)
      return fail(LC_ERR_USAGE, "sample requires --samples N");
    return cmd_query(model_path, evidence_path, query_text, sample_flags);
  }
  if (z->parsed()) return cmd_z(model_path, evidence_path, z_flags);
  if (wmc->parsed()) return cmd_wmc(wcnf_path, wmc_flags);
  if (gr->parsed()) {
    char *model_text = nullptr, *evidence_text = nullptr;
    int rc = lc_generate_random(g_n, g_m, g_s, g_e, g_c, g_seed, &model_text,
                                &evidence_text);
    if (rc != LC_OK) return fail(rc, lc_last_error());
    return write_generated(out_base, model_text, evidence_text);
  }
  if (gl->parsed()) {
    char *model_text = nullptr, *evidence_text = nullptr;
    int rc = lc_generate_linkpred(l_profs, l_students, l_fraction, l_seed, &model_text,
                                  &evidence_text);
    if (rc != LC_OK) return fail(rc, lc_last_error());
    return write_generated(out_base, model_text, evidence_text);
  }
  if (bench->parsed())
    return bench_suite == "random" ? cmd_bench_random(bench_seed, bench_max_calls)
                                   : cmd_bench_linkpred(bench_seed, bench_max_calls);
  return LC_ERR_USAGE;
}
