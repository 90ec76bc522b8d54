#include "liftcount.h"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "engine.hpp"
#include "generators.hpp"
#include "report.hpp"

using namespace liftcount;

struct lc_model {
  PKB pkb;
};

struct lc_result {
  RunReport report;
};

namespace {

thread_local std::string g_error;

char *dup_string(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Runs f, translating exceptions into error codes. `bounds_code` is the code
// for domain-validation failures (parse errors for text inputs, usage errors
// for generator parameters).
template <typename F>
int guarded(int bounds_code, F &&f) {
  try {
    return f();
  } catch (const InconsistentKb &e) {
    g_error = e.what();
    return LC_ERR_INCONSISTENT;
  } catch (const InconclusiveEstimate &e) {
    g_error = e.what();
    return LC_ERR_RESOURCE;
  } catch (const ResourceLimit &e) {
    g_error = e.what();
    return LC_ERR_RESOURCE;
  } catch (const ModelError &e) {
    g_error = e.what();
    return bounds_code;
  } catch (const std::bad_alloc &) {
    g_error = "out of memory";
    return LC_ERR_RESOURCE;
  } catch (const std::exception &e) {
    g_error = e.what();
    return LC_ERR_USAGE;
  }
}

EngineOptions to_engine(const lc_options *opt) {
  EngineOptions o;
  if (!opt) return o;
  o.lifting = opt->lifting != 0;
  o.cache = opt->cache != 0;
  o.unit_prop = opt->unit_prop != 0;
  o.prune = opt->prune != 0;
  o.pure_literals = opt->pure_literals != 0;
  o.paranoid = opt->paranoid != 0;
  o.seed = opt->seed;
  o.cache_mb = opt->cache_mb;
  o.max_calls = opt->max_calls;
  o.samples = opt->samples;
  return o;
}

std::string evidence_text(const PKB &pkb) {
  std::string out;
  for (const GroundLiteral &l : pkb.evidence)
    out += print_ground_literal(pkb.voc, l) + "\n";
  return out;
}

lc_result *wrap_result(const EngineResult &r, const EngineOptions &opt, double wall_ms) {
  auto *res = new lc_result;
  RunReport &rep = res->report;
  rep.answer = r.answer;
  if (r.z_num) rep.log_z_num = r.z_num->lg;
  if (r.z_den) rep.log_z_den = r.z_den->lg;
  rep.calls = r.calls;
  rep.cache_hits = r.cache_hits;
  rep.cache_misses = r.cache_misses;
  rep.wall_ms = wall_ms;
  rep.seed = opt.seed;
  if (r.samples) {
    rep.extras.emplace_back("samples", std::to_string(r.samples));
    if (r.stderr_num)
      rep.extras.emplace_back("stderr_log_num", fmt_double(r.stderr_num->lg));
    if (r.stderr_den)
      rep.extras.emplace_back("stderr_log_den", fmt_double(r.stderr_den->lg));
  }
  if (opt.lifting && opt.samples == 0) {
    rep.extras.emplace_back("peak_clauses", std::to_string(r.peak_clauses));
    rep.extras.emplace_back("peak_pieces", std::to_string(r.peak_pieces));
  }
  return res;
}

template <typename F>
int run_reporting(const lc_options *opt, lc_result **out, F &&compute) {
  if (!out) {
    g_error = "null result pointer";
    return LC_ERR_USAGE;
  }
  *out = nullptr;
  return guarded(LC_ERR_PARSE, [&] {
    EngineOptions eopt = to_engine(opt);
    auto start = std::chrono::steady_clock::now();
    EngineResult r = compute(eopt);
    double wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    *out = wrap_result(r, eopt, wall_ms);
    return LC_OK;
  });
}

}  // namespace

extern "C" {

void lc_options_init(lc_options *opt) {
  if (!opt) return;
  opt->lifting = 1;
  opt->cache = 1;
  opt->unit_prop = 1;
  opt->prune = 0;
  opt->pure_literals = 0;
  opt->paranoid = 0;
  opt->seed = 0;
  opt->max_calls = 0;
  opt->samples = 0;
  opt->cache_mb = 256;
}

const char *lc_last_error(void) { return g_error.c_str(); }

void lc_string_free(char *s) { std::free(s); }
void lc_model_free(lc_model *m) { delete m; }
void lc_result_free(lc_result *r) { delete r; }

int lc_model_parse(const char *text, lc_model **out) {
  if (!text || !out) {
    g_error = "null argument";
    return LC_ERR_USAGE;
  }
  *out = nullptr;
  return guarded(LC_ERR_PARSE, [&] {
    auto *m = new lc_model;
    m->pkb = parse_model(text);
    *out = m;
    return LC_OK;
  });
}

int lc_model_add_evidence(lc_model *m, const char *text) {
  if (!m || !text) {
    g_error = "null argument";
    return LC_ERR_USAGE;
  }
  return guarded(LC_ERR_PARSE, [&] {
    auto lits = parse_evidence(text, m->pkb.voc);
    for (auto &l : lits) m->pkb.evidence.push_back(std::move(l));
    return LC_OK;
  });
}

int lc_model_print(const lc_model *m, char **out_text) {
  if (!m || !out_text) {
    g_error = "null argument";
    return LC_ERR_USAGE;
  }
  return guarded(LC_ERR_PARSE, [&] {
    *out_text = dup_string(print_model(m->pkb));
    return *out_text ? LC_OK : LC_ERR_RESOURCE;
  });
}

int lc_evidence_print(const lc_model *m, char **out_text) {
  if (!m || !out_text) {
    g_error = "null argument";
    return LC_ERR_USAGE;
  }
  return guarded(LC_ERR_PARSE, [&] {
    *out_text = dup_string(evidence_text(m->pkb));
    return *out_text ? LC_OK : LC_ERR_RESOURCE;
  });
}

int lc_generate_random(uint32_t n_preds, uint32_t n_clauses, uint32_t clause_size,
                       uint32_t n_evidence, uint32_t n_constants, uint64_t seed,
                       char **model_text, char **evidence_text_out) {
  if (!model_text || !evidence_text_out) {
    g_error = "null argument";
    return LC_ERR_USAGE;
  }
  return guarded(LC_ERR_USAGE, [&] {
    PKB pkb = random_pkb(n_preds, n_clauses, clause_size, n_evidence, n_constants, seed);
    *model_text = dup_string(print_model(pkb));
    *evidence_text_out = dup_string(evidence_text(pkb));
    return (*model_text && *evidence_text_out) ? LC_OK : LC_ERR_RESOURCE;
  });
}

int lc_generate_linkpred(uint32_t n_profs, uint32_t n_students, double evidence_fraction,
                         uint64_t seed, char **model_text, char **evidence_text_out) {
  if (!model_text || !evidence_text_out) {
    g_error = "null argument";
    return LC_ERR_USAGE;
  }
  return guarded(LC_ERR_USAGE, [&] {
    PKB pkb = link_prediction_pkb(n_profs, n_students, evidence_fraction, seed);
    *model_text = dup_string(print_model(pkb));
    *evidence_text_out = dup_string(evidence_text(pkb));
    return (*model_text && *evidence_text_out) ? LC_OK : LC_ERR_RESOURCE;
  });
}

int lc_query(const lc_model *m, const char *query, const lc_options *opt,
             lc_result **out) {
  if (!m || !query) {
    g_error = "null argument";
    return LC_ERR_USAGE;
  }
  return run_reporting(opt, out, [&](const EngineOptions &eopt) {
    Query q = parse_query(query, m->pkb.voc);
    return compute_query(m->pkb, q, eopt);
  });
}

int lc_z(const lc_model *m, const lc_options *opt, lc_result **out) {
  if (!m) {
    g_error = "null argument";
    return LC_ERR_USAGE;
  }
  return run_reporting(opt, out,
                       [&](const EngineOptions &eopt) { return compute_z(m->pkb, eopt); });
}

int lc_wmc(const char *wcnf_text, const lc_options *opt, lc_result **out) {
  if (!wcnf_text) {
    g_error = "null argument";
    return LC_ERR_USAGE;
  }
  return run_reporting(opt, out, [&](const EngineOptions &eopt) {
    GroundWcnf g = parse_wcnf(wcnf_text);
    return compute_wcnf(g, eopt);
  });
}

double lc_result_answer(const lc_result *r) {
  return r && r->report.answer ? *r->report.answer : std::nan("");
}
double lc_result_log_z_num(const lc_result *r) {
  return r && r->report.log_z_num ? *r->report.log_z_num : std::nan("");
}
double lc_result_log_z_den(const lc_result *r) {
  return r && r->report.log_z_den ? *r->report.log_z_den : std::nan("");
}
uint64_t lc_result_calls(const lc_result *r) { return r ? r->report.calls : 0; }
uint64_t lc_result_cache_hits(const lc_result *r) { return r ? r->report.cache_hits : 0; }
uint64_t lc_result_cache_misses(const lc_result *r) {
  return r ? r->report.cache_misses : 0;
}
double lc_result_wall_ms(const lc_result *r) { return r ? r->report.wall_ms : 0; }
uint64_t lc_result_seed(const lc_result *r) { return r ? r->report.seed : 0; }

int lc_result_json(const lc_result *r, char **out_text) {
  if (!r || !out_text) {
    g_error = "null argument";
    return LC_ERR_USAGE;
  }
  *out_text = dup_string(report_json(r->report));
  return *out_text ? LC_OK : LC_ERR_RESOURCE;
}

int lc_result_csv(const lc_result *r, int with_header, char **out_text) {
  if (!r || !out_text) {
    g_error = "null argument";
    return LC_ERR_USAGE;
  }
  std::string text;
  if (with_header) text += report_csv_header(r->report) + "\n";
  text += report_csv_row(r->report) + "\n";
  *out_text = dup_string(text);
  return *out_text ? LC_OK : LC_ERR_RESOURCE;
}

}  // extern "C"
