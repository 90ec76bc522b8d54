#ifndef LIFTCOUNT_H
#define LIFTCOUNT_H

/* C interface to the first-order weighted counting engine. All functions
 * returning int yield one of the LC_* codes below; on any nonzero return,
 * lc_last_error() describes the failure for the calling thread. Strings
 * returned through char** are heap-allocated; release them with
 * lc_string_free. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Error codes; the command-line tool reuses them as exit codes. */
enum {
  LC_OK = 0,
  LC_ERR_USAGE = 1,        /* invalid parameters */
  LC_ERR_PARSE = 2,        /* malformed model/evidence/query/cnf text */
  LC_ERR_INCONSISTENT = 3, /* hard constraints admit no world */
  LC_ERR_RESOURCE = 4      /* call budget, memory, or inconclusive estimate */
};

typedef struct lc_model lc_model;   /* parsed model plus evidence */
typedef struct lc_result lc_result; /* one run's answer and diagnostics */

typedef struct lc_options {
  int lifting;       /* nonzero: first-order engine; zero: ground engine */
  int cache;         /* memoize solved subproblems */
  int unit_prop;     /* propagate unit clauses */
  int prune;         /* drop formulas with no literal path to the query */
  int pure_literals; /* fix single-polarity predicates whose dual weight is 0 */
  int paranoid;      /* cross-check every lifted step against grounding */
  uint64_t seed;     /* tie-breaking and sampling seed */
  uint64_t max_calls; /* abort after this many recursive calls; 0 = unlimited */
  uint64_t samples;   /* Monte Carlo draws; 0 = exact */
  uint32_t cache_mb;  /* cache budget in MiB */
} lc_options;

void lc_options_init(lc_options *opt);

const char *lc_last_error(void);

void lc_string_free(char *s);
void lc_model_free(lc_model *m);
void lc_result_free(lc_result *r);

/* Model text: domain/predicate declarations and weighted formula lines.
 * Evidence text: one ground literal per line, '!' prefix negates. */
int lc_model_parse(const char *text, lc_model **out);
int lc_model_add_evidence(lc_model *m, const char *text);
int lc_model_print(const lc_model *m, char **out_text);
int lc_evidence_print(const lc_model *m, char **out_text);

/* Benchmark generators; deterministic in all parameters. */
int lc_generate_random(uint32_t n_preds, uint32_t n_clauses, uint32_t clause_size,
                       uint32_t n_evidence, uint32_t n_constants, uint64_t seed,
                       char **model_text, char **evidence_text);
int lc_generate_linkpred(uint32_t n_profs, uint32_t n_students, double evidence_fraction,
                         uint64_t seed, char **model_text, char **evidence_text);

/* P(query | model, evidence); query is a formula over the model's symbols. */
int lc_query(const lc_model *m, const char *query, const lc_options *opt,
             lc_result **out);
/* Partition total of the model with its evidence. */
int lc_z(const lc_model *m, const lc_options *opt, lc_result **out);
/* Standalone count of a propositional weighted CNF (DIMACS-flavored text). */
int lc_wmc(const char *wcnf_text, const lc_options *opt, lc_result **out);

/* Fixed report fields; NaN when a field does not apply to the run kind. */
double lc_result_answer(const lc_result *r);
double lc_result_log_z_num(const lc_result *r);
double lc_result_log_z_den(const lc_result *r);
uint64_t lc_result_calls(const lc_result *r);
uint64_t lc_result_cache_hits(const lc_result *r);
uint64_t lc_result_cache_misses(const lc_result *r);
double lc_result_wall_ms(const lc_result *r);
uint64_t lc_result_seed(const lc_result *r);

/* Whole-report renderings (fixed columns, then run-kind extras). */
int lc_result_json(const lc_result *r, char **out_text);
int lc_result_csv(const lc_result *r, int with_header, char **out_text);

#ifdef __cplusplus
}
#endif

#endif /* LIFTCOUNT_H */
