#pragma once

/* C interface to the hybrid MKNF solver.
 *
 * All functions returning hmknf_status set a thread-local error message
 * (hmknf_last_error) on failure. Objects are created behind opaque handles
 * and released with their matching _free function; strings returned through
 * char** out-parameters are released with hmknf_string_free.
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hmknf_status {
  HMKNF_OK = 0,
  HMKNF_ERR_PARSE = 1,    /* malformed KB text or candidate */
  HMKNF_ERR_GATE = 2,     /* a tractability gate was exceeded */
  HMKNF_ERR_INVALID = 3,  /* bad argument (unknown option, atom, oracle) */
  HMKNF_ERR_IO = 4,       /* file could not be read or written */
  HMKNF_ERR_INTERNAL = 5  /* invariant violation; please report */
} hmknf_status;

typedef enum hmknf_outcome {
  HMKNF_MODEL = 0,    /* at least one interpretation found */
  HMKNF_NO_MODEL = 1, /* search space exhausted, no interpretation */
  HMKNF_UNKNOWN = 2   /* budget or in-run gate stopped the search */
} hmknf_outcome;

typedef struct hmknf_kb hmknf_kb;
typedef struct hmknf_options hmknf_options;
typedef struct hmknf_result hmknf_result;

const char* hmknf_version(void);
/* Message for the most recent failure on this thread; never NULL. */
const char* hmknf_last_error(void);

void hmknf_string_free(char* s);

/* --- knowledge bases ----------------------------------------------------- */

hmknf_status hmknf_parse(const char* text, hmknf_kb** out);
hmknf_status hmknf_parse_file(const char* path, hmknf_kb** out);
void hmknf_kb_free(hmknf_kb* kb);

/* Round-trippable rendering of the parsed KB. */
hmknf_status hmknf_kb_serialize(const hmknf_kb* kb, char** out);
size_t hmknf_kb_atom_count(const hmknf_kb* kb);
size_t hmknf_kb_rule_count(const hmknf_kb* kb);
size_t hmknf_kb_clause_count(const hmknf_kb* kb);
size_t hmknf_kb_warning_count(const hmknf_kb* kb);
/* Borrowed pointer, valid while the KB lives; NULL if i is out of range. */
const char* hmknf_kb_warning(const hmknf_kb* kb, size_t i);

/* --- options -------------------------------------------------------------- */

hmknf_options* hmknf_options_new(void);
void hmknf_options_free(hmknf_options* opts);

/* Keys: graph-mode (exact|overapprox), max-exact-graph, max-loops,
 * max-direct, conflicts, time-ms, heuristic (lex|activity), seed,
 * restarts (0|1), learned-cap, trace (file path, or "stderr"). */
hmknf_status hmknf_options_set(hmknf_options* opts, const char* key, const char* value);

/* --- solving -------------------------------------------------------------- */

hmknf_status hmknf_solve(const hmknf_kb* kb, const hmknf_options* opts, hmknf_result** out);
/* max_models = 0 enumerates everything. */
hmknf_status hmknf_enumerate(const hmknf_kb* kb, const hmknf_options* opts, uint64_t max_models,
                             hmknf_result** out);
void hmknf_result_free(hmknf_result* res);

hmknf_outcome hmknf_result_outcome(const hmknf_result* res);
size_t hmknf_result_model_count(const hmknf_result* res);
size_t hmknf_result_model_size(const hmknf_result* res, size_t model);
/* Borrowed pointer; atoms of one model are in name order. NULL out of range. */
const char* hmknf_result_model_atom(const hmknf_result* res, size_t model, size_t idx);
/* Why the outcome is UNKNOWN when it is; "" otherwise. Borrowed pointer. */
const char* hmknf_result_message(const hmknf_result* res);
/* Counters: decisions, conflicts, restarts, learned, entailment-nogoods,
 * loop-nogoods, model-checks, evicted, models, oracle-queries,
 * oracle-cache-hits, oracle-sat-calls. Unknown names yield 0. */
uint64_t hmknf_result_stat(const hmknf_result* res, const char* name);

/* --- verification --------------------------------------------------------- */

/* Checks one candidate interpretation, given as atom names. *accepted is set
 * to 1 or 0; on rejection *label (if non-NULL) receives the violated
 * component ("saturation", "support(a)", "loop({a, b})", "rule-completion(rN)")
 * and *witness the rendered violated condition. */
hmknf_status hmknf_verify(const hmknf_kb* kb, const hmknf_options* opts,
                          const char* const* atoms, size_t n_atoms, int* accepted, char** label,
                          char** witness);

/* Compares the solver's enumeration against an independent route:
 * "formulas" (candidate sweep against the completion/loop formulas),
 * "nogoods" (induced assignments against the materialized nogood sets), or
 * "direct" (set-of-interpretations semantics; tiny vocabularies only).
 * *match is set to 1 or 0; *report (if non-NULL) receives a printable
 * summary ("MATCH (1 model)" or a mismatch description). */
hmknf_status hmknf_verify_all(const hmknf_kb* kb, const hmknf_options* opts, const char* oracle,
                              int* match, char** report);

/* --- graphs ---------------------------------------------------------------- */

/* DOT rendering of the dependency graph under the configured mode; solid
 * rule edges, dashed ontology edges; annotate_sccs clusters cyclic SCCs. */
hmknf_status hmknf_graph_dot(const hmknf_kb* kb, const hmknf_options* opts, int annotate_sccs,
                             char** out);

#ifdef __cplusplus
}
#endif
