/* C interface for the htam scoring engine.
 *
 * Hand-maintained against crates/htam-ffi/src/lib.rs; the crate's test
 * suite asserts that every exported symbol is declared here.
 *
 * Conventions:
 *   - Opaque handles are created and freed only by this library.
 *   - Functions returning HtamStatus report failure details through
 *     htam_last_error() (thread-local, valid until the next failing call
 *     on the same thread).
 *   - Tool lists are passed as `const char *const *` plus a length.
 */

#ifndef HTAM_H
#define HTAM_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum HtamStatus {
  HTAM_STATUS_OK = 0,
  HTAM_STATUS_NULL_ARGUMENT = 1,
  HTAM_STATUS_INVALID_UTF8 = 2,
  HTAM_STATUS_PARSE_ERROR = 3,
  HTAM_STATUS_INVALID_GRAPH = 4,
  HTAM_STATUS_INVALID_ARGUMENT = 5,
} HtamStatus;

/* Opaque handles. */
typedef struct HtamGraph HtamGraph;
typedef struct HtamCostModel HtamCostModel;

/* Thread-local message for the most recent error on this thread. */
const char *htam_last_error(void);

/* Dependency graphs (JSON schema: {domain, nodes, edges, description}). */
HtamStatus htam_graph_from_json(const char *json, HtamGraph **out);
void htam_graph_free(HtamGraph *graph);
HtamStatus htam_graph_validate(const HtamGraph *graph, int *is_valid);
HtamStatus htam_graph_layer_count(HtamGraph *graph, size_t *out);
HtamStatus htam_graph_layer_of(HtamGraph *graph, const char *tool, size_t *out);

/* Centrality-derived edit-cost models. */
HtamStatus htam_cost_model_build(const HtamGraph *graph,
                                 double base_cost,
                                 double alpha,
                                 double damping,
                                 int uniform_mode,
                                 HtamCostModel **out);
HtamStatus htam_cost_model_uniform(double base_cost, HtamCostModel **out);
void htam_cost_model_free(HtamCostModel *model);
HtamStatus htam_ins_del_cost(const HtamCostModel *model, const char *tool, double *out);

/* Structural scoring (lexical substitution similarity). */
HtamStatus htam_edit_distance(const HtamCostModel *model,
                              const char *const *agent,
                              size_t agent_len,
                              const char *const *gt,
                              size_t gt_len,
                              double *out);
HtamStatus htam_path_similarity(const HtamCostModel *model,
                                const char *const *agent,
                                size_t agent_len,
                                const char *const *gt,
                                size_t gt_len,
                                double *out);
double htam_lexical_similarity(const char *a, const char *b);

/* Key-tool correctness. */
HtamStatus htam_key_recall(const char *const *key_gt,
                           size_t key_gt_len,
                           const char *const *agent_path,
                           size_t agent_len,
                           double *out);
HtamStatus htam_key_precision(const char *const *key_agent,
                              size_t key_agent_len,
                              const char *const *gt_path,
                              size_t gt_len,
                              double *out);
double htam_f1(double recall, double precision);

/* Elo ratings. */
void htam_elo_expected(double r_a, double r_b, double *e_a, double *e_b);
HtamStatus htam_elo_update(double r_a,
                           double r_b,
                           double s_a,
                           double k,
                           double *r_a_out,
                           double *r_b_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* HTAM_H */
