/* C ABI for the turanforge extremal graph theory library. */

#ifndef TURANFORGE_H
#define TURANFORGE_H

/* Generated with cbindgen from crates/ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes mirroring the library's error taxonomy.
typedef enum {
  TF_STATUS_OK = 0,
  // a precondition on the inputs was violated
  TF_STATUS_DOMAIN_ERROR = 1,
  // a node/trial budget ran out
  TF_STATUS_BUDGET_EXHAUSTED = 2,
  // internal invariant failure (a bug, not bad input)
  TF_STATUS_INTERNAL_ERROR = 3,
  // malformed input data
  TF_STATUS_PARSE_ERROR = 4,
  // a required pointer argument was null
  TF_STATUS_NULL_ARGUMENT = 5,
  // a string argument was not valid UTF-8
  TF_STATUS_INVALID_UTF8 = 6,
} tf_status;

// Opaque graph handle.
typedef struct tf_graph tf_graph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread. Valid until the
// next failing call on the same thread; never null.
const char *tf_last_error_message(void);

// Frees a string returned by this library. Null is ignored.
//
// # Safety
// `s` must have been returned by a `tf_*` function and not freed before.
void tf_string_free(char *s);

// Frees a graph handle. Null is ignored.
//
// # Safety
// `g` must have been returned by a `tf_*` constructor and not freed
// before.
void tf_graph_free(tf_graph *g);

// Builds a graph from `num_edges` unordered pairs laid out as
// `u0, v0, u1, v1, ...`. Duplicate edges collapse; loops are rejected.
//
// # Safety
// `edges` must point to `2 * num_edges` readable `u32`s (or be null when
// `num_edges` is 0); `out` must be a writable pointer.
tf_status tf_graph_from_edge_list(uint32_t n,
                                  const uint32_t *edges,
                                  size_t num_edges,
                                  tf_graph **out);

// Decodes a graph6 string.
//
// # Safety
// `text` must be a valid NUL-terminated string; `out` must be writable.
tf_status tf_graph_from_graph6(const char *text, tf_graph **out);

// Encodes a graph as graph6; the string must be freed with
// `tf_string_free`.
//
// # Safety
// `g` must be a live handle; `out` must be writable.
tf_status tf_graph_to_graph6(const tf_graph *g, char **out);

// Vertex count; 0 for a null handle.
//
// # Safety
// `g` must be a live handle or null.
uint64_t tf_graph_vertex_count(const tf_graph *g);

// Edge count; 0 for a null handle.
//
// # Safety
// `g` must be a live handle or null.
uint64_t tf_graph_edge_count(const tf_graph *g);

// # Safety
// `g` must be a live handle; `out` writable.
tf_status tf_graph_has_edge(const tf_graph *g, uint32_t u, uint32_t v, bool *out);

// Number of common neighbors of two distinct vertices.
//
// # Safety
// `g` must be a live handle; `out` writable.
tf_status tf_graph_codegree(const tf_graph *g, uint32_t u, uint32_t v, uint64_t *out);

// # Safety
// `g` must be a live handle; `out` writable.
tf_status tf_count_triangles(const tf_graph *g, uint64_t *out);

// # Safety
// `g` must be a live handle; `out` writable.
tf_status tf_count_c4(const tf_graph *g, uint64_t *out);

// Girth, or -1 when the graph is acyclic.
//
// # Safety
// `g` must be a live handle; `out` writable.
tf_status tf_girth(const tf_graph *g, int64_t *out);

// Shortest odd cycle length, or -1 for bipartite graphs and forests.
//
// # Safety
// `g` must be a live handle; `out` writable.
tf_status tf_odd_girth(const tf_graph *g, int64_t *out);

// Checks the graph against a forbidden family given in the CLI token
// syntax, e.g. `"triangle,c5,k{2,3},b3"`.
//
// # Safety
// `g` must be a live handle; `family` a valid C string; `out` writable.
tf_status tf_is_family_free(const tf_graph *g, const char *family, bool *out);

// Builds the tripartite triangle-free `K_{2,3}`-free graph over `F_q`
// (prime `q = 2 mod 3`, `q >= 5`).
//
// # Safety
// `out` must be writable.
tf_status tf_build_gq(uint64_t q, tf_graph **out);

// Builds the `(t+2)`-partite generalization, searching for a valid
// multiplier table by backtracking within `budget` nodes.
//
// # Safety
// `out` must be writable.
tf_status tf_build_gqt(uint64_t q, uint32_t t, uint64_t budget, tf_graph **out);

// Bipartite incidence graph of the projective plane of prime order `q`.
//
// # Safety
// `out` must be writable.
tf_status tf_projective_plane(uint64_t q, tf_graph **out);

// Exact Turán number by pruned exhaustive search. On success writes the
// value and whether the search was exhaustive within the budget; a
// non-exhaustive search still reports the best value found but returns
// `TF_STATUS_BUDGET_EXHAUSTED`.
//
// # Safety
// `family` must be a valid C string; out-pointers writable.
tf_status tf_ex_exact(uint32_t n,
                      const char *family,
                      uint64_t budget,
                      uint64_t *out_value,
                      bool *out_exhaustive);

// Exact Zarankiewicz number for an `m` by `n` bipartite host.
//
// # Safety
// `family` must be a valid C string; out-pointers writable.
tf_status tf_z_exact(uint32_t m,
                     uint32_t n,
                     const char *family,
                     uint64_t budget,
                     uint64_t *out_value,
                     bool *out_exhaustive);

// The density ratio `(t+1)/sqrt(t(t+2))`.
//
// # Safety
// `out` must be writable.
tf_status tf_density_ratio(uint64_t t, double *out);

// The 4-cycle supersaturation lower bound for a bipartite graph with part
// sizes `m`, `n` and `e` edges. `*out_applicable` is false (and the value
// 0) when the precondition `e(e-n) >= n m (m-1)/2` fails.
//
// # Safety
// Out-pointers must be writable.
tf_status tf_c4_lower_bound(uint64_t m,
                            uint64_t n,
                            uint64_t e,
                            double *out_value,
                            bool *out_applicable);

// Expansion depth and least embeddable odd-cycle length for an
// `(alpha, beta)`-smooth family, with the exponents passed as exact
// fractions.
//
// # Safety
// Out-pointers must be writable.
tf_status tf_expansion_thresholds(int64_t alpha_num,
                                  int64_t alpha_den,
                                  int64_t beta_num,
                                  int64_t beta_den,
                                  uint64_t *out_depth,
                                  uint64_t *out_min_odd_cycle);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TURANFORGE_H */
