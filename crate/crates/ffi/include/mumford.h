#ifndef MUMFORD_H
#define MUMFORD_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every call. Values from 10 upward mirror the library's error kinds.
typedef enum MumfordStatus {
  MUMFORD_STATUS_OK = 0,
  MUMFORD_STATUS_NULL_ARGUMENT = 1,
  MUMFORD_STATUS_INVALID_UTF8 = 2,
  MUMFORD_STATUS_PANIC = 3,
  MUMFORD_STATUS_INVALID_GRAPH = 10,
  MUMFORD_STATUS_INVALID_RANK = 11,
  MUMFORD_STATUS_INVALID_TRANSITION_MATRIX = 12,
  MUMFORD_STATUS_ENUMERATION_BUDGET_EXCEEDED = 13,
  MUMFORD_STATUS_REQUIRES_IRREDUCIBLE = 14,
  MUMFORD_STATUS_NOT_ADMISSIBLE = 15,
  MUMFORD_STATUS_TRUNCATION_TOO_SMALL = 16,
  MUMFORD_STATUS_INVALID_PARAMETER = 17,
  MUMFORD_STATUS_SUMMABILITY_VIOLATION = 18,
  MUMFORD_STATUS_INSUFFICIENT_SPECTRUM = 19,
  MUMFORD_STATUS_REQUIRES_EVEN_TRIPLE = 20,
  MUMFORD_STATUS_PRESENTATION_INVALID = 21,
  MUMFORD_STATUS_REQUIRES_SQUARES = 22,
  MUMFORD_STATUS_NOT_BM_REDUCIBLE = 23,
  MUMFORD_STATUS_INVALID_TABLE = 24,
  MUMFORD_STATUS_DEGENERATE_EUCLIDEAN = 25,
  MUMFORD_STATUS_INVALID_POLYGON = 26,
  MUMFORD_STATUS_BRACKET_FAILURE = 27,
  MUMFORD_STATUS_OVERFLOW = 28,
  MUMFORD_STATUS_NO_CONVERGENCE = 29,
  MUMFORD_STATUS_IO = 30,
  MUMFORD_STATUS_PARSE = 31,
  MUMFORD_STATUS_UNSUPPORTED_FORMAT = 32,
} MumfordStatus;

// Polygonal presentation.
typedef struct MumfordPresentation MumfordPresentation;

// Shift of finite type built from a 0/1 transition matrix.
typedef struct MumfordSft MumfordSft;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. The pointer
// stays valid until the next call into the library on the same thread.
const char *mumford_last_error(void);

// Releases a string returned by the library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void mumford_string_free(char *s);

// Full Schottky shift of rank `genus`.
//
// # Safety
// `out_sft` must be valid for writes.
enum MumfordStatus mumford_sft_schottky(size_t genus, struct MumfordSft **out_sft);

// Shift from a row-major n×n 0/1 matrix.
//
// # Safety
// `entries` must point to n·n bytes; `out_sft` must be valid for writes.
enum MumfordStatus mumford_sft_from_matrix(const uint8_t *entries,
                                           size_t n,
                                           struct MumfordSft **out_sft);

// # Safety
// `sft` must come from this library and not have been freed. Null is ignored.
void mumford_sft_free(struct MumfordSft *sft);

// Alphabet size.
//
// # Safety
// Pointers must be valid.
enum MumfordStatus mumford_sft_size(const struct MumfordSft *sft, size_t *out_size);

// Perron eigenvalue and its logarithm.
//
// # Safety
// Pointers must be valid.
enum MumfordStatus mumford_sft_perron(const struct MumfordSft *sft,
                                      double *out_lambda,
                                      double *out_delta_h);

// Ranks of K_0 and K_1, and the number of torsion invariant factors of K_0.
//
// # Safety
// Pointers must be valid.
enum MumfordStatus mumford_ktheory(const struct MumfordSft *sft,
                                   size_t *out_k0_rank,
                                   size_t *out_k0_torsion,
                                   size_t *out_k1_rank);

// K_0 as a display string such as "Z/3 ⊕ Z^1". Free with [`mumford_string_free`].
//
// # Safety
// Pointers must be valid.
enum MumfordStatus mumford_k0_string(const struct MumfordSft *sft, char **out_text);

// Writes 1 when the sufficient stable isomorphism criterion holds, else 0.
//
// # Safety
// Pointers must be valid.
enum MumfordStatus mumford_stably_isomorphic(const struct MumfordSft *a,
                                             const struct MumfordSft *b,
                                             int32_t *out_verdict);

// Theta sum Tr e^{−tD²} of the grading truncated at `levels`, with its tail bound.
//
// # Safety
// Pointers must be valid.
enum MumfordStatus mumford_theta_trace(const struct MumfordSft *sft,
                                       size_t levels,
                                       double t,
                                       double *out_partial,
                                       double *out_tail_bound);

// Positive root of the exponent equation for polygon weights q_1..q_r.
//
// # Safety
// `weights` must point to `len` values; out pointers must be valid.
enum MumfordStatus mumford_solve_tau(const uint64_t *weights,
                                     size_t len,
                                     double *out_x,
                                     double *out_residual);

// The square family over 4q letters.
//
// # Safety
// `out_presentation` must be valid for writes.
enum MumfordStatus mumford_family_presentation(size_t q,
                                               struct MumfordPresentation **out_presentation);

// Presentation from its JSON document.
//
// # Safety
// `json` must be a nul-terminated string; `out_presentation` valid for writes.
enum MumfordStatus mumford_presentation_from_json(const char *json,
                                                  struct MumfordPresentation **out_presentation);

// Four-fold cover of a square presentation.
//
// # Safety
// Pointers must be valid.
enum MumfordStatus mumford_presentation_cover(const struct MumfordPresentation *p,
                                              struct MumfordPresentation **out_presentation);

// # Safety
// `p` must come from this library and not have been freed. Null is ignored.
void mumford_presentation_free(struct MumfordPresentation *p);

// Vertex, edge and face counts of the assembled polyhedron, and whether
// every vertex link is complete bipartite (1) or not (0).
//
// # Safety
// Pointers must be valid.
enum MumfordStatus mumford_polyhedron_counts(const struct MumfordPresentation *p,
                                             size_t *out_vertices,
                                             size_t *out_edges,
                                             size_t *out_faces,
                                             int32_t *out_complete_links);

// Whether the stable pairs condition holds (1) or not (0).
//
// # Safety
// Pointers must be valid.
enum MumfordStatus mumford_stable_pairs(const struct MumfordPresentation *p, int32_t *out_holds);

// Vertex valences of the two trees acted on by the BM group, and its
// number of relations.
//
// # Safety
// Pointers must be valid.
enum MumfordStatus mumford_bm_valences(const struct MumfordPresentation *p,
                                       size_t *out_horizontal,
                                       size_t *out_vertical,
                                       size_t *out_relations);

// Runs a command-line invocation (without the program name) and returns
// the report text. Free with [`mumford_string_free`].
//
// # Safety
// `argv` must point to `argc` nul-terminated strings; `out_report` valid for writes.
enum MumfordStatus mumford_run(size_t argc, const char *const *argv, char **out_report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MUMFORD_H */
