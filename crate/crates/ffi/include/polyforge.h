#ifndef POLYFORGE_H
#define POLYFORGE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum PfStatus {
  PF_STATUS_OK = 0,
  // A required pointer argument was null.
  PF_STATUS_NULL_POINTER = 1,
  // Malformed JSON, bad rationals, wrong schema version or dimensions.
  PF_STATUS_INVALID_INPUT = 2,
  // The input violates a precondition, e.g. it is not a cube.
  PF_STATUS_PRECONDITION = 3,
  // An exact certificate failed.
  PF_STATUS_CERTIFICATE = 4,
  // A panic was caught at the boundary.
  PF_STATUS_PANIC = 5,
} PfStatus;

// Opaque transformation log.
typedef struct PfLog PfLog;

// Opaque certified polytope.
typedef struct PfPolytope PfPolytope;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or null. Valid until the
// next failing call on the same thread.
const char *pf_last_error(void);

// Releases a string returned by this library.
//
// # Safety
// `s` must be null or a string from this library not yet freed.
void pf_string_free(char *s);

// Parses and certifies a polytope document.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum PfStatus pf_polytope_from_json(const char *json, struct PfPolytope **out);

// Writes the polytope document.
//
// # Safety
// `p` must be a live handle and `out` a valid pointer.
enum PfStatus pf_polytope_to_json(const struct PfPolytope *p, char **out);

// # Safety
// `p` must be null or a handle not yet freed.
void pf_polytope_free(struct PfPolytope *p);

// Dimension, vertex count and facet count; any out-pointer may be null.
//
// # Safety
// `p` must be a live handle; non-null out-pointers must be valid.
enum PfStatus pf_polytope_counts(const struct PfPolytope *p,
                                 uintptr_t *dim,
                                 uintptr_t *vertices,
                                 uintptr_t *facets);

// SHA-256 digest of the canonical facet rows, as hex.
//
// # Safety
// `p` must be a live handle and `out` a valid pointer.
enum PfStatus pf_polytope_digest(const struct PfPolytope *p, char **out);

// The cube `[-1, 1]^d`.
//
// # Safety
// `out` must be a valid pointer.
enum PfStatus pf_standard_cube(uintptr_t d, struct PfPolytope **out);

// A seeded random combinatorial cube.
//
// # Safety
// `out` must be a valid pointer.
enum PfStatus pf_random_cube(uintptr_t d, uint64_t seed, struct PfPolytope **out);

// Face numbers `f_0, ..., f_{d-1}`. Writes at most `cap` entries to `buf`
// and the full length to `len`.
//
// # Safety
// `p` must be a live handle, `buf` valid for `cap` entries (or null when
// `cap` is 0) and `len` a valid pointer.
enum PfStatus pf_f_vector(const struct PfPolytope *p, uint64_t *buf, uintptr_t cap, uintptr_t *len);

// Cubical g-vector `g^c_0, ..., g^c_{floor(d/2)}` of a cubical polytope,
// written like [`pf_f_vector`].
//
// # Safety
// As for [`pf_f_vector`].
enum PfStatus pf_gc_vector(const struct PfPolytope *p, int64_t *buf, uintptr_t cap, uintptr_t *len);

// Normal and projective steps taking a combinatorial cube to the standard
// cube.
//
// # Safety
// `q` must be a live handle and `out` a valid pointer.
enum PfStatus pf_normalize_cube(const struct PfPolytope *q, struct PfLog **out);

// Steps taking the cube `a` onto the cube `b`.
//
// # Safety
// `a`, `b` must be live handles and `out` a valid pointer.
enum PfStatus pf_relate_cubes(const struct PfPolytope *a,
                              const struct PfPolytope *b,
                              struct PfLog **out);

// Number of steps in the log.
//
// # Safety
// `log` must be a live handle and `len` a valid pointer.
enum PfStatus pf_log_len(const struct PfLog *log, uintptr_t *len);

// The polytope after the last step.
//
// # Safety
// `log` must be a live handle and `out` a valid pointer.
enum PfStatus pf_log_final(const struct PfLog *log, struct PfPolytope **out);

// The replayable log document.
//
// # Safety
// `log` must be a live handle and `out` a valid pointer.
enum PfStatus pf_log_to_json(const struct PfLog *log, char **out);

// Replays a log document and returns the certified result.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum PfStatus pf_log_replay_json(const char *json, struct PfPolytope **out);

// # Safety
// `log` must be null or a handle not yet freed.
void pf_log_free(struct PfLog *log);

// A tower of cubes with bottom facet projectively `q` and top facet `q2`.
//
// # Safety
// `q`, `q2` must be live handles and `out` a valid pointer.
enum PfStatus pf_build_tower(const struct PfPolytope *q,
                             const struct PfPolytope *q2,
                             struct PfPolytope **out);

// C-connected sum along facets `f1` of `p1` and `f2` of `p2` with a
// connector of `cubes` cubes (0 for the default `4d`).
//
// # Safety
// `p1`, `p2` must be live handles and `out` a valid pointer.
enum PfStatus pf_connected_sum(const struct PfPolytope *p1,
                               uintptr_t f1,
                               const struct PfPolytope *p2,
                               uintptr_t f2,
                               uintptr_t cubes,
                               struct PfPolytope **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POLYFORGE_H */
