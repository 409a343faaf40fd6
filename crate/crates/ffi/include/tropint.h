#ifndef TROPINT_H
#define TROPINT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TropintStatus {
  TROPINT_STATUS_OK = 0,
  TROPINT_STATUS_NULL_POINTER = 1,
  // Malformed text input or a non-UTF-8 string.
  TROPINT_STATUS_PARSE = 2,
  // Well-formed input outside the domain of the operation.
  TROPINT_STATUS_INVALID_ARGUMENT = 3,
  TROPINT_STATUS_BUDGET = 4,
  // A check ran and failed, or no solution exists.
  TROPINT_STATUS_FAILED = 5,
  TROPINT_STATUS_INTERNAL = 6,
  TROPINT_STATUS_PANIC = 7,
} TropintStatus;

// An extracted tropical plane curve.
typedef struct TropintCurve TropintCurve;

// A period matrix `Ω`.
typedef struct TropintLattice TropintLattice;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. Valid until
// the next failing call on the same thread; do not free.
const char *tropint_last_error(void);

// # Safety
// `s` is null or a string returned by this library, not yet freed.
void tropint_string_free(char *s);

// Builds `Ω` from `g * g` row-major integer entries.
//
// # Safety
// `entries` points to `g * g` values; `out` is writable.
enum TropintStatus tropint_lattice_new(const int64_t *entries,
                                       size_t g,
                                       struct TropintLattice **out);

// # Safety
// `l` is null or a live handle.
void tropint_lattice_free(struct TropintLattice *l);

// # Safety
// `l` is a live handle; `out` is writable.
enum TropintStatus tropint_lattice_genus(const struct TropintLattice *l, size_t *out);

// `Θ(Z; Ω)` as text. `minimizers` receives the number of minimizing `n`
// when not null.
//
// # Safety
// `l` is a live handle, `z` a C string, `value` writable.
enum TropintStatus tropint_theta(const struct TropintLattice *l,
                                 const char *z,
                                 char **value,
                                 size_t *minimizers);

// Reduces `Z` into the fundamental domain of `R^g / Ω Z^g`.
//
// # Safety
// As for [`tropint_theta`].
enum TropintStatus tropint_torus_reduce(const struct TropintLattice *l, const char *z, char **out);

// Corner locus of a polynomial such as `"min(X, Y, 1)"`.
//
// # Safety
// `poly` is a C string; `out` is writable.
enum TropintStatus tropint_curve_extract(const char *poly, struct TropintCurve **out);

// # Safety
// `c` is null or a live handle.
void tropint_curve_free(struct TropintCurve *c);

// # Safety
// `c` is a live handle; every non-null output is writable.
enum TropintStatus tropint_curve_counts(const struct TropintCurve *c,
                                        size_t *vertices,
                                        size_t *edges,
                                        size_t *genus);

// # Safety
// `c` is a live handle; `out` is writable.
enum TropintStatus tropint_curve_json(const struct TropintCurve *c, char **out);

// Period matrix of the face basis as a new lattice handle.
//
// # Safety
// `c` is a live handle; `out` is writable.
enum TropintStatus tropint_curve_period_matrix(const struct TropintCurve *c,
                                               struct TropintLattice **out);

// One Toda step on interleaved `Q1,W1,...,QN,WN`.
//
// # Safety
// `state` is a C string; `out` is writable.
enum TropintStatus tropint_toda_step(const char *state, char **out);

// One box-ball step on a `0`/`1` string.
//
// # Safety
// `state` is a C string; `out` is writable.
enum TropintStatus tropint_bbs_step(const char *state, char **out);

// Conserved `C_0, ..., C_M` of a `0`/`1` string or a rational list.
//
// # Safety
// `state` is a C string; `out` is writable.
enum TropintStatus tropint_bbs_cj(const char *state, char **out);

// Orbit length under the box-ball step; `Budget` past `limit` steps.
//
// # Safety
// `state` is a C string; `out` is writable.
enum TropintStatus tropint_bbs_orbit_period(const char *state, uint64_t limit, uint64_t *out);

// Runs acceptance criterion `id`. Returns `Failed` when the check fails;
// `line` receives the report either way when not null.
//
// # Safety
// `line` is null or writable.
enum TropintStatus tropint_verify(uint32_t id, uint64_t seed, size_t cases, char **line);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TROPINT_H */
