#ifndef GENERICITY_H
#define GENERICITY_H

#pragma once

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GenKind {
  GEN_KIND_PERIODIC = 0,
  GEN_KIND_REDUCIBLE = 1,
  GEN_KIND_PSEUDO_ANOSOV = 2,
  GEN_KIND_UNRESOLVED = 3,
} GenKind;

typedef enum GenStatus {
  GEN_STATUS_OK = 0,
  GEN_STATUS_INVALID_INPUT = 1,
  GEN_STATUS_BUDGET = 2,
  GEN_STATUS_PARSE = 3,
  GEN_STATUS_IO = 4,
  GEN_STATUS_NULL_POINTER = 5,
  GEN_STATUS_PANIC = 6,
} GenStatus;

/**
 * An element of `SL(2, Z)` with arbitrary-precision entries.
 */
typedef struct GenMatrix GenMatrix;

/**
 * Counts along a grid of ball sizes.
 */
typedef struct GenReport GenReport;

/**
 * One classification: `order` is set for periodic elements, `dilatation`
 * for pseudo-Anosov ones (zero otherwise).
 */
typedef struct GenVerdict {
  enum GenKind kind;
  uint32_t order;
  double dilatation;
} GenVerdict;

/**
 * One row of a density report.
 */
typedef struct GenCountRow {
  int64_t l;
  uint64_t total;
  uint64_t periodic;
  uint64_t reducible;
  uint64_t pseudo_anosov;
  uint64_t unresolved;
  double fraction;
  double certified_fraction;
  bool complete;
} GenCountRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on this thread.
 */
const char *gen_last_error(void);

/**
 * Library version as a static string.
 */
const char *gen_version(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void gen_string_free(char *s);

/**
 * Builds the matrix `[[a, b], [c, d]]`; fails unless `ad - bc = 1`.
 *
 * # Safety
 * `out` must be a valid pointer to write a handle into.
 */
enum GenStatus gen_matrix_new(int64_t a, int64_t b, int64_t c, int64_t d, struct GenMatrix **out);

/**
 * Parses `"a,b,c,d"` with entries of any size.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum GenStatus gen_matrix_parse(const char *text, struct GenMatrix **out);

/**
 * # Safety
 * `m` must be null or a handle from this library that has not been freed.
 */
void gen_matrix_free(struct GenMatrix *m);

/**
 * Product `x * y` as a new handle.
 *
 * # Safety
 * `x` and `y` must be live handles and `out` a valid pointer.
 */
enum GenStatus gen_matrix_mul(const struct GenMatrix *x,
                              const struct GenMatrix *y,
                              struct GenMatrix **out);

/**
 * `|a| + |b| + |c| + |d|` as a decimal string, freed with
 * [`gen_string_free`].
 *
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
enum GenStatus gen_matrix_l1_norm(const struct GenMatrix *m, char **out);

/**
 * Exact Nielsen-Thurston type.
 *
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
enum GenStatus gen_matrix_classify(const struct GenMatrix *m, struct GenVerdict *out);

/**
 * Heuristic type of a generator word on the surface of genus `genus` with
 * `punctures` punctures. Letters name the library generators, uppercase
 * for inverses, and the rightmost letter acts first.
 *
 * # Safety
 * `word` must be a NUL-terminated string and `out` a valid pointer.
 */
enum GenStatus gen_classify_word(uint32_t genus,
                                 uint32_t punctures,
                                 const char *word,
                                 struct GenVerdict *out);

/**
 * Exact torus counts over `{m : |a|+|b|+|c|+|d| <= L}` for each `L` in
 * the increasing `grid`.
 *
 * # Safety
 * `grid` must point to `len` values and `out` must be a valid pointer.
 */
enum GenStatus gen_torus_density(const int64_t *grid, size_t len, struct GenReport **out);

/**
 * Orbit-ball counts on a general surface. `max_nodes = 0` keeps the
 * default search cap. An incomplete search still returns a report, with
 * status `GEN_STATUS_BUDGET` and rows flagged incomplete.
 *
 * # Safety
 * `grid` must point to `len` values and `out` must be a valid pointer.
 */
enum GenStatus gen_engine_density(uint32_t genus,
                                  uint32_t punctures,
                                  const int64_t *grid,
                                  size_t len,
                                  size_t max_nodes,
                                  struct GenReport **out);

/**
 * # Safety
 * `r` must be null or a handle from this library that has not been freed.
 */
void gen_report_free(struct GenReport *r);

/**
 * Number of rows; zero for a null handle.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
size_t gen_report_len(const struct GenReport *r);

/**
 * # Safety
 * `r` must be a live handle and `out` a valid pointer.
 */
enum GenStatus gen_report_row(const struct GenReport *r, size_t index, struct GenCountRow *out);

/**
 * The report as JSON, freed with [`gen_string_free`].
 *
 * # Safety
 * `r` must be a live handle and `out` a valid pointer.
 */
enum GenStatus gen_report_to_json(const struct GenReport *r, char **out);

/**
 * Runs the command-line front end on `argc` arguments (program name
 * excluded) and returns its exit code. Output goes to standard output.
 *
 * # Safety
 * `argv` must point to `argc` NUL-terminated strings.
 */
int32_t gen_cli_run(size_t argc, const char *const *argv);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GENERICITY_H */
