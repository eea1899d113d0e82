#ifndef QIFORGE_H
#define QIFORGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by every entry point.
 */
typedef enum QfStatus {
  QF_STATUS_OK = 0,
  QF_STATUS_NULL_POINTER = 1,
  QF_STATUS_INVALID_UTF8 = 2,
  QF_STATUS_INVALID_PARAMETER = 3,
  QF_STATUS_PARSE = 4,
  QF_STATUS_BUDGET = 5,
  QF_STATUS_OUT_OF_RANGE = 6,
  QF_STATUS_UNSUPPORTED = 7,
  QF_STATUS_IO = 8,
  QF_STATUS_INTERNAL = 9,
} QfStatus;

/**
 * An enumerated word-metric ball.
 */
typedef struct QfBall QfBall;

/**
 * A marked group.
 */
typedef struct QfGroup QfGroup;

/**
 * A map between marked groups.
 */
typedef struct QfMap QfMap;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer
 * stays valid until the next call into the library from the same thread.
 */
const char *qf_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *qf_version(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from a `qiforge` out-parameter and not be freed twice.
 */
void qf_string_free(char *s);

/**
 * Parses a group such as `"Z^2"`, `"BS(1,3)"`, `"F_2"`, `"ZxC4"` or `"2Z"`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QfStatus qf_group_parse(const char *spec, struct QfGroup **out);

/**
 * # Safety
 * `g` must come from `qf_group_parse` or be NULL.
 */
void qf_group_free(struct QfGroup *g);

/**
 * Canonical name of the group.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum QfStatus qf_group_name(const struct QfGroup *g, char **out);

/**
 * Enumerates the ball of `radius` around the identity, failing with
 * `Budget` beyond `budget` elements.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum QfStatus qf_ball_new(const struct QfGroup *g,
                          uint32_t radius,
                          size_t budget,
                          struct QfBall **out);

/**
 * # Safety
 * `b` must come from `qf_ball_new` or be NULL.
 */
void qf_ball_free(struct QfBall *b);

/**
 * Number of elements.
 *
 * # Safety
 * `b` must be a live handle and `out` a valid pointer.
 */
enum QfStatus qf_ball_size(const struct QfBall *b, size_t *out);

/**
 * Normal form of element `index` (BFS order, 0 is the identity).
 *
 * # Safety
 * `b` must be a live handle and `out` a valid pointer.
 */
enum QfStatus qf_ball_element(const struct QfBall *b, size_t index, char **out);

/**
 * Word length of element `index`.
 *
 * # Safety
 * `b` must be a live handle and `out` a valid pointer.
 */
enum QfStatus qf_ball_distance(const struct QfBall *b, size_t index, uint32_t *out);

/**
 * Word length of an element given in normal form, if it lies in the ball.
 *
 * # Safety
 * `b` must be a live handle, `element` a NUL-terminated string and `out` valid.
 */
enum QfStatus qf_ball_word_length(const struct QfBall *b, const char *element, uint32_t *out);

/**
 * Parses a map such as `"floor:2:Z"`, `"incl:2Z"`, `"fix:2"`, `"proj:2"`,
 * `"chart:2"`, `"fc:2:2"` or `"extend:2"`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QfStatus qf_map_parse(const char *spec, struct QfMap **out);

/**
 * # Safety
 * `f` must come from `qf_map_parse` or be NULL.
 */
void qf_map_free(struct QfMap *f);

/**
 * Image of an element given in normal form.
 *
 * # Safety
 * `f` must be a live handle, `element` a NUL-terminated string and `out` valid.
 */
enum QfStatus qf_map_apply(const struct QfMap *f, const char *element, char **out);

/**
 * Minimal matching displacement at window scale `l`, searched up to
 * `r_max`. Writes `-1` when no radius up to `r_max` works.
 *
 * # Safety
 * `f` must be a live handle and `out` a valid pointer.
 */
enum QfStatus qf_r_star(const struct QfMap *f, uint32_t l, uint32_t r_max, int64_t *out);

/**
 * Exhaustive check of the map's claimed constants over the source ball of
 * `radius`. Writes the verdict to `out_pass` and, if `out_json` is not
 * NULL, the full report as JSON.
 *
 * # Safety
 * `f` must be a live handle, `out_pass` valid, `out_json` valid or NULL.
 */
enum QfStatus qf_audit(const struct QfMap *f,
                       uint32_t radius,
                       size_t budget,
                       bool *out_pass,
                       char **out_json);

/**
 * Følner profile CSV for `i = 1..=i_max`: the standard family for amenable
 * groups, word balls otherwise.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum QfStatus qf_folner_profile_csv(const struct QfGroup *g,
                                    uint32_t i_max,
                                    size_t budget,
                                    char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QIFORGE_H */
