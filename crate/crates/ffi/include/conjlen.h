#ifndef CONJLEN_H
#define CONJLEN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes; the numeric values match the command-line exit codes.
 */
typedef enum ConjlenStatus {
  CONJLEN_STATUS_OK = 0,
  CONJLEN_STATUS_NOT_CONJUGATE = 1,
  CONJLEN_STATUS_INVALID_INPUT = 2,
  CONJLEN_STATUS_SEARCH_EXHAUSTED = 3,
  CONJLEN_STATUS_CAP_EXCEEDED = 4,
  CONJLEN_STATUS_NULL_POINTER = 5,
  CONJLEN_STATUS_INTERNAL = 6,
} ConjlenStatus;

/**
 * A validated group configuration.
 */
typedef struct ConjlenGroup ConjlenGroup;

/**
 * Parses a JSON group configuration and stores a new handle in `*out`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` valid for writing.
 */
enum ConjlenStatus conjlen_group_from_json(const char *json, struct ConjlenGroup **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `group` must come from `conjlen_group_from_json` and not be freed twice.
 */
void conjlen_group_free(struct ConjlenGroup *group);

/**
 * Canonical form of a word, e.g. `(0,(2),0)`.
 *
 * # Safety
 * `group` must be a live handle, `word` a NUL-terminated string and `out`
 * valid for writing.
 */
enum ConjlenStatus conjlen_normal_form(const struct ConjlenGroup *group,
                                       const char *word,
                                       char **out);

/**
 * Decides conjugacy of two words. Writes a JSON report to `*report` and
 * returns `Ok`, `NotConjugate` or `SearchExhausted`. When conjugate, the
 * witness is shortened within a ball of radius `radius`.
 *
 * # Safety
 * `group` must be a live handle, `u` and `v` NUL-terminated strings and
 * `report` valid for writing.
 */
enum ConjlenStatus conjlen_conjugate(const struct ConjlenGroup *group,
                                     const char *u,
                                     const char *v,
                                     size_t radius,
                                     char **report);

/**
 * Exact word length, read from a ball of radius `radius`.
 *
 * # Safety
 * `group` must be a live handle, `word` a NUL-terminated string and `out`
 * valid for writing.
 */
enum ConjlenStatus conjlen_word_length(const struct ConjlenGroup *group,
                                       const char *word,
                                       size_t radius,
                                       size_t *out);

/**
 * Message describing the last failure on this thread, or an empty string.
 * The pointer stays valid until the next library call on the same thread.
 */
const char *conjlen_last_error(void);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void conjlen_string_free(char *s);

/**
 * Library version as a static string.
 */
const char *conjlen_version(void);

#endif  /* CONJLEN_H */
