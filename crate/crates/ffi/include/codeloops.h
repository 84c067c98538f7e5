#ifndef CODELOOPS_H
#define CODELOOPS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum ClStatus {
  CL_STATUS_OK = 0,
  CL_STATUS_NULL_POINTER = 1,
  CL_STATUS_INVALID_ARGUMENT = 2,
  CL_STATUS_NOT_DOUBLY_EVEN = 3,
  CL_STATUS_DEPENDENT_BASIS = 4,
  CL_STATUS_NOT_IN_CODE = 5,
  CL_STATUS_CAPACITY = 6,
  CL_STATUS_PARSE = 7,
  CL_STATUS_FORMAT = 8,
  CL_STATUS_IO = 9,
  CL_STATUS_UNKNOWN_BUILTIN = 10,
  CL_STATUS_PANIC = 99,
} ClStatus;

typedef struct ClCode ClCode;

typedef struct ClFragment ClFragment;

typedef struct ClTable ClTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *cl_version(void);

/**
 * Copies the calling thread's last error message into `buf` (NUL
 * terminated, truncated to `len`). Returns the full message length
 * excluding the terminator.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t cl_last_error_message(char *buf, size_t len);

/**
 * Looks up a built-in code by name.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum ClStatus cl_code_builtin(const char *name, struct ClCode **out);

/**
 * Parses the text code format (`n k` then one row per line).
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum ClStatus cl_code_parse(const char *text, struct ClCode **out);

/**
 * Builds a code of length `length` from `count` basis words.
 *
 * # Safety
 * `rows` must point to `count` readable words; `out` must be writable.
 */
enum ClStatus cl_code_from_rows(uint32_t length,
                                const uint64_t *rows,
                                size_t count,
                                struct ClCode **out);

/**
 * # Safety
 * `code` must be null or a handle from a `cl_code_*` constructor, freed once.
 */
void cl_code_free(struct ClCode *code);

/**
 * Code dimension `k`, or 0 for a null handle.
 *
 * # Safety
 * `code` must be null or a live handle.
 */
size_t cl_code_dimension(const struct ClCode *code);

/**
 * Code length `n`, or 0 for a null handle.
 *
 * # Safety
 * `code` must be null or a live handle.
 */
size_t cl_code_length(const struct ClCode *code);

/**
 * Basis row `i`.
 *
 * # Safety
 * `code` must be a live handle; `out` must be writable.
 */
enum ClStatus cl_code_basis_word(const struct ClCode *code, size_t i, uint64_t *out);

/**
 * # Safety
 * `code` must be a live handle; `out` must be writable.
 */
enum ClStatus cl_code_is_doubly_even(const struct ClCode *code, bool *out);

/**
 * Runs the cocycle builder.
 *
 * # Safety
 * `code` must be a live handle; `out` must be writable.
 */
enum ClStatus cl_table_build(const struct ClCode *code, uint8_t choice_bit, struct ClTable **out);

/**
 * # Safety
 * `table` must be null or a handle from `cl_table_build`/`cl_table_read`, freed once.
 */
void cl_table_free(struct ClTable *table);

/**
 * Side length `2^k`, or 0 for a null handle.
 *
 * # Safety
 * `table` must be null or a live handle.
 */
size_t cl_table_size(const struct ClTable *table);

/**
 * Entry at canonical indices `(row, col)`.
 *
 * # Safety
 * `table` must be a live handle; `out` must be writable.
 */
enum ClStatus cl_table_get(const struct ClTable *table, size_t row, size_t col, uint8_t *out);

/**
 * `theta(v, w)` for two codewords.
 *
 * # Safety
 * `table` must be a live handle; `out` must be writable.
 */
enum ClStatus cl_table_value(const struct ClTable *table, uint64_t v, uint64_t w, uint8_t *out);

/**
 * Checks normalization and both pair identities exhaustively, and the
 * twisted cocycle and Moufang identities on triples: exhaustively when
 * `sample_count` is 0, otherwise on `sample_count` seeded samples each.
 *
 * # Safety
 * `table` must be a live handle; `pass` must be writable.
 */
enum ClStatus cl_table_verify(const struct ClTable *table,
                              uint64_t sample_count,
                              uint64_t seed,
                              bool *pass);

/**
 * Writes the table as CLT1.
 *
 * # Safety
 * `table` must be a live handle; `path` a NUL-terminated string.
 */
enum ClStatus cl_table_write(const struct ClTable *table, const char *path);

/**
 * Reads a CLT1 file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum ClStatus cl_table_read(const char *path, struct ClTable **out);

/**
 * Multiplies `(sign_a, word_a)` by `(sign_b, word_b)` in the code loop.
 *
 * # Safety
 * `table` must be a live handle; both out-pointers must be writable.
 */
enum ClStatus cl_loop_multiply(const struct ClTable *table,
                               uint8_t sign_a,
                               uint64_t word_a,
                               uint8_t sign_b,
                               uint64_t word_b,
                               uint8_t *out_sign,
                               uint64_t *out_word);

/**
 * Compresses a table with V spanned by the first `v_dim` basis rows.
 *
 * # Safety
 * `table` must be a live handle; `out` must be writable.
 */
enum ClStatus cl_fragment_compress(const struct ClTable *table,
                                   size_t v_dim,
                                   struct ClFragment **out);

/**
 * # Safety
 * `fragment` must be null or a handle from `cl_fragment_compress`, freed once.
 */
void cl_fragment_free(struct ClFragment *fragment);

/**
 * Number of distinct stored values, or 0 for a null handle.
 *
 * # Safety
 * `fragment` must be null or a live handle.
 */
uint64_t cl_fragment_stored_values(const struct ClFragment *fragment);

/**
 * `theta(c1, c2)` reconstructed from the fragment; `reduced` evaluates
 * through the derived W x V block.
 *
 * # Safety
 * `fragment` must be a live handle; `out` must be writable.
 */
enum ClStatus cl_fragment_eval(const struct ClFragment *fragment,
                               uint64_t c1,
                               uint64_t c2,
                               bool reduced,
                               uint8_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CODELOOPS_H */
