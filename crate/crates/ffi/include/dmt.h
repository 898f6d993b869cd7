#ifndef DMT_H
#define DMT_H

#include <stddef.h>
#include <stdint.h>

typedef enum {
  DMT_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  DMT_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not UTF-8, or a buffer was too small.
   */
  DMT_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The input text could not be parsed.
   */
  DMT_STATUS_PARSE = 3,
  /**
   * The input is well formed but not a valid complex or function.
   */
  DMT_STATUS_INVALID_INPUT = 4,
  /**
   * The values break the Morse conditions.
   */
  DMT_STATUS_NOT_MORSE = 5,
  /**
   * The complex is above the exhaustive-search bound.
   */
  DMT_STATUS_TOO_LARGE = 6,
  /**
   * The arguments do not satisfy the operation's preconditions.
   */
  DMT_STATUS_PRECONDITION = 7,
  /**
   * No admissible edge path joins the two minima.
   */
  DMT_STATUS_NO_PATH = 8,
  /**
   * A checked theorem or property did not hold on this input.
   */
  DMT_STATUS_THEOREM_VIOLATION = 9,
  /**
   * An internal invariant failed; please report it.
   */
  DMT_STATUS_INTERNAL = 10,
} DmtStatus;

/**
 * An immutable simplicial complex.
 */
typedef struct DmtComplex DmtComplex;

/**
 * A validated discrete Morse function together with its complex.
 */
typedef struct DmtMorse DmtMorse;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the last failing call on this thread, or null. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *dmt_last_error(void);

/**
 * The library version as a static NUL-terminated string.
 */
const char *dmt_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void dmt_string_free(char *s);

/**
 * # Safety
 * `c` must be null or a handle returned by this library and not yet freed.
 */
void dmt_complex_free(DmtComplex *c);

/**
 * # Safety
 * `m` must be null or a handle returned by this library and not yet freed.
 */
void dmt_morse_free(DmtMorse *m);

/**
 * Parses `.scx` text. The complex is always stored in `out_complex`; the
 * function is stored in `out_morse` when the text carries values and null
 * otherwise. `out_morse` may be null when the caller only wants the complex.
 *
 * # Safety
 * `text` must be a NUL-terminated string; the out pointers must be valid
 * for writes or null where allowed.
 */
DmtStatus dmt_parse_scx(const char *text, DmtComplex **out_complex, DmtMorse **out_morse);

/**
 * Parses an OFF mesh into the closure of its faces.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` valid for writes.
 */
DmtStatus dmt_parse_off(const char *text, DmtComplex **out);

/**
 * Number of simplices.
 *
 * # Safety
 * `c` must be a live handle.
 */
size_t dmt_complex_len(const DmtComplex *c);

/**
 * Dimension, or -1 for a null handle or the empty complex.
 *
 * # Safety
 * `c` must be null or a live handle.
 */
int64_t dmt_complex_dim(const DmtComplex *c);

/**
 * Euler characteristic.
 *
 * # Safety
 * `c` must be a live handle and `out` valid for writes.
 */
DmtStatus dmt_complex_euler(const DmtComplex *c, int64_t *out);

/**
 * Betti numbers over the two-element field, one per dimension.
 *
 * # Safety
 * `c` must be a live handle, `buf` valid for `cap` writes (or null when
 * `cap` is 0) and `out_len` valid for writes.
 */
DmtStatus dmt_complex_betti(const DmtComplex *c, size_t *buf, size_t cap, size_t *out_len);

/**
 * Discrete geometric category of the whole complex by exhaustive search.
 *
 * # Safety
 * `c` must be a live handle and `out` valid for writes.
 */
DmtStatus dmt_complex_dgcat(const DmtComplex *c, int64_t *out);

/**
 * The complex as `.scx` text without values.
 *
 * # Safety
 * `c` must be a live handle and `out` valid for writes.
 */
DmtStatus dmt_complex_to_scx(const DmtComplex *c, char **out);

/**
 * A random Morse function on `c`, deterministic in `seed`.
 *
 * # Safety
 * `c` must be a live handle and `out` valid for writes.
 */
DmtStatus dmt_morse_random(const DmtComplex *c, uint64_t seed, DmtMorse **out);

/**
 * A random connected complex on at most `max_vertices` vertices with a
 * random Morse function on it.
 *
 * # Safety
 * `out` must be valid for writes.
 */
DmtStatus dmt_random_instance(uint64_t seed, size_t max_vertices, size_t max_dim, DmtMorse **out);

/**
 * A new handle to the complex the function lives on.
 *
 * # Safety
 * `m` must be a live handle and `out` valid for writes.
 */
DmtStatus dmt_morse_complex(const DmtMorse *m, DmtComplex **out);

/**
 * Number of critical simplices in each dimension `0..=dim`.
 *
 * # Safety
 * `m` must be a live handle, `buf` valid for `cap` writes (or null when
 * `cap` is 0) and `out_len` valid for writes.
 */
DmtStatus dmt_morse_critical_counts(const DmtMorse *m, size_t *buf, size_t cap, size_t *out_len);

/**
 * The mountain-pass value between the critical vertices `min0` (lower) and
 * `min1`, with the vertices of the critical edge carrying it.
 *
 * # Safety
 * `m` must be a live handle; `out_value` and `out_edge` (two entries) must
 * be valid for writes.
 */
DmtStatus dmt_mountain_pass(const DmtMorse *m,
                            size_t min0,
                            size_t min1,
                            double *out_value,
                            size_t *out_edge);

/**
 * The function as `.scx` text.
 *
 * # Safety
 * `m` must be a live handle and `out` valid for writes.
 */
DmtStatus dmt_morse_to_scx(const DmtMorse *m, char **out);

/**
 * The Hasse diagram in DOT, with critical cells and gradient pairs marked.
 *
 * # Safety
 * `m` must be a live handle and `out` valid for writes.
 */
DmtStatus dmt_morse_to_dot(const DmtMorse *m, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DMT_H */
