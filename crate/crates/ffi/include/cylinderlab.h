#ifndef CYLINDERLAB_H
#define CYLINDERLAB_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ClStatus {
  CL_STATUS_OK = 0,
  /**
   * The call succeeded and the queried predicate is false.
   */
  CL_STATUS_FALSE = 1,
  CL_STATUS_NULL_POINTER = 2,
  CL_STATUS_INVALID_ARGUMENT = 3,
  CL_STATUS_NOT_PRIME = 4,
  CL_STATUS_WRONG_LENGTH = 5,
  CL_STATUS_PRECONDITION_VIOLATED = 6,
  CL_STATUS_SIZE_VIOLATION = 7,
  CL_STATUS_NOT_A_MULTISET = 8,
  CL_STATUS_LIFT_OBSTRUCTION = 9,
  CL_STATUS_PARSE = 10,
  CL_STATUS_INTERNAL = 11,
} ClStatus;

/**
 * Integer lift certificate.
 */
typedef struct ClCertificate ClCertificate;

/**
 * Integer weight on `F_p^3`.
 */
typedef struct ClWeight ClWeight;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next failing call on the same thread.
 */
const char *cl_last_error(void);

/**
 * Builds a weight from `len = p^3` values in point-index order.
 *
 * # Safety
 * `values` must point to `len` readable `int64_t`; `out` must be writable.
 */
enum ClStatus cl_weight_new(uint32_t p, const int64_t *values, size_t len, struct ClWeight **out);

/**
 * Parses `{"p": .., "values": [..]}`.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum ClStatus cl_weight_from_json(const char *json, struct ClWeight **out);

/**
 * # Safety
 * `w` must come from this library and not be used afterwards; null is ignored.
 */
void cl_weight_free(struct ClWeight *w);

/**
 * Number of values (`p^3`).
 *
 * # Safety
 * `w` must be a live handle; `out_len` must be writable.
 */
enum ClStatus cl_weight_len(const struct ClWeight *w, size_t *out_len);

/**
 * Copies the values into `buf`, which must hold exactly `len` entries.
 *
 * # Safety
 * `w` must be a live handle; `buf` must have room for `len` values.
 */
enum ClStatus cl_weight_values(const struct ClWeight *w, int64_t *buf, size_t len);

/**
 * `Ok` if every plane sum is divisible by p, `False` otherwise.
 *
 * # Safety
 * `w` must be a live handle.
 */
enum ClStatus cl_weight_is_p_divisible(const struct ClWeight *w);

/**
 * For a set of size `p^2`: `Ok` with the cylinder direction written to
 * `out_dir[0..3]`, or `False`.
 *
 * # Safety
 * `w` must be a live handle; `out_dir` must have room for three values.
 */
enum ClStatus cl_weight_is_cylinder(const struct ClWeight *w, uint32_t *out_dir);

/**
 * # Safety
 * `w` must be a live handle; `out` must be writable.
 */
enum ClStatus cl_lift_set(const struct ClWeight *w, struct ClCertificate **out);

/**
 * # Safety
 * `w` must be a live handle; `out` must be writable.
 */
enum ClStatus cl_lift_multiset(const struct ClWeight *w, struct ClCertificate **out);

/**
 * # Safety
 * `c` must come from this library and not be used afterwards; null is ignored.
 */
void cl_certificate_free(struct ClCertificate *c);

/**
 * `Ok` if the certificate evaluates exactly to its target, `False` otherwise.
 *
 * # Safety
 * `c` must be a live handle.
 */
enum ClStatus cl_certificate_verify(const struct ClCertificate *c);

/**
 * # Safety
 * `c` must be a live handle; `out` must be writable. Free the result
 * with [`cl_string_free`].
 */
enum ClStatus cl_certificate_to_json(const struct ClCertificate *c, char **out);

/**
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum ClStatus cl_certificate_from_json(const char *json, struct ClCertificate **out);

/**
 * # Safety
 * `w` must be a live handle; `out` must be writable. Free the result
 * with [`cl_string_free`].
 */
enum ClStatus cl_weight_to_json(const struct ClWeight *w, char **out);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards; null is ignored.
 */
void cl_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CYLINDERLAB_H */
