#ifndef NILPOW_H
#define NILPOW_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result of every call.
 */
typedef enum NilpowStatus {
  NILPOW_STATUS_OK = 0,
  NILPOW_STATUS_NULL_POINTER = 1,
  NILPOW_STATUS_INVALID_ARGUMENT = 2,
  NILPOW_STATUS_BUDGET_EXCEEDED = 3,
  NILPOW_STATUS_NOT_FOUND = 4,
  NILPOW_STATUS_INTERNAL = 5,
  NILPOW_STATUS_PANIC = 6,
} NilpowStatus;

typedef enum NilpowVerdict {
  NILPOW_VERDICT_VERIFIED = 0,
  NILPOW_VERDICT_INCONCLUSIVE = 1,
} NilpowVerdict;

typedef struct NilpowCertificate NilpowCertificate;

/*
 A validated presentation together with its word basis.
 */
typedef struct NilpowSpec NilpowSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version as a static NUL-terminated string.
 */
const char *nilpow_version(void);

/*
 Message for the last failed call on this thread; empty if none. Valid
 until the next failing call on the same thread.
 */
const char *nilpow_last_error(void);

/*
 Builds a presentation with `m` generators of nil exponents `nil[0..m]`.
 `field` is `"fp:<p>"` or `"q"`; NULL means F_32003. `budget` caps the
 dimension of any component touched; 0 selects the default.

 # Safety
 `nil` must point to `m` readable values, `field` must be NULL or a
 NUL-terminated string, and `out` must be writable.
 */
enum NilpowStatus nilpow_spec_new(const uint32_t *nil,
                                  size_t m,
                                  const char *field,
                                  size_t max_degree,
                                  uint64_t budget,
                                  struct NilpowSpec **out);

/*
 # Safety
 `spec` must be NULL or a handle from [`nilpow_spec_new`] not yet freed.
 */
void nilpow_spec_free(struct NilpowSpec *spec);

/*
 Number of normal words of length `degree`, i.e. `dim A_degree`.

 # Safety
 `spec` must be a live handle and `out` writable.
 */
enum NilpowStatus nilpow_normal_word_count(const struct NilpowSpec *spec,
                                           size_t degree,
                                           uint64_t *out);

/*
 Writes `dim A^[level]_d` for `d = 1..=D` into `out[0..D]`; `len` must
 be at least `D`.

 # Safety
 `spec` must be a live handle and `out` must have room for `len` values.
 */
enum NilpowStatus nilpow_derived_dims(const struct NilpowSpec *spec,
                                      size_t level,
                                      uint64_t *out,
                                      size_t len);

/*
 Least `n ≤ D` with `A_n ⊆ id(A^[k])`. Returns `NotFound` (and writes 0)
 when the ideal does not fill any component through `D`.

 # Safety
 `spec` must be a live handle and `out` writable.
 */
enum NilpowStatus nilpow_nilpotency_index(const struct NilpowSpec *spec, size_t k, size_t *out);

/*
 Runs the generation pipeline for `A^[i]`, `i ≥ 1`. An inconclusive run
 still returns `Ok` with a certificate; inspect its verdict.

 # Safety
 `spec` must be a live handle and `out` writable.
 */
enum NilpowStatus nilpow_certify(const struct NilpowSpec *spec,
                                 size_t i,
                                 uint64_t seed,
                                 struct NilpowCertificate **out);

/*
 # Safety
 `cert` must be a live certificate handle and `out` writable.
 */
enum NilpowStatus nilpow_certificate_verdict(const struct NilpowCertificate *cert,
                                             enum NilpowVerdict *out);

/*
 The certificate as JSON, identical to the CLI output. Release with
 [`nilpow_string_free`].

 # Safety
 `cert` must be a live certificate handle and `out` writable.
 */
enum NilpowStatus nilpow_certificate_json(const struct NilpowCertificate *cert, char **out);

/*
 # Safety
 `cert` must be NULL or a handle from [`nilpow_certify`] not yet freed.
 */
void nilpow_certificate_free(struct NilpowCertificate *cert);

/*
 # Safety
 `s` must be NULL or a string returned by this library, not yet freed.
 */
void nilpow_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NILPOW_H */
