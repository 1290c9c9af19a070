#ifndef EFFCONE_H
#define EFFCONE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EffconeStatus {
  /**
   * The call succeeded and every check it ran passed.
   */
  EFFCONE_STATUS_OK = 0,
  /**
   * The call succeeded but a verification failed; outputs are valid.
   */
  EFFCONE_STATUS_CHECK_FAILED = 1,
  EFFCONE_STATUS_INVALID_ARGUMENT = 2,
  EFFCONE_STATUS_NULL_POINTER = 3,
  EFFCONE_STATUS_INVALID_UTF8 = 4,
  /**
   * A panic was caught at the boundary.
   */
  EFFCONE_STATUS_INTERNAL = 5,
} EffconeStatus;

typedef enum EffconeSource {
  EFFCONE_SOURCE_DISPLAYED = 0,
  EFFCONE_SOURCE_TABLE = 1,
} EffconeSource;

/**
 * Opaque kernel certificate.
 */
typedef struct EffconeCertificate EffconeCertificate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until
 * the next call on the same thread.
 */
const char *effcone_last_error(void);

/**
 * Frees a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void effcone_string_free(char *s);

/**
 * Builds the system for `(g, n)`, computes its kernel and returns a
 * certificate. `CHECK_FAILED` means the kernel is nontrivial.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum EffconeStatus effcone_injectivity_certify(uint32_t g,
                                               uint32_t n,
                                               enum EffconeSource source,
                                               struct EffconeCertificate **out);

/**
 * Kernel dimension recorded in the certificate.
 *
 * # Safety
 * `cert` must be a live certificate or NULL (which yields `SIZE_MAX`).
 */
size_t effcone_certificate_kernel_dim(const struct EffconeCertificate *cert);

/**
 * Replays the certificate's elimination trace against a rebuilt system.
 *
 * # Safety
 * `cert` must be a live certificate.
 */
enum EffconeStatus effcone_certificate_check(const struct EffconeCertificate *cert);

/**
 * Certificate as JSON.
 *
 * # Safety
 * `cert` must be a live certificate and `out` a valid pointer.
 */
enum EffconeStatus effcone_certificate_to_json(const struct EffconeCertificate *cert, char **out);

/**
 * # Safety
 * `cert` must come from this library and not be freed twice. NULL is
 * ignored.
 */
void effcone_certificate_free(struct EffconeCertificate *cert);

/**
 * `g! ∏ m_i²` as a decimal string; `len` must equal `g`.
 *
 * # Safety
 * `mults` must point to `len` integers and `out` be a valid pointer.
 */
enum EffconeStatus effcone_theta_degree(uint32_t g, const int64_t *mults, size_t len, char **out);

/**
 * Fiber-count report for `y² = f(x)` over `F_{p^ext}` as JSON.
 *
 * # Safety
 * `f` must be a NUL-terminated string and `out` a valid pointer.
 */
enum EffconeStatus effcone_fiber_report(uint32_t p,
                                        uint32_t ext_degree,
                                        const char *f,
                                        int64_t d1,
                                        int64_t d2,
                                        uint32_t kmax,
                                        size_t samples,
                                        uint64_t seed,
                                        char **out);

/**
 * Number of rational points of `X(d^1..d^m)` on `y² = x³ + a x + b`;
 * `signatures` is a JSON list of integer lists.
 *
 * # Safety
 * `signatures` must be a NUL-terminated string and `out` a valid pointer.
 */
enum EffconeStatus effcone_strata_count(uint32_t p,
                                        uint32_t ext_degree,
                                        int64_t a,
                                        int64_t b,
                                        const char *signatures,
                                        uint64_t *out);

/**
 * Checks a graph given as JSON (same format as the CLI) and returns the
 * report as JSON.
 *
 * # Safety
 * `graph_json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum EffconeStatus effcone_twist_check(const char *graph_json, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EFFCONE_H */
