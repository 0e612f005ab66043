#ifndef FGALG_H
#define FGALG_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Which characteristic-class identity to check.
 */
typedef enum FgalgClassCheck {
  FGALG_CLASS_CHECK_GAMMA = 0,
  FGALG_CLASS_CHECK_EXTERIOR_RECURSION = 1,
} FgalgClassCheck;

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum FgalgStatus {
  FGALG_STATUS_OK = 0,
  FGALG_STATUS_NULL_POINTER = 1,
  FGALG_STATUS_INVALID_UTF8 = 2,
  FGALG_STATUS_PARSE = 3,
  FGALG_STATUS_DOMAIN = 4,
  FGALG_STATUS_STRUCTURAL = 5,
  FGALG_STATUS_PRECONDITION = 6,
  FGALG_STATUS_SPAN_MISMATCH = 7,
  FGALG_STATUS_PANIC = 8,
} FgalgStatus;

/**
 * A truncated formal group law.
 */
typedef struct FgalgLaw FgalgLaw;

/**
 * A root system.
 */
typedef struct FgalgRootSystem FgalgRootSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. The pointer stays
 * valid until the next call into the library on this thread.
 */
const char *fgalg_last_error(void);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void fgalg_string_free(char *s);

/**
 * Builds the root system with the given label, e.g. `"B3"`.
 *
 * # Safety
 * `label` must be a nul-terminated string and `out` writable.
 */
enum FgalgStatus fgalg_root_system_new(const char *label, struct FgalgRootSystem **out);

/**
 * # Safety
 * `rs` must come from [`fgalg_root_system_new`] and not have been freed.
 */
void fgalg_root_system_free(struct FgalgRootSystem *rs);

/**
 * Rank and Weyl group order.
 *
 * # Safety
 * `rs` must be a live handle; the outputs must be writable.
 */
enum FgalgStatus fgalg_root_system_info(const struct FgalgRootSystem *rs,
                                        uint32_t *rank,
                                        uint64_t *weyl_order);

/**
 * Builds a law from a spec such as `"multiplicative"`, `"symbolic"` or
 * `"elliptic:1,1,1,1,1"` over `ring` (`"Z"`, `"Q"`, `"Z/<m>"`), truncated
 * at total degree `trunc`.
 *
 * # Safety
 * The strings must be nul-terminated and `out` writable.
 */
enum FgalgStatus fgalg_law_new(const char *spec,
                               const char *ring,
                               uint32_t trunc,
                               struct FgalgLaw **out);

/**
 * # Safety
 * `law` must come from [`fgalg_law_new`] and not have been freed.
 */
void fgalg_law_free(struct FgalgLaw *law);

/**
 * The law as text in `u`, `v`; free with [`fgalg_string_free`].
 *
 * # Safety
 * `law` must be a live handle and `out` writable.
 */
enum FgalgStatus fgalg_law_display(const struct FgalgLaw *law, char **out);

/**
 * Writes whether unit, commutativity and associativity all hold.
 *
 * # Safety
 * `law` must be a live handle and `pass` writable.
 */
enum FgalgStatus fgalg_law_verify_axioms(const struct FgalgLaw *law, bool *pass);

/**
 * The exponent `τ_d` from `from` to `to` with default generator pools.
 * `json_out` may be null; otherwise it receives the full report.
 *
 * # Safety
 * Handles must be live; `tau_out` writable; `json_out` null or writable.
 */
enum FgalgStatus fgalg_tau(const struct FgalgRootSystem *rs,
                           const struct FgalgLaw *from,
                           const struct FgalgLaw *to,
                           uint32_t d,
                           uint64_t *tau_out,
                           char **json_out);

/**
 * Flag-model diagnostics in degree `d` over `ring` (`"Z"`, `"Q"`,
 * `"Z[1/p,...]"`) as a JSON object.
 *
 * # Safety
 * Handles must be live, `ring` nul-terminated and `json_out` writable.
 */
enum FgalgStatus fgalg_flag_json(const struct FgalgRootSystem *rs,
                                 const struct FgalgLaw *law,
                                 uint32_t d,
                                 const char *ring,
                                 char **json_out);

/**
 * Runs a characteristic-class identity check for rank `r` with classes up
 * to `class_degree`; the law must be known to at least that degree.
 *
 * # Safety
 * `law` must be a live handle and `pass` writable.
 */
enum FgalgStatus fgalg_chern_check(const struct FgalgLaw *law,
                                   enum FgalgClassCheck check,
                                   uint32_t r,
                                   uint32_t class_degree,
                                   bool *pass);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FGALG_H */
