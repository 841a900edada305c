#ifndef QVAR_H
#define QVAR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes shared by every entry point.
 */
typedef enum QvarStatus {
  QVAR_STATUS_OK = 0,
  QVAR_STATUS_INVALID_ARGUMENT = 1,
  QVAR_STATUS_PARSE_ERROR = 2,
  QVAR_STATUS_HYPOTHESIS_VIOLATED = 3,
  QVAR_STATUS_VERIFICATION_FAILED = 4,
  QVAR_STATUS_INTERNAL_ERROR = 5,
} QvarStatus;

/**
 * Opaque instance handle.
 */
typedef struct QvarInstance QvarInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread; empty if none.
 */
const char *qvar_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be null or a pointer previously returned through a `char **`
 * output of this library, released at most once.
 */
void qvar_string_free(char *s);

/**
 * Parses an instance file (JSON text) into a handle.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string; `out` a valid pointer.
 */
enum QvarStatus qvar_instance_parse(const char *json, struct QvarInstance **out);

/**
 * Loads a built-in instance by registry name.
 *
 * # Safety
 * `name` must be a valid NUL-terminated string; `out` a valid pointer.
 */
enum QvarStatus qvar_instance_from_catalog(const char *name, struct QvarInstance **out);

/**
 * Releases an instance handle.
 *
 * # Safety
 * `inst` must be null or a handle from this library, released at most once.
 */
void qvar_instance_free(struct QvarInstance *inst);

/**
 * Serializes the instance back to its canonical file form.
 *
 * # Safety
 * `inst` must be a live handle; `out` a valid pointer.
 */
enum QvarStatus qvar_instance_to_json(const struct QvarInstance *inst, char **out);

/**
 * Writes the separation class label (`T1`, `T0`, or `not-T0`).
 *
 * # Safety
 * `inst` must be a live handle; `out` a valid pointer.
 */
enum QvarStatus qvar_separation_class(const struct QvarInstance *inst, char **out);

/**
 * Checks the gauge axioms; writes the violation count.
 *
 * # Safety
 * `inst` must be a live handle; `violations_out` a valid pointer.
 */
enum QvarStatus qvar_validate(const struct QvarInstance *inst, uintptr_t *violations_out);

/**
 * Runs a solver and writes a self-contained, already re-verified
 * certificate file. `principle` is one of `ekeland`, `scaled-ekeland`,
 * `takahashi`, `caristi`, `arutyunov`, `oettli-thera`. `start` may be null
 * for the default start point. `option` carries the principle-specific
 * extra: the discount factor `p/q` for `arutyunov`, `weak`/`strong` for
 * `caristi`; null otherwise.
 *
 * # Safety
 * `inst` must be a live handle; strings valid or null as documented; `out`
 * a valid pointer.
 */
enum QvarStatus qvar_solve(const struct QvarInstance *inst,
                           const char *principle,
                           const char *objective,
                           const char *start,
                           const char *option,
                           char **out);

/**
 * Re-checks a certificate file produced by `qvar_solve` (or the CLI).
 * Returns `Ok` when it verifies and `VerificationFailed` with a message in
 * `qvar_last_error` when it does not.
 *
 * # Safety
 * `cert_json` must be a valid NUL-terminated string.
 */
enum QvarStatus qvar_verify(const char *cert_json);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* QVAR_H */
