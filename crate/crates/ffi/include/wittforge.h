#ifndef WITTFORGE_H
#define WITTFORGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a call. The numeric values match the command-line exit codes.
 */
typedef enum WfStatus {
  /**
   * The call succeeded and every check passed.
   */
  WF_STATUS_OK = 0,
  /**
   * The call succeeded and a check failed; the report says which.
   */
  WF_STATUS_CHECK_FAILED = 1,
  /**
   * Bad input: null pointer, invalid UTF-8, malformed document, unknown preset.
   */
  WF_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The adaptive degree bound hit its ceiling.
   */
  WF_STATUS_INCONCLUSIVE = 3,
  /**
   * An internal error was caught at the boundary.
   */
  WF_STATUS_INTERNAL = 4,
} WfStatus;

/**
 * A weight module over `Q` or `Q(sqrt(d))`.
 */
typedef struct WfModule WfModule;

/**
 * Builds a named preset module.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a writable pointer.
 */
enum WfStatus wf_module_preset(const char *name, struct WfModule **out);

/**
 * Parses a module document.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum WfStatus wf_module_from_json(const char *json, struct WfModule **out);

/**
 * Releases a module. Null is ignored.
 *
 * # Safety
 * `m` must come from this library and not be used afterwards.
 */
void wf_module_free(struct WfModule *m);

/**
 * Serializes a module to its JSON document.
 *
 * # Safety
 * `m` must be a live module and `out` a writable pointer.
 */
enum WfStatus wf_module_to_json(const struct WfModule *m, char **out);

/**
 * Checks the module axioms; `radius` bounds the concrete window near exceptions.
 *
 * # Safety
 * `m` must be a live module and `out` a writable pointer.
 */
enum WfStatus wf_module_check_axioms(const struct WfModule *m, int64_t radius, char **out);

/**
 * Does `Ω^{(order)}` with step `h` annihilate the module?
 *
 * # Safety
 * `m` must be a live module and `out` a writable pointer.
 */
enum WfStatus wf_annihilates(const struct WfModule *m, uint32_t order, int64_t h, char **out);

/**
 * Verifies the quadratic differentiator identity symbolically for `(m, r)`.
 *
 * # Safety
 * `out` must be a writable pointer.
 */
enum WfStatus wf_verify_identity(uint32_t m, uint32_t r, char **out);

/**
 * Builds the A-cover and certifies uniform rank on weights `-window..=window`.
 *
 * # Safety
 * `m` must be a live module and `out` a writable pointer.
 */
enum WfStatus wf_cover_certificate(const struct WfModule *m, int64_t window, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void wf_string_free(char *s);

/**
 * The diagnostic of the last failing call on this thread, or an empty string.
 * Valid until the next call into the library on the same thread.
 */
const char *wf_last_error_message(void);

#endif  /* WITTFORGE_H */
