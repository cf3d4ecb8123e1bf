#ifndef STRATCLASS_H
#define STRATCLASS_H

/* This header is generated by cbindgen from stratclass-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum {
  SC_STATUS_OK = 0,
  SC_STATUS_NULL_ARGUMENT = 1,
  SC_STATUS_INVALID_CONFIG = 2,
  SC_STATUS_NUMERIC_FAILURE = 3,
  SC_STATUS_INVALID_UTF8 = 4,
  SC_STATUS_PANIC = 5,
} ScStatus;

/**
 * Classification regimes exposed through the ABI.
 */
typedef enum {
  SC_REGIME_NO_MANIPULATION = 0,
  SC_REGIME_MANIPULATION = 1,
  SC_REGIME_PROPORTIONAL_SUBSIDY = 2,
  SC_REGIME_FLAT_SUBSIDY = 3,
} ScRegime;

/**
 * Opaque solve result; render with `sc_report_json` / `sc_report_summary`.
 */
typedef struct ScReport ScReport;

/**
 * Opaque parsed-and-validated scenario handle.
 */
typedef struct ScScenario ScScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *sc_version(void);

/**
 * Last error message for this thread, or NULL when none was recorded.
 * The caller owns the returned string (release with `sc_string_free`).
 */
char *sc_last_error_message(void);

/**
 * Parse and validate a scenario from a JSON config string.
 *
 * On success writes a scenario handle to `out` and returns `SC_OK`.
 *
 * # Safety
 * `json` must point to a NUL-terminated string; `out` must be a valid
 * pointer to pointer.
 */
ScStatus sc_scenario_from_json(const char *json, ScScenario **out);

/**
 * Release a scenario handle.
 *
 * # Safety
 * `scenario` must come from `sc_scenario_from_json` and not be freed twice.
 */
void sc_scenario_free(ScScenario *scenario);

/**
 * Solve one regime of the scenario.
 *
 * # Safety
 * `scenario` must be a live handle; `out` must be a valid pointer to
 * pointer.
 */
ScStatus sc_equilibrium_run(const ScScenario *scenario,
                            ScRegime regime,
                            uint64_t seed,
                            ScReport **out);

/**
 * Recompute the published worked-example table.
 *
 * Writes a report whose JSON carries per-row pass/fail entries; returns
 * `SC_OK` whether or not documented discrepancies are present.
 *
 * # Safety
 * `out` must be a valid pointer to pointer.
 */
ScStatus sc_reproduce_paper(ScReport **out);

/**
 * Render a report as pretty-printed JSON. Caller frees via `sc_string_free`.
 *
 * # Safety
 * `report` must be a live handle.
 */
char *sc_report_json(const ScReport *report);

/**
 * Render a short human summary. Caller frees via `sc_string_free`.
 *
 * # Safety
 * `report` must be a live handle.
 */
char *sc_report_summary(const ScReport *report);

/**
 * Release a report handle.
 *
 * # Safety
 * `report` must come from this library and not be freed twice.
 */
void sc_report_free(ScReport *report);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `ptr` must come from this library and not be freed twice.
 */
void sc_string_free(char *ptr);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STRATCLASS_H */
