#ifndef MODECAP_H
#define MODECAP_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. Domain and resolution codes match the CLI exit codes.
 */
typedef enum ModecapStatus {
  MODECAP_STATUS_OK = 0,
  MODECAP_STATUS_NULL_POINTER = 1,
  MODECAP_STATUS_DOMAIN = 3,
  MODECAP_STATUS_RESOLUTION = 5,
  MODECAP_STATUS_OUT_OF_RANGE = 6,
  MODECAP_STATUS_PANIC = 7,
} ModecapStatus;

/**
 * Opaque per-mode bandwidth table.
 */
typedef struct ModecapProfile ModecapProfile;

/**
 * Opaque validated scenario.
 */
typedef struct ModecapScenario ModecapScenario;

/**
 * Physical scenario parameters in SI units.
 */
typedef struct ModecapScenarioParams {
  double radius;
  double mid_freq;
  double half_bandwidth;
  double obs_time;
  double wave_speed;
  double threshold;
  double snr_alpha_max;
} ModecapScenarioParams;

typedef struct ModecapDof {
  double d1;
  double d2;
  double d3;
  double total;
  double t_eff;
} ModecapDof;

typedef struct ModecapModeBandwidth {
  uintptr_t n;
  double critical_freq;
  double band_lo;
  double band_hi;
  double eff_bandwidth;
} ModecapModeBandwidth;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next call into this library from the same thread.
 */
const char *modecap_last_error_message(void);

enum ModecapStatus modecap_scenario_new(const struct ModecapScenarioParams *params,
                                        struct ModecapScenario **out);

/**
 * Scenario from normalized parameters at mid-band `mid_freq` and wave
 * speed `wave_speed`, with threshold 1.
 */
enum ModecapStatus modecap_scenario_from_normalized(double a,
                                                    double b,
                                                    double d,
                                                    double rho,
                                                    double mid_freq,
                                                    double wave_speed,
                                                    struct ModecapScenario **out);

void modecap_scenario_free(struct ModecapScenario *scenario);

/**
 * The degrees-of-freedom bound with its three terms.
 */
enum ModecapStatus modecap_dof_bound(const struct ModecapScenario *scenario,
                                     struct ModecapDof *out);

/**
 * The bound from normalized parameters alone.
 */
enum ModecapStatus modecap_dof_normalized(double a, double b, double d, double rho, double *out);

enum ModecapStatus modecap_truncation_indices(const struct ModecapScenario *scenario,
                                              uintptr_t *n_min,
                                              uintptr_t *n_max);

enum ModecapStatus modecap_critical_frequency(const struct ModecapScenario *scenario,
                                              uintptr_t n,
                                              double *out);

/**
 * Per-mode bandwidth table for modes `0..=N_max`.
 */
enum ModecapStatus modecap_profile_new(const struct ModecapScenario *scenario,
                                       struct ModecapProfile **out);

/**
 * Number of rows in the table; 0 for a null handle.
 */
uintptr_t modecap_profile_len(const struct ModecapProfile *profile);

enum ModecapStatus modecap_profile_get(const struct ModecapProfile *profile,
                                       uintptr_t index,
                                       struct ModecapModeBandwidth *out);

void modecap_profile_free(struct ModecapProfile *profile);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MODECAP_H */
