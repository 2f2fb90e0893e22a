/*
 * pev-mzi C API: single-photon Mach-Zehnder interferometer simulation with a
 * spacetime (t, x) wavefunction and step-wise projection evolution.
 *
 * All functions return a PevStatus code; PEV_OK is 0. On failure,
 * pev_last_error() returns a thread-local message describing the problem.
 * Objects are opaque handles owned by the caller via the matching _free().
 */
#ifndef PEVMZI_H
#define PEVMZI_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct PevScenario PevScenario;
typedef struct PevResult PevResult;

/* Mirrors the CLI exit codes: 2 config/usage, 3 physics. */
typedef enum PevStatus {
  PEV_OK = 0,
  PEV_ERR_CONFIG = 2,
  PEV_ERR_PHYSICS = 3,
  PEV_ERR_IO = 4,
  PEV_ERR_INVALID = 5
} PevStatus;

typedef enum PevMode {
  PEV_MODE_CLOSED_FORM = 0,
  PEV_MODE_PIPELINE = 1,
  PEV_MODE_BOTH = 2
} PevMode;

typedef enum PevDetector { PEV_DETECTOR_D1 = 0, PEV_DETECTOR_D2 = 1 } PevDetector;

const char* pev_version(void);

/* Thread-local message for the most recent failure in this thread. */
const char* pev_last_error(void);

/* ---- scenarios ---------------------------------------------------------- */

int pev_preset_count(size_t* count);
int pev_preset_name(size_t index, const char** name);

int pev_scenario_preset(const char* name, PevScenario** out);
int pev_scenario_from_file(const char* path, PevScenario** out);
int pev_scenario_from_string(const char* config_text, PevScenario** out);
/* Copy with one sweepable parameter replaced (omega_t, omega_x, kappa1,
 * kappa2, bs1.present_t, bs2.present_t). */
int pev_scenario_with_param(const PevScenario* s, const char* key,
                            const char* value, PevScenario** out);
void pev_scenario_free(PevScenario* s);

/* Canonical config text; release with pev_string_free. */
int pev_scenario_render(const PevScenario* s, char** out_text);
void pev_string_free(char* text);

/* 16 hex characters + NUL. */
int pev_scenario_digest(const PevScenario* s, char out_hex[17]);

int pev_scenario_warning_count(const PevScenario* s, size_t* count);
/* Message storage lives on the scenario handle. */
int pev_scenario_warning(const PevScenario* s, size_t index, const char** message);

/* ---- runs --------------------------------------------------------------- */

int pev_run(const PevScenario* s, int mode, PevResult** out);
void pev_result_free(PevResult* r);

int pev_result_totals(const PevResult* r, double* p_d1, double* p_d2);
int pev_result_curve_length(const PevResult* r, size_t* count);
int pev_result_curve_point(const PevResult* r, int detector, size_t index,
                           double* t_bar, double* probability);
/* Both mode only: max pointwise |engine - closed form| density. */
int pev_result_discrepancy(const PevResult* r, double* max_abs);
/* Totals drift against a 2h grid (NaN when 2h is unusable). */
int pev_result_convergence_delta(const PevResult* r, double* delta);
int pev_result_step_count(const PevResult* r, size_t* count);
int pev_result_step(const PevResult* r, size_t index, const char** tau_label,
                    const char** op, double* pre_norm, double* post_norm);
int pev_result_wall_ms(const PevResult* r, double* ms);
int pev_result_digest(const PevResult* r, char out_hex[17]);

/* ---- auxiliary ---------------------------------------------------------- */

/* Runs the step pipeline and writes the final-state binary dump. */
int pev_dump_state(const PevScenario* s, const char* path);

/* Regenerates the derived-values fixture CSV. */
int pev_oracle_regen(const char* path);

#ifdef __cplusplus
}
#endif

#endif /* PEVMZI_H */
