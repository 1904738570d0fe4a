#ifndef WAVELQG_WAVELQG_H
#define WAVELQG_WAVELQG_H

/* Closed-form LQR / Kalman filter / LQG synthesis for the wave equation on a
 * ring of n sites.
 *
 * Every function returns a wlqg_status. On failure a message describing the
 * error is available from wlqg_last_error() on the calling thread until the
 * next call into the library. Strings returned through char** out-parameters
 * are owned by the caller and released with wlqg_string_free(). Opaque handles
 * are released with their matching *_destroy function; passing NULL to a
 * destroy function is a no-op. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(WLQG_BUILDING_LIBRARY)
#    define WLQG_API __declspec(dllexport)
#  else
#    define WLQG_API __declspec(dllimport)
#  endif
#else
#  define WLQG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wlqg_status {
  WLQG_OK = 0,
  WLQG_INVALID_ARGUMENT = 1, /* NULL pointer, index out of range, bad buffer size */
  WLQG_DOMAIN = 2,           /* parameter outside its admissible range */
  WLQG_SYMMETRY = 3,         /* spectrum is not conjugate symmetric */
  WLQG_CONVERGENCE = 4,      /* iterative solver did not converge */
  WLQG_NOT_STABILIZABLE = 5,
  WLQG_INFEASIBLE = 6,
  WLQG_NUMERIC = 7,
  WLQG_INSTABILITY = 8,      /* simulation diverged */
  WLQG_INTERNAL = 9,
  WLQG_PARSE = 10,           /* malformed JSON or schema violation */
  WLQG_OUT_OF_MEMORY = 11
} wlqg_status;

typedef struct wlqg_nondim {
  double pi1;
  double pi2;
  double pi3;
  double pi4;
  size_t n;
} wlqg_nondim;

typedef struct wlqg_dimensional {
  double c;
  double dx;
  size_t n;
  double q1;
  double q2;
  double r;
  double sigma_m;
  double sigma_d;
  double alpha;
} wlqg_dimensional;

typedef enum wlqg_gain_kind { WLQG_LQR = 0, WLQG_KF = 1 } wlqg_gain_kind;

typedef struct wlqg_report {
  double j_lqr;
  double j_kf;
  double j_lqg;
  double offdiag_k1;
  double offdiag_k2;
  double offdiag_l1;
  double offdiag_l2;
  double residual_lqr_decentral;
  double residual_kf_decentral;
} wlqg_report;

typedef struct wlqg_sweep_row {
  wlqg_nondim params;
  wlqg_report report;
  size_t pi1_index;
  size_t pi34_index;
  int on_curve_lqr;
  int on_curve_kf;
} wlqg_sweep_row;

typedef struct wlqg_sweep_grid {
  const double* pi1_values;
  size_t pi1_count;
  const double* pi34_values;
  size_t pi34_count;
  double pi2;
  size_t n;
  int tie_pi3_pi4; /* nonzero: pi3 = pi4 = axis value; zero: pi4 only, pi3 = pi3_fixed */
  double pi3_fixed;
  unsigned threads; /* 0 = hardware concurrency, capped by WAVELQG_THREADS */
} wlqg_sweep_grid;

typedef struct wlqg_sim_config {
  wlqg_nondim params;
  double dt;
  double t_final;
  uint64_t seed;
  double burn_in; /* fraction of the horizon excluded from averages */
  size_t n_realizations;
  double noise_scale; /* 0 gives a deterministic run */
  const double* initial_state;    /* 2n entries or NULL for zero */
  const double* initial_estimate; /* 2n entries or NULL for zero */
  size_t record_stride;           /* 0: no trajectory recorded */
  unsigned threads;
} wlqg_sim_config;

typedef struct wlqg_sim_summary {
  double empirical_lqg_cost;
  double empirical_lqg_cost_stderr;
  double empirical_est_err_cov_trace;
  double empirical_est_err_cov_trace_stderr;
  double analytic_lqg_cost;
  double analytic_kf_cost;
  size_t steps;
} wlqg_sim_summary;

typedef struct wlqg_gains wlqg_gains;
typedef struct wlqg_sweep wlqg_sweep;
typedef struct wlqg_sim wlqg_sim;

WLQG_API const char* wlqg_version(void);
WLQG_API const char* wlqg_status_string(wlqg_status status);
WLQG_API const char* wlqg_last_error(void);
WLQG_API void wlqg_string_free(char* s);

WLQG_API wlqg_nondim wlqg_nondim_default(void);
WLQG_API wlqg_sim_config wlqg_sim_config_default(void);

WLQG_API wlqg_status wlqg_nondim_validate(const wlqg_nondim* p);
WLQG_API wlqg_status wlqg_nondimensionalize(const wlqg_dimensional* in, wlqg_nondim* out);
/* Closed-loop quantities (LQG cost, simulation) need r == sigma_d so the
 * regulator and the filter share one state scaling; WLQG_DOMAIN otherwise. */
WLQG_API wlqg_status wlqg_check_matched_scaling(const wlqg_dimensional* in);
/* out_lqr = pi1 - 2/pi3, out_kf = pi1 - 2/pi4. */
WLQG_API wlqg_status wlqg_locality_residuals(const wlqg_nondim* p, double* out_lqr, double* out_kf);
/* Either schema (pi1..pi4 + n, or the dimensional fields) is accepted. */
WLQG_API wlqg_status wlqg_params_from_json(const char* json, wlqg_nondim* out);
WLQG_API wlqg_status wlqg_params_to_json(const wlqg_nondim* p, char** out_json);

WLQG_API wlqg_status wlqg_gains_synthesize(const wlqg_nondim* p, wlqg_gain_kind kind, wlqg_gains** out);
WLQG_API wlqg_status wlqg_gains_from_json(const char* json, wlqg_gains** out);
WLQG_API void wlqg_gains_destroy(wlqg_gains* g);
WLQG_API wlqg_status wlqg_gains_kind(const wlqg_gains* g, wlqg_gain_kind* out);
WLQG_API wlqg_status wlqg_gains_size(const wlqg_gains* g, size_t* out_n);
/* block is 1 or 2: (K1, K2) for LQR and (L1, L2) for KF. buf holds n doubles. */
WLQG_API wlqg_status wlqg_gains_first_row(const wlqg_gains* g, int block, double* buf, size_t len);
/* Per-frequency base gain (K0 for LQR, L0 for KF) and its companion. */
WLQG_API wlqg_status wlqg_gains_spectral(const wlqg_gains* g, double* base, double* companion, size_t len);
WLQG_API wlqg_status wlqg_gains_offdiag(const wlqg_gains* g, double* out_block1, double* out_block2);
WLQG_API wlqg_status wlqg_gains_is_decentralized(const wlqg_gains* g, int* out);
WLQG_API wlqg_status wlqg_gains_to_json(const wlqg_gains* g, char** out_json);

WLQG_API wlqg_status wlqg_report_compute(const wlqg_nondim* p, wlqg_report* out);
WLQG_API wlqg_status wlqg_report_to_json(const wlqg_report* r, char** out_json);
WLQG_API wlqg_status wlqg_report_from_json(const char* json, wlqg_report* out);
WLQG_API wlqg_status wlqg_lqg_cost_dual(const wlqg_nondim* p, double* out);

/* Closed-loop spectra: abscissae of A - BK, A - LC and the augmented LQG loop,
 * plus the separation-principle eigenvalue mismatch. */
WLQG_API wlqg_status wlqg_closed_loop_check(const wlqg_nondim* p, double* abscissa_regulator,
                                            double* abscissa_estimator, double* abscissa_augmented,
                                            double* separation_mismatch);

WLQG_API wlqg_status wlqg_sweep_run(const wlqg_sweep_grid* grid, wlqg_sweep** out);
/* Points on pi1 = 2/pi3 = 2/pi4. */
WLQG_API wlqg_status wlqg_curve_run(const double* pi1_values, size_t count, double pi2, size_t n,
                                    unsigned threads, wlqg_sweep** out);
WLQG_API void wlqg_sweep_destroy(wlqg_sweep* s);
WLQG_API wlqg_status wlqg_sweep_rows(const wlqg_sweep* s, size_t* out_count);
WLQG_API wlqg_status wlqg_sweep_row_at(const wlqg_sweep* s, size_t index, wlqg_sweep_row* out);
WLQG_API wlqg_status wlqg_sweep_csv(const wlqg_sweep* s, char** out_csv);
/* Columns pi1, j_kf, j_lqr, j_lqg. */
WLQG_API wlqg_status wlqg_sweep_curve_csv(const wlqg_sweep* s, char** out_csv);
/* count log-spaced values from lo to hi inclusive. */
WLQG_API wlqg_status wlqg_log_grid(double lo, double hi, size_t count, double* buf);

WLQG_API wlqg_status wlqg_simulate(const wlqg_sim_config* cfg, wlqg_sim** out);
WLQG_API void wlqg_sim_destroy(wlqg_sim* s);
WLQG_API wlqg_status wlqg_sim_summary_get(const wlqg_sim* s, wlqg_sim_summary* out);
WLQG_API wlqg_status wlqg_sim_summary_json(const wlqg_sim* s, char** out_json);
/* Columns t, running_cost, phi_0..phi_{n-1}, dphi_0.., est_phi_0.., est_dphi_0.., u_0.. */
WLQG_API wlqg_status wlqg_sim_trajectory_csv(const wlqg_sim* s, char** out_csv);
WLQG_API double wlqg_sim_max_dt(const wlqg_nondim* p);
/* count draws of N(0, (I - pi1 D2)^{-1}), row-major into buf (count * n entries). */
WLQG_API wlqg_status wlqg_sample_correlated_noise(double pi1, size_t n, uint64_t seed, size_t count,
                                                  double* buf);

/* Runs the oracle-agreement suite. gains_json may be NULL or a gain-set JSON
 * document to compare against fresh synthesis. *passed is 1 when every check
 * is within tolerance. */
WLQG_API wlqg_status wlqg_verify(const wlqg_nondim* p, const char* gains_json, int* passed, char** report_json);

#ifdef __cplusplus
}
#endif

#endif
