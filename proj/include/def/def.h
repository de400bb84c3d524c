#ifndef DEF_DEF_H
#define DEF_DEF_H

/* C interface to the delay-embedding analysis library.
 *
 * Conventions:
 *   - Every fallible call returns def_status and, on failure, stores a
 *     thread-local message readable through def_last_error(). Handle
 *     out-parameters are set to NULL on failure.
 *   - Handles own their data and are released with the matching _free
 *     call; freeing NULL is a no-op. Handles are independent copies, so
 *     freeing one never invalidates another.
 *   - Scalar getters return 0 (or NaN where noted) when passed NULL.
 *   - Array getters copy into caller storage. `capacity` is the element
 *     count of the destination; a capacity smaller than the row count
 *     fails with DEF_INVALID_ARGUMENT. A NULL destination column is
 *     skipped. Matrices copy row-major.
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum def_status {
  DEF_OK = 0,
  DEF_INVALID_ARGUMENT = 1, /* bad handle, size, or parameter */
  DEF_IO_ERROR = 2,         /* file missing, unparsable, or unwritable */
  DEF_NUMERIC_ERROR = 3,    /* solver failure or non-finite intermediate */
  DEF_OUT_OF_RANGE = 4,     /* index outside the valid window */
  DEF_INTERNAL_ERROR = 5    /* anything else; see def_last_error() */
} def_status;

/* Message for the most recent failure on this thread; empty string when
 * the last call on this thread succeeded. The pointer stays valid until
 * the next library call on the same thread. */
const char* def_last_error(void);

/* Library version as "major.minor.patch". */
const char* def_version(void);

/* ------------------------------------------------------------------ */
/* Time series                                                         */

typedef struct def_series def_series;
typedef struct def_input def_input;

/* n >= 2 finite samples at spacing dt > 0. `name` may be NULL. */
def_status def_series_create(const double* samples, size_t n, double dt,
                             const char* name, def_series** out);

/* One CSV column as a series. `column` selects by header name or 0-based
 * index; NULL or "" means the first column. dt is supplied out-of-band. */
def_status def_series_load(const char* path, const char* column, double dt,
                           def_series** out);

/* One sample per line, %.17g. `header` nonzero writes a "y" header. */
def_status def_series_save(const def_series* s, const char* path, int header);

/* series + i.i.d. Gaussian draws of the given variance; pure in
 * (series, variance, seed). */
def_status def_series_add_noise(const def_series* s, double variance,
                                uint64_t seed, def_series** out);

size_t def_series_size(const def_series* s);
double def_series_dt(const def_series* s); /* NaN on NULL */
def_status def_series_values(const def_series* s, double* out, size_t capacity);
void def_series_free(def_series* s);

/* Multichannel exogenous input. `data` is channel-major: channel c,
 * sample i at data[c*n + i]; m channels of n samples each. */
def_status def_input_create(const double* data, size_t m, size_t n, double dt,
                            def_input** out);
void def_input_free(def_input* u);

/* ------------------------------------------------------------------ */
/* Benchmark generator: switched-mass oscillator under a piecewise      */
/* constant force (half-sine rise to `amplitude`, plateau, half-sine    */
/* fall), observed with additive Gaussian noise.                        */

typedef struct def_toy_config {
  double k;              /* spring constant, > 0 */
  double m0;             /* mass before the switch at t1, > 0 */
  double m1;             /* mass from t1 on, > 0 */
  double amplitude;      /* plateau height of the forced displacement */
  double t0;             /* rise start */
  double t1;             /* fall start (also the mass switch), > t0 + rise */
  size_t n_samples;      /* >= 2 */
  double dt;             /* > 0 */
  double noise_variance; /* >= 0, applied to position only */
  uint64_t seed;
} def_toy_config;

/* The stock benchmark schedule: amplitude 1, rise half-period 1000, fall
 * half-period 100, switches at 5000 and 10000, 15000 unit-step samples,
 * observation noise variance 1e-6, seed 1. */
void def_toy_benchmark_config(def_toy_config* out);

def_status def_toy_validate(const def_toy_config* cfg);

/* Closed-form simulation from rest. `velocity` may be NULL. */
def_status def_toy_simulate(const def_toy_config* cfg, def_series** position,
                            def_series** velocity);

/* Designed force level at time t. */
def_status def_toy_input_at(const def_toy_config* cfg, double t, double* out);

def_status def_toy_write_config_json(const def_toy_config* cfg, const char* path);

/* ------------------------------------------------------------------ */
/* Delay-coordinate snapshot matrices                                   */

typedef struct def_matrices def_matrices;

/* Snapshot pair over the index range (m1, m2]; requires d <= m1 < m2 <= N.
 * Passing m1 = 0 and m2 = 0 selects the default full range (d, N). */
def_status def_matrices_build(const def_series* s, size_t d, size_t m1,
                              size_t m2, def_matrices** out);
void def_matrices_free(def_matrices* m);

/* ------------------------------------------------------------------ */
/* Linear identification                                                */

typedef struct def_model def_model;
typedef struct def_forced_model def_forced_model;

/* Least-squares step operator of the snapshot pair. */
def_status def_identify(const def_matrices* m, def_model** out);

size_t def_model_order(const def_model* h);
double def_model_fit_error(const def_model* h); /* NaN on NULL */
int def_model_rank_deficient(const def_model* h);
/* d*d row-major copy of the operator. */
def_status def_model_operator(const def_model* h, double* out, size_t capacity);
void def_model_free(def_model* h);

/* Joint fit with stacked input lags built over the same range. */
def_status def_identify_forced(const def_matrices* m, const def_input* u,
                               def_forced_model** out);

size_t def_forced_model_order(const def_forced_model* h);
size_t def_forced_model_channels(const def_forced_model* h);
double def_forced_model_fit_error(const def_forced_model* h); /* NaN on NULL */
int def_forced_model_rank_deficient(const def_forced_model* h);
/* d*d and d*(d*m) row-major copies. */
def_status def_forced_model_a(const def_forced_model* h, double* out, size_t capacity);
def_status def_forced_model_b(const def_forced_model* h, double* out, size_t capacity);
/* The homogeneous part as a standalone model handle. */
def_status def_forced_model_linear_part(const def_forced_model* h, def_model** out);
void def_forced_model_free(def_forced_model* h);

/* ------------------------------------------------------------------ */
/* Order selection                                                      */

typedef struct def_selection def_selection;

/* L-ahead information criterion at a single order. */
def_status def_aic(const def_series* s, size_t d, size_t l_horizon,
                   double sigma2, double* out);

/* Sweep over candidate orders; infeasible candidates stay in the report
 * with NaN values but never win the argmin. */
def_status def_select_order(const def_series* s, const size_t* candidates,
                            size_t count, size_t l_horizon, double sigma2,
                            def_selection** out);

size_t def_selection_d_star(const def_selection* h);
size_t def_selection_count(const def_selection* h);
/* Parallel per-candidate columns; any destination may be NULL. */
def_status def_selection_values(const def_selection* h, size_t* d_out,
                                double* aic_out, int* feasible_out,
                                size_t capacity);
/* "d,aic" CSV; infeasible candidates carry nan. */
def_status def_selection_write_csv(const def_selection* h, const char* path);
def_status def_selection_write_json(const def_selection* h, const char* path);
void def_selection_free(def_selection* h);

/* Per-horizon relative criterion curves: AIC(d; L) minus the curve's own
 * minimum, over the deduplicated sorted d grid. Every (d, L) pair must be
 * feasible. */
typedef struct def_aic_curves def_aic_curves;

def_status def_aic_curves_compute(const def_series* s, const size_t* d_grid,
                                  size_t grid_count, const size_t* l_list,
                                  size_t horizon_count, double sigma2,
                                  def_aic_curves** out);
size_t def_aic_curves_grid_count(const def_aic_curves* h);
size_t def_aic_curves_horizon_count(const def_aic_curves* h);
def_status def_aic_curves_grid(const def_aic_curves* h, size_t* out, size_t capacity);
def_status def_aic_curves_horizons(const def_aic_curves* h, size_t* out, size_t capacity);
/* Relative values for one horizon, ordered like the grid. */
def_status def_aic_curves_values(const def_aic_curves* h, size_t l_horizon,
                                 double* out, size_t capacity);
void def_aic_curves_free(def_aic_curves* h);

/* ------------------------------------------------------------------ */
/* Mode decomposition                                                   */

typedef struct def_modes def_modes;
typedef struct def_spectrum def_spectrum;

typedef enum def_estimator {
  DEF_ESTIMATOR_EXP_BASIS = 0,   /* sum_k y[n-k] e^{nu k dt} */
  DEF_ESTIMATOR_PROJECTION = 1   /* x_d[n]^T V_i */
} def_estimator;

/* Eigenmodes of an identified operator with fitted exponents and decay
 * time constants. `residual_flag_threshold` <= 0 selects the default
 * (1e-3). Degenerate near-zero eigenvalues are dropped. */
def_status def_modes_build(const def_model* model,
                           double residual_flag_threshold, def_modes** out);

size_t def_modes_count(const def_modes* h);
double def_modes_min_eigen_gap(const def_modes* h); /* NaN on NULL */
int def_modes_rank_deficient(const def_modes* h);
/* Per-mode columns; any destination may be NULL. Time constants use +inf
 * below the decay floor, with the matching decay sign set to 0. */
def_status def_modes_values(const def_modes* h, double* eig_re, double* eig_im,
                            double* nu_re, double* nu_im,
                            double* time_constants, int* decay_signs,
                            size_t capacity);
def_status def_modes_write_json(const def_modes* h, const def_selection* sel,
                                const char* path);
void def_modes_free(def_modes* h);

/* Mode amplitudes of `s` at index n (requires d-1 <= n < N). */
def_status def_spectrum_at(const def_series* s, const def_modes* modes,
                           size_t n, def_estimator estimator,
                           def_spectrum** out);

/* Forced variant: removes the one-step input contribution first.
 * Requires n >= d-1 and n+1 < N. */
def_status def_spectrum_forced_at(const def_series* s, const def_input* u,
                                  const def_forced_model* model,
                                  const def_modes* modes, size_t n,
                                  def_spectrum** out);

size_t def_spectrum_size(const def_spectrum* h);
size_t def_spectrum_time_index(const def_spectrum* h);
size_t def_spectrum_order(const def_spectrum* h);
/* Entries sorted by time constant ascending (+inf last). Any destination
 * may be NULL. */
def_status def_spectrum_entries(const def_spectrum* h, double* time_constants,
                                double* magnitudes, double* amp_re,
                                double* amp_im, int* decay_signs,
                                size_t capacity);
/* "time_constant,amplitude_abs,amplitude_re,amplitude_im" CSV. */
def_status def_spectrum_write_csv(const def_spectrum* h, const char* path);
/* Reads the schema above; time index and order are not stored and come
 * back as 0. */
def_status def_spectrum_read_csv(const char* path, def_spectrum** out);
void def_spectrum_free(def_spectrum* h);

/* ------------------------------------------------------------------ */
/* End-to-end analysis                                                  */

typedef struct def_result def_result;

/* Order selection over `candidates`, refit at d*, mode decomposition,
 * and one amplitude spectrum per query index (input order kept). */
def_status def_analyze(const def_series* s, const size_t* candidates,
                       size_t candidate_count, size_t l_horizon, double sigma2,
                       const size_t* query_indices, size_t query_count,
                       def_estimator estimator, def_result** out);

/* Accessors return fresh owned handles. */
def_status def_result_selection(const def_result* h, def_selection** out);
def_status def_result_model(const def_result* h, def_model** out);
def_status def_result_modes(const def_result* h, def_modes** out);
size_t def_result_spectrum_count(const def_result* h);
def_status def_result_spectrum(const def_result* h, size_t index,
                               def_spectrum** out);
void def_result_free(def_result* h);

/* ------------------------------------------------------------------ */
/* Peak extraction                                                      */

typedef struct def_peaks def_peaks;

typedef struct def_peak_params {
  double w;      /* window width in natural-log time units, > 0 */
  double eps;    /* isolation stabilizer; < 0 selects the automatic
                  * 1e-12 * max amplitude */
  double theta;  /* dominance threshold for the full peak list, >= 0 */
  size_t k_top;  /* report size cap, >= 1 */
} def_peak_params;

/* The stock parameters: w 0.25, automatic eps, theta 0, k_top 6. */
void def_peak_params_init(def_peak_params* out);

/* Runs the extraction on the finite-time-constant part of the spectrum.
 * `params` may be NULL for the stock parameters. */
def_status def_peaks_extract(const def_spectrum* spectrum,
                             const def_peak_params* params, def_peaks** out);

size_t def_peaks_count(const def_peaks* h); /* diagnostics rows */
double def_peaks_eps_used(const def_peaks* h); /* NaN on NULL */
/* Per-mode diagnostics on the merged axis, log T ascending. `mode` points
 * back into the source spectrum entries. Any destination may be NULL. */
def_status def_peaks_diagnostics(const def_peaks* h, size_t* mode,
                                 double* time_constant, double* amplitude,
                                 double* baseline, double* prominence,
                                 double* background, double* isolation,
                                 double* score, int* candidate,
                                 size_t capacity);
size_t def_peaks_candidate_count(const def_peaks* h);
size_t def_peaks_all_count(const def_peaks* h);
size_t def_peaks_reported_count(const def_peaks* h);
/* Index lists into the diagnostics rows. */
def_status def_peaks_candidates(const def_peaks* h, size_t* out, size_t capacity);
def_status def_peaks_all(const def_peaks* h, size_t* out, size_t capacity);
def_status def_peaks_reported(const def_peaks* h, size_t* out, size_t capacity);
def_status def_peaks_write_json(const def_peaks* h, const def_selection* sel,
                                const char* path);
void def_peaks_free(def_peaks* h);

/* ------------------------------------------------------------------ */
/* Baselines                                                            */

typedef struct def_ssa def_ssa;
typedef struct def_dmd def_dmd;

/* Singular decomposition of the trajectory matrix; 2 <= window <= N-1. */
def_status def_ssa_decompose(const def_series* s, size_t window, def_ssa** out);
size_t def_ssa_rank(const def_ssa* h);
def_status def_ssa_singular_values(const def_ssa* h, double* out, size_t capacity);
/* Sum of the selected components, diagonally averaged back to a series. */
def_status def_ssa_reconstruct(const def_ssa* h, const size_t* components,
                               size_t count, def_series** out);
/* "component,value" long-form CSV of per-component reconstructions. */
def_status def_ssa_write_csv(const def_ssa* h, const size_t* components,
                             size_t count, const char* path);
void def_ssa_free(def_ssa* h);

/* Rank-r decomposition of the snapshot pair; rank 0 keeps the smallest
 * rank holding 99.9% of the squared singular-value energy (capped 200). */
def_status def_dmd_decompose(const def_matrices* m, size_t rank, def_dmd** out);
size_t def_dmd_rank(const def_dmd* h);
/* Per-mode columns; periods use +inf for non-oscillatory modes. Any
 * destination may be NULL. */
def_status def_dmd_values(const def_dmd* h, double* eig_re, double* eig_im,
                          double* periods, int* oscillatory,
                          double* contributions, size_t capacity);
/* "period,contribution,re_lambda,im_lambda,alpha,omega" CSV of the
 * oscillatory modes. */
def_status def_dmd_write_csv(const def_dmd* h, const char* path);
void def_dmd_free(def_dmd* h);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DEF_DEF_H */
