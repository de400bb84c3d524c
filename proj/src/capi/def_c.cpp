#include "def/def.h"

#include <cstring>
#include <limits>
#include <map>
#include <memory>
#include <new>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "core/baselines.hpp"
#include "core/errors.hpp"
#include "core/hankel.hpp"
#include "core/linear_model.hpp"
#include "core/peaks.hpp"
#include "core/result_io.hpp"
#include "core/spectrum.hpp"
#include "core/time_series.hpp"
#include "core/toy_model.hpp"

// Handles are thin owning wrappers; every accessor copies out, so no handle
// ever aliases another's storage.
struct def_series { def::TimeSeries v; };
struct def_input { def::InputSeries v; };
struct def_matrices { def::DelayMatrices v; };
struct def_model { def::IdentifiedModel v; };
struct def_forced_model { def::ForcedModel v; };
struct def_selection { def::OrderSelection v; };
struct def_aic_curves {
  std::map<std::size_t, std::vector<std::pair<std::size_t, double>>> v;
};
struct def_modes { def::ModeSet v; };
struct def_spectrum { def::AmplitudeSpectrum v; };
struct def_result { def::DefResult v; };
struct def_peaks { def::PeakReport v; };
struct def_ssa { def::SsaDecomposition v; };
struct def_dmd { def::DmdDecomposition v; };

namespace {

thread_local std::string g_last_error;

void clear_error() { g_last_error.clear(); }

def_status fail(def_status code, const char* what) {
  g_last_error = what ? what : "";
  return code;
}

// Translate the C++ error taxonomy; clears the message on success.
template <typename Fn>
def_status guarded(Fn&& fn) {
  try {
    clear_error();
    fn();
    return DEF_OK;
  } catch (const def::io_error& e) {
    return fail(DEF_IO_ERROR, e.what());
  } catch (const def::numeric_error& e) {
    return fail(DEF_NUMERIC_ERROR, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(DEF_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(DEF_OUT_OF_RANGE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(DEF_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(DEF_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(DEF_INTERNAL_ERROR, "unknown error");
  }
}

def_status require(bool ok, const char* what) {
  return ok ? DEF_OK : fail(DEF_INVALID_ARGUMENT, what);
}

// Out-parameter discipline: NULL the slot first so a failed call never
// leaves a dangling value behind.
template <typename Handle, typename Fn>
def_status make_handle(Handle** out, Fn&& build) {
  if (def_status s = require(out != nullptr, "output handle is null"); s != DEF_OK) return s;
  *out = nullptr;
  return guarded([&] { *out = new Handle{build()}; });
}

def_status check_capacity(std::size_t needed, std::size_t capacity) {
  if (capacity < needed)
    return fail(DEF_INVALID_ARGUMENT, "destination capacity is too small");
  clear_error();
  return DEF_OK;
}

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

def::ToyConfig to_core(const def_toy_config& c) {
  def::ToyConfig cfg;
  cfg.k = c.k;
  cfg.m0 = c.m0;
  cfg.m1 = c.m1;
  cfg.amplitude = c.amplitude;
  cfg.t0 = c.t0;
  cfg.t1 = c.t1;
  cfg.n_samples = c.n_samples;
  cfg.dt = c.dt;
  cfg.noise_variance = c.noise_variance;
  cfg.seed = c.seed;
  return cfg;
}

def::PeakParams to_core(const def_peak_params& p) {
  def::PeakParams params;
  params.w = p.w;
  if (p.eps >= 0.0) params.eps = p.eps;
  params.theta = p.theta;
  params.k_top = p.k_top;
  return params;
}

def::AmplitudeEstimator to_estimator(def_estimator e) {
  switch (e) {
    case DEF_ESTIMATOR_EXP_BASIS:
      return def::AmplitudeEstimator::kExponentialBasis;
    case DEF_ESTIMATOR_PROJECTION:
      return def::AmplitudeEstimator::kEigenvectorProjection;
  }
  throw std::invalid_argument("unknown estimator value");
}

def::ResultMeta meta_or_default(const def_selection* sel) {
  return sel ? def::meta_from(sel->v) : def::ResultMeta{};
}

def_status copy_indices(const std::vector<std::size_t>& src, size_t* out,
                        size_t capacity) {
  if (def_status s = require(out != nullptr, "destination is null"); s != DEF_OK)
    return s;
  if (def_status s = check_capacity(src.size(), capacity); s != DEF_OK) return s;
  std::memcpy(out, src.data(), src.size() * sizeof(size_t));
  return DEF_OK;
}

}  // namespace

extern "C" {

const char* def_last_error(void) { return g_last_error.c_str(); }

const char* def_version(void) { return "0.1.0"; }

/* ---------------------------- series ----------------------------- */

def_status def_series_create(const double* samples, size_t n, double dt,
                             const char* name, def_series** out) {
  if (def_status s = require(samples != nullptr || n == 0, "sample pointer is null");
      s != DEF_OK)
    return s;
  return make_handle(out, [&] {
    return def::make_series(std::vector<double>(samples, samples + n), dt,
                            name ? std::string(name) : std::string{});
  });
}

def_status def_series_load(const char* path, const char* column, double dt,
                           def_series** out) {
  if (def_status s = require(path != nullptr, "path is null"); s != DEF_OK) return s;
  return make_handle(out, [&] {
    return def::load_series(path, column ? std::string(column) : std::string{}, dt);
  });
}

def_status def_series_save(const def_series* s, const char* path, int header) {
  if (def_status st = require(s && path, "series or path is null"); st != DEF_OK) return st;
  return guarded([&] { def::save_series(s->v, path, header != 0); });
}

def_status def_series_add_noise(const def_series* s, double variance,
                                uint64_t seed, def_series** out) {
  if (def_status st = require(s != nullptr, "series handle is null"); st != DEF_OK) return st;
  return make_handle(out, [&] { return def::add_gaussian_noise(s->v, variance, seed); });
}

size_t def_series_size(const def_series* s) { return s ? s->v.size() : 0; }

double def_series_dt(const def_series* s) { return s ? s->v.dt : nan_value(); }

def_status def_series_values(const def_series* s, double* out, size_t capacity) {
  if (def_status st = require(s && out, "series or destination is null"); st != DEF_OK)
    return st;
  if (def_status st = check_capacity(s->v.size(), capacity); st != DEF_OK) return st;
  std::memcpy(out, s->v.samples.data(), s->v.size() * sizeof(double));
  return DEF_OK;
}

void def_series_free(def_series* s) { delete s; }

def_status def_input_create(const double* data, size_t m, size_t n, double dt,
                            def_input** out) {
  if (def_status s = require(data != nullptr, "input data pointer is null"); s != DEF_OK)
    return s;
  return make_handle(out, [&] {
    std::vector<std::vector<double>> channels(m);
    for (size_t c = 0; c < m; ++c)
      channels[c].assign(data + c * n, data + (c + 1) * n);
    return def::make_input(std::move(channels), dt);
  });
}

void def_input_free(def_input* u) { delete u; }

/* -------------------------- benchmark ---------------------------- */

void def_toy_benchmark_config(def_toy_config* out) {
  if (!out) return;
  const def::ToyConfig cfg = def::benchmark_config();
  out->k = cfg.k;
  out->m0 = cfg.m0;
  out->m1 = cfg.m1;
  out->amplitude = cfg.amplitude;
  out->t0 = cfg.t0;
  out->t1 = cfg.t1;
  out->n_samples = cfg.n_samples;
  out->dt = cfg.dt;
  out->noise_variance = cfg.noise_variance;
  out->seed = cfg.seed;
}

def_status def_toy_validate(const def_toy_config* cfg) {
  if (def_status s = require(cfg != nullptr, "config is null"); s != DEF_OK) return s;
  return guarded([&] { def::validate(to_core(*cfg)); });
}

def_status def_toy_simulate(const def_toy_config* cfg, def_series** position,
                            def_series** velocity) {
  if (def_status s = require(cfg && position, "config or position output is null");
      s != DEF_OK)
    return s;
  *position = nullptr;
  if (velocity) *velocity = nullptr;
  return guarded([&] {
    def::ToyResult r = def::simulate(to_core(*cfg));
    auto pos = std::make_unique<def_series>(def_series{std::move(r.position)});
    if (velocity) *velocity = new def_series{std::move(r.velocity)};
    *position = pos.release();
  });
}

def_status def_toy_input_at(const def_toy_config* cfg, double t, double* out) {
  if (def_status s = require(cfg && out, "config or output is null"); s != DEF_OK) return s;
  return guarded([&] {
    def::ToyConfig core = to_core(*cfg);
    def::validate(core);
    *out = def::designed_input(core, t);
  });
}

def_status def_toy_write_config_json(const def_toy_config* cfg, const char* path) {
  if (def_status s = require(cfg && path, "config or path is null"); s != DEF_OK) return s;
  return guarded([&] { def::write_toy_config_json(to_core(*cfg), path); });
}

/* --------------------------- matrices ---------------------------- */

def_status def_matrices_build(const def_series* s, size_t d, size_t m1,
                              size_t m2, def_matrices** out) {
  if (def_status st = require(s != nullptr, "series handle is null"); st != DEF_OK)
    return st;
  return make_handle(out, [&] {
    const size_t lo = (m1 == 0 && m2 == 0) ? d : m1;
    const size_t hi = (m1 == 0 && m2 == 0) ? s->v.size() : m2;
    return def::build_matrices(s->v, d, lo, hi);
  });
}

void def_matrices_free(def_matrices* m) { delete m; }

/* ------------------------ identification ------------------------- */

def_status def_identify(const def_matrices* m, def_model** out) {
  if (def_status s = require(m != nullptr, "matrices handle is null"); s != DEF_OK)
    return s;
  return make_handle(out, [&] { return def::identify(m->v); });
}

size_t def_model_order(const def_model* h) { return h ? h->v.d : 0; }

double def_model_fit_error(const def_model* h) { return h ? h->v.fit_error : nan_value(); }

int def_model_rank_deficient(const def_model* h) {
  return h && h->v.rank_deficient ? 1 : 0;
}

def_status def_model_operator(const def_model* h, double* out, size_t capacity) {
  if (def_status s = require(h && out, "model or destination is null"); s != DEF_OK)
    return s;
  const size_t d = h->v.d;
  if (def_status s = check_capacity(d * d, capacity); s != DEF_OK) return s;
  for (size_t r = 0; r < d; ++r)
    for (size_t c = 0; c < d; ++c)
      out[r * d + c] = h->v.a_tilde(Eigen::Index(r), Eigen::Index(c));
  return DEF_OK;
}

void def_model_free(def_model* h) { delete h; }

def_status def_identify_forced(const def_matrices* m, const def_input* u,
                               def_forced_model** out) {
  if (def_status s = require(m && u, "matrices or input handle is null"); s != DEF_OK)
    return s;
  return make_handle(out, [&] {
    const def::InputDelayMatrices lags =
        def::build_input_matrices(u->v, m->v.d, m->v.m1, m->v.m2);
    return def::identify_forced(m->v, lags);
  });
}

size_t def_forced_model_order(const def_forced_model* h) { return h ? h->v.d : 0; }

size_t def_forced_model_channels(const def_forced_model* h) { return h ? h->v.m : 0; }

double def_forced_model_fit_error(const def_forced_model* h) {
  return h ? h->v.fit_error : nan_value();
}

int def_forced_model_rank_deficient(const def_forced_model* h) {
  return h && h->v.rank_deficient ? 1 : 0;
}

def_status def_forced_model_a(const def_forced_model* h, double* out, size_t capacity) {
  if (def_status s = require(h && out, "model or destination is null"); s != DEF_OK)
    return s;
  const size_t d = h->v.d;
  if (def_status s = check_capacity(d * d, capacity); s != DEF_OK) return s;
  for (size_t r = 0; r < d; ++r)
    for (size_t c = 0; c < d; ++c)
      out[r * d + c] = h->v.a_tilde(Eigen::Index(r), Eigen::Index(c));
  return DEF_OK;
}

def_status def_forced_model_b(const def_forced_model* h, double* out, size_t capacity) {
  if (def_status s = require(h && out, "model or destination is null"); s != DEF_OK)
    return s;
  const size_t rows = h->v.d;
  const size_t cols = h->v.d * h->v.m;
  if (def_status s = check_capacity(rows * cols, capacity); s != DEF_OK) return s;
  for (size_t r = 0; r < rows; ++r)
    for (size_t c = 0; c < cols; ++c)
      out[r * cols + c] = h->v.b_tilde(Eigen::Index(r), Eigen::Index(c));
  return DEF_OK;
}

def_status def_forced_model_linear_part(const def_forced_model* h, def_model** out) {
  if (def_status s = require(h != nullptr, "model handle is null"); s != DEF_OK) return s;
  return make_handle(out, [&] {
    def::IdentifiedModel model;
    model.a_tilde = h->v.a_tilde;
    model.d = h->v.d;
    model.dt = h->v.dt;
    model.fit_error = h->v.fit_error;
    model.rank = h->v.rank;
    model.rank_deficient = h->v.rank_deficient;
    model.n_source = h->v.n_source;
    return model;
  });
}

void def_forced_model_free(def_forced_model* h) { delete h; }

/* ------------------------ order selection ------------------------ */

def_status def_aic(const def_series* s, size_t d, size_t l_horizon,
                   double sigma2, double* out) {
  if (def_status st = require(s && out, "series or output is null"); st != DEF_OK)
    return st;
  return guarded([&] { *out = def::aic(s->v, d, l_horizon, sigma2); });
}

def_status def_select_order(const def_series* s, const size_t* candidates,
                            size_t count, size_t l_horizon, double sigma2,
                            def_selection** out) {
  if (def_status st = require(s && (candidates || count == 0),
                              "series or candidate list is null");
      st != DEF_OK)
    return st;
  return make_handle(out, [&] {
    return def::select_order(s->v, std::vector<std::size_t>(candidates, candidates + count),
                             l_horizon, sigma2);
  });
}

size_t def_selection_d_star(const def_selection* h) { return h ? h->v.d_star : 0; }

size_t def_selection_count(const def_selection* h) {
  return h ? h->v.candidates.size() : 0;
}

def_status def_selection_values(const def_selection* h, size_t* d_out,
                                double* aic_out, int* feasible_out,
                                size_t capacity) {
  if (def_status s = require(h != nullptr, "selection handle is null"); s != DEF_OK)
    return s;
  const size_t n = h->v.candidates.size();
  if (def_status s = check_capacity(n, capacity); s != DEF_OK) return s;
  for (size_t i = 0; i < n; ++i) {
    if (d_out) d_out[i] = h->v.candidates[i];
    if (aic_out) aic_out[i] = h->v.aic_values[i];
    if (feasible_out) feasible_out[i] = h->v.feasible[i] ? 1 : 0;
  }
  return DEF_OK;
}

def_status def_selection_write_csv(const def_selection* h, const char* path) {
  if (def_status s = require(h && path, "selection or path is null"); s != DEF_OK)
    return s;
  return guarded([&] { def::write_aic_csv(h->v, path); });
}

def_status def_selection_write_json(const def_selection* h, const char* path) {
  if (def_status s = require(h && path, "selection or path is null"); s != DEF_OK)
    return s;
  return guarded([&] { def::write_selection_json(h->v, path); });
}

void def_selection_free(def_selection* h) { delete h; }

def_status def_aic_curves_compute(const def_series* s, const size_t* d_grid,
                                  size_t grid_count, const size_t* l_list,
                                  size_t horizon_count, double sigma2,
                                  def_aic_curves** out) {
  if (def_status st = require(s && (d_grid || grid_count == 0) && (l_list || horizon_count == 0),
                              "series or grid pointer is null");
      st != DEF_OK)
    return st;
  return make_handle(out, [&] {
    return def::relative_aic_curves(
        s->v, std::vector<std::size_t>(d_grid, d_grid + grid_count),
        std::vector<std::size_t>(l_list, l_list + horizon_count), sigma2);
  });
}

size_t def_aic_curves_grid_count(const def_aic_curves* h) {
  return h && !h->v.empty() ? h->v.begin()->second.size() : 0;
}

size_t def_aic_curves_horizon_count(const def_aic_curves* h) {
  return h ? h->v.size() : 0;
}

def_status def_aic_curves_grid(const def_aic_curves* h, size_t* out, size_t capacity) {
  if (def_status s = require(h && out, "curves or destination is null"); s != DEF_OK)
    return s;
  const size_t n = def_aic_curves_grid_count(h);
  if (def_status s = check_capacity(n, capacity); s != DEF_OK) return s;
  const auto& curve = h->v.begin()->second;
  for (size_t i = 0; i < n; ++i) out[i] = curve[i].first;
  return DEF_OK;
}

def_status def_aic_curves_horizons(const def_aic_curves* h, size_t* out, size_t capacity) {
  if (def_status s = require(h && out, "curves or destination is null"); s != DEF_OK)
    return s;
  if (def_status s = check_capacity(h->v.size(), capacity); s != DEF_OK) return s;
  size_t i = 0;
  for (const auto& [l, curve] : h->v) out[i++] = l;
  return DEF_OK;
}

def_status def_aic_curves_values(const def_aic_curves* h, size_t l_horizon,
                                 double* out, size_t capacity) {
  if (def_status s = require(h && out, "curves or destination is null"); s != DEF_OK)
    return s;
  const auto it = h->v.find(l_horizon);
  if (it == h->v.end())
    return fail(DEF_INVALID_ARGUMENT, "horizon is not part of the computed curves");
  if (def_status s = check_capacity(it->second.size(), capacity); s != DEF_OK) return s;
  for (size_t i = 0; i < it->second.size(); ++i) out[i] = it->second[i].second;
  return DEF_OK;
}

void def_aic_curves_free(def_aic_curves* h) { delete h; }

/* ---------------------------- modes ------------------------------ */

def_status def_modes_build(const def_model* model,
                           double residual_flag_threshold, def_modes** out) {
  if (def_status s = require(model != nullptr, "model handle is null"); s != DEF_OK)
    return s;
  return make_handle(out, [&] {
    return residual_flag_threshold > 0.0
               ? def::build_mode_set(model->v, residual_flag_threshold)
               : def::build_mode_set(model->v);
  });
}

size_t def_modes_count(const def_modes* h) {
  return h ? size_t(h->v.mode_count()) : 0;
}

double def_modes_min_eigen_gap(const def_modes* h) {
  return h ? h->v.min_eigen_gap : nan_value();
}

int def_modes_rank_deficient(const def_modes* h) {
  return h && h->v.rank_deficient ? 1 : 0;
}

def_status def_modes_values(const def_modes* h, double* eig_re, double* eig_im,
                            double* nu_re, double* nu_im,
                            double* time_constants, int* decay_signs,
                            size_t capacity) {
  if (def_status s = require(h != nullptr, "modes handle is null"); s != DEF_OK) return s;
  const size_t n = size_t(h->v.mode_count());
  if (def_status s = check_capacity(n, capacity); s != DEF_OK) return s;
  for (size_t i = 0; i < n; ++i) {
    const Eigen::Index k = Eigen::Index(i);
    if (eig_re) eig_re[i] = h->v.eigenvalues[k].real();
    if (eig_im) eig_im[i] = h->v.eigenvalues[k].imag();
    if (nu_re) nu_re[i] = h->v.nus[k].real();
    if (nu_im) nu_im[i] = h->v.nus[k].imag();
    if (time_constants) time_constants[i] = h->v.time_constants[k];
    if (decay_signs) decay_signs[i] = h->v.decay_signs[i];
  }
  return DEF_OK;
}

def_status def_modes_write_json(const def_modes* h, const def_selection* sel,
                                const char* path) {
  if (def_status s = require(h && path, "modes or path is null"); s != DEF_OK) return s;
  return guarded([&] { def::write_modes_json(h->v, meta_or_default(sel), path); });
}

void def_modes_free(def_modes* h) { delete h; }

/* --------------------------- spectrum ---------------------------- */

def_status def_spectrum_at(const def_series* s, const def_modes* modes,
                           size_t n, def_estimator estimator,
                           def_spectrum** out) {
  if (def_status st = require(s && modes, "series or modes handle is null"); st != DEF_OK)
    return st;
  return make_handle(out, [&] {
    return def::amplitude_at(s->v, modes->v, n, to_estimator(estimator));
  });
}

def_status def_spectrum_forced_at(const def_series* s, const def_input* u,
                                  const def_forced_model* model,
                                  const def_modes* modes, size_t n,
                                  def_spectrum** out) {
  if (def_status st = require(s && u && model && modes, "a handle is null"); st != DEF_OK)
    return st;
  return make_handle(out, [&] {
    return def::amplitude_forced(s->v, u->v, model->v, modes->v, n);
  });
}

size_t def_spectrum_size(const def_spectrum* h) {
  return h ? h->v.entries.size() : 0;
}

size_t def_spectrum_time_index(const def_spectrum* h) {
  return h ? h->v.time_index : 0;
}

size_t def_spectrum_order(const def_spectrum* h) { return h ? h->v.d_star : 0; }

def_status def_spectrum_entries(const def_spectrum* h, double* time_constants,
                                double* magnitudes, double* amp_re,
                                double* amp_im, int* decay_signs,
                                size_t capacity) {
  if (def_status s = require(h != nullptr, "spectrum handle is null"); s != DEF_OK)
    return s;
  const size_t n = h->v.entries.size();
  if (def_status s = check_capacity(n, capacity); s != DEF_OK) return s;
  for (size_t i = 0; i < n; ++i) {
    const def::SpectrumEntry& e = h->v.entries[i];
    if (time_constants) time_constants[i] = e.time_constant;
    if (magnitudes) magnitudes[i] = e.magnitude;
    if (amp_re) amp_re[i] = e.amplitude.real();
    if (amp_im) amp_im[i] = e.amplitude.imag();
    if (decay_signs) decay_signs[i] = e.decay_sign;
  }
  return DEF_OK;
}

def_status def_spectrum_write_csv(const def_spectrum* h, const char* path) {
  if (def_status s = require(h && path, "spectrum or path is null"); s != DEF_OK)
    return s;
  return guarded([&] { def::write_spectrum_csv(h->v, path); });
}

def_status def_spectrum_read_csv(const char* path, def_spectrum** out) {
  if (def_status s = require(path != nullptr, "path is null"); s != DEF_OK) return s;
  return make_handle(out, [&] { return def::read_spectrum_csv(path); });
}

void def_spectrum_free(def_spectrum* h) { delete h; }

/* ------------------------ end-to-end run ------------------------- */

def_status def_analyze(const def_series* s, const size_t* candidates,
                       size_t candidate_count, size_t l_horizon, double sigma2,
                       const size_t* query_indices, size_t query_count,
                       def_estimator estimator, def_result** out) {
  if (def_status st = require(s && (candidates || candidate_count == 0) &&
                                  (query_indices || query_count == 0),
                              "series or index list is null");
      st != DEF_OK)
    return st;
  return make_handle(out, [&] {
    return def::analyze(
        s->v, std::vector<std::size_t>(candidates, candidates + candidate_count),
        l_horizon, sigma2,
        std::vector<std::size_t>(query_indices, query_indices + query_count),
        to_estimator(estimator));
  });
}

def_status def_result_selection(const def_result* h, def_selection** out) {
  if (def_status s = require(h != nullptr, "result handle is null"); s != DEF_OK) return s;
  return make_handle(out, [&] { return h->v.selection; });
}

def_status def_result_model(const def_result* h, def_model** out) {
  if (def_status s = require(h != nullptr, "result handle is null"); s != DEF_OK) return s;
  return make_handle(out, [&] { return h->v.model; });
}

def_status def_result_modes(const def_result* h, def_modes** out) {
  if (def_status s = require(h != nullptr, "result handle is null"); s != DEF_OK) return s;
  return make_handle(out, [&] { return h->v.modes; });
}

size_t def_result_spectrum_count(const def_result* h) {
  return h ? h->v.spectra.size() : 0;
}

def_status def_result_spectrum(const def_result* h, size_t index,
                               def_spectrum** out) {
  if (def_status s = require(h != nullptr, "result handle is null"); s != DEF_OK) return s;
  return make_handle(out, [&]() -> def::AmplitudeSpectrum {
    if (index >= h->v.spectra.size())
      throw std::out_of_range("spectrum index exceeds the query count");
    return h->v.spectra[index];
  });
}

void def_result_free(def_result* h) { delete h; }

/* ----------------------------- peaks ----------------------------- */

void def_peak_params_init(def_peak_params* out) {
  if (!out) return;
  const def::PeakParams defaults;
  out->w = defaults.w;
  out->eps = -1.0;
  out->theta = defaults.theta;
  out->k_top = defaults.k_top;
}

def_status def_peaks_extract(const def_spectrum* spectrum,
                             const def_peak_params* params, def_peaks** out) {
  if (def_status s = require(spectrum != nullptr, "spectrum handle is null"); s != DEF_OK)
    return s;
  return make_handle(out, [&] {
    return params ? def::extract_peaks(spectrum->v, to_core(*params))
                  : def::extract_peaks(spectrum->v);
  });
}

size_t def_peaks_count(const def_peaks* h) {
  return h ? h->v.diagnostics.size() : 0;
}

double def_peaks_eps_used(const def_peaks* h) {
  return h ? h->v.eps_used : nan_value();
}

def_status def_peaks_diagnostics(const def_peaks* h, size_t* mode,
                                 double* time_constant, double* amplitude,
                                 double* baseline, double* prominence,
                                 double* background, double* isolation,
                                 double* score, int* candidate,
                                 size_t capacity) {
  if (def_status s = require(h != nullptr, "peaks handle is null"); s != DEF_OK) return s;
  const size_t n = h->v.diagnostics.size();
  if (def_status s = check_capacity(n, capacity); s != DEF_OK) return s;
  for (size_t i = 0; i < n; ++i) {
    const def::PeakDiagnostics& d = h->v.diagnostics[i];
    if (mode) mode[i] = d.mode;
    if (time_constant) time_constant[i] = d.time_constant;
    if (amplitude) amplitude[i] = d.amplitude;
    if (baseline) baseline[i] = d.baseline;
    if (prominence) prominence[i] = d.prominence;
    if (background) background[i] = d.background;
    if (isolation) isolation[i] = d.isolation;
    if (score) score[i] = d.score;
    if (candidate) candidate[i] = d.candidate ? 1 : 0;
  }
  return DEF_OK;
}

size_t def_peaks_candidate_count(const def_peaks* h) {
  return h ? h->v.candidates.size() : 0;
}

size_t def_peaks_all_count(const def_peaks* h) {
  return h ? h->v.all_peaks.size() : 0;
}

size_t def_peaks_reported_count(const def_peaks* h) {
  return h ? h->v.reported.size() : 0;
}

def_status def_peaks_candidates(const def_peaks* h, size_t* out, size_t capacity) {
  if (!h) return fail(DEF_INVALID_ARGUMENT, "peaks handle is null");
  return copy_indices(h->v.candidates, out, capacity);
}

def_status def_peaks_all(const def_peaks* h, size_t* out, size_t capacity) {
  if (!h) return fail(DEF_INVALID_ARGUMENT, "peaks handle is null");
  return copy_indices(h->v.all_peaks, out, capacity);
}

def_status def_peaks_reported(const def_peaks* h, size_t* out, size_t capacity) {
  if (!h) return fail(DEF_INVALID_ARGUMENT, "peaks handle is null");
  return copy_indices(h->v.reported, out, capacity);
}

def_status def_peaks_write_json(const def_peaks* h, const def_selection* sel,
                                const char* path) {
  if (def_status s = require(h && path, "peaks or path is null"); s != DEF_OK) return s;
  return guarded([&] { def::write_peaks_json(h->v, meta_or_default(sel), path); });
}

void def_peaks_free(def_peaks* h) { delete h; }

/* --------------------------- baselines --------------------------- */

def_status def_ssa_decompose(const def_series* s, size_t window, def_ssa** out) {
  if (def_status st = require(s != nullptr, "series handle is null"); st != DEF_OK)
    return st;
  return make_handle(out, [&] { return def::ssa_decompose(s->v, window); });
}

size_t def_ssa_rank(const def_ssa* h) {
  return h ? size_t(h->v.singular_values.size()) : 0;
}

def_status def_ssa_singular_values(const def_ssa* h, double* out, size_t capacity) {
  if (def_status s = require(h && out, "decomposition or destination is null"); s != DEF_OK)
    return s;
  const size_t n = size_t(h->v.singular_values.size());
  if (def_status s = check_capacity(n, capacity); s != DEF_OK) return s;
  for (size_t i = 0; i < n; ++i) out[i] = h->v.singular_values[Eigen::Index(i)];
  return DEF_OK;
}

def_status def_ssa_reconstruct(const def_ssa* h, const size_t* components,
                               size_t count, def_series** out) {
  if (def_status s = require(h && (components || count == 0),
                             "decomposition or component list is null");
      s != DEF_OK)
    return s;
  return make_handle(out, [&] {
    return def::ssa_reconstruct(h->v, std::vector<std::size_t>(components, components + count));
  });
}

def_status def_ssa_write_csv(const def_ssa* h, const size_t* components,
                             size_t count, const char* path) {
  if (def_status s = require(h && path && (components || count == 0),
                             "decomposition, component list, or path is null");
      s != DEF_OK)
    return s;
  return guarded([&] {
    std::vector<std::pair<std::size_t, def::TimeSeries>> rows;
    rows.reserve(count);
    for (size_t i = 0; i < count; ++i)
      rows.emplace_back(components[i], def::ssa_reconstruct(h->v, {components[i]}));
    def::write_ssa_csv(rows, path);
  });
}

void def_ssa_free(def_ssa* h) { delete h; }

def_status def_dmd_decompose(const def_matrices* m, size_t rank, def_dmd** out) {
  if (def_status s = require(m != nullptr, "matrices handle is null"); s != DEF_OK)
    return s;
  return make_handle(out, [&] {
    return rank == 0 ? def::dmd_decompose(m->v)
                     : def::dmd_decompose(m->v, rank);
  });
}

size_t def_dmd_rank(const def_dmd* h) { return h ? h->v.rank : 0; }

def_status def_dmd_values(const def_dmd* h, double* eig_re, double* eig_im,
                          double* periods, int* oscillatory,
                          double* contributions, size_t capacity) {
  if (def_status s = require(h != nullptr, "decomposition handle is null"); s != DEF_OK)
    return s;
  const size_t n = h->v.rank;
  if (def_status s = check_capacity(n, capacity); s != DEF_OK) return s;
  for (size_t i = 0; i < n; ++i) {
    const Eigen::Index k = Eigen::Index(i);
    if (eig_re) eig_re[i] = h->v.eigenvalues[k].real();
    if (eig_im) eig_im[i] = h->v.eigenvalues[k].imag();
    if (periods) periods[i] = h->v.periods[k];
    if (oscillatory) oscillatory[i] = h->v.oscillatory[i] ? 1 : 0;
    if (contributions) contributions[i] = h->v.contributions[k];
  }
  return DEF_OK;
}

def_status def_dmd_write_csv(const def_dmd* h, const char* path) {
  if (def_status s = require(h && path, "decomposition or path is null"); s != DEF_OK)
    return s;
  return guarded([&] { def::write_dmd_csv(h->v, path); });
}

void def_dmd_free(def_dmd* h) { delete h; }

} /* extern "C" */
