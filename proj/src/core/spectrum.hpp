#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "core/linear_model.hpp"
#include "core/time_series.hpp"

namespace def {

// Eigenstructure of an identified delay operator plus per-mode exponential
// fits. Columns of `eigenvectors` are unit 2-norm with the largest-magnitude
// component rotated onto the positive real axis; modes are ordered by
// |lambda| descending, then by angle ascending. Near-zero eigenvalues
// (|lambda| < 1e-12) are dropped by build_mode_set as degenerate, so the
// arrays may be shorter than d.
struct ModeSet {
  Eigen::VectorXcd eigenvalues;
  Eigen::MatrixXcd eigenvectors;   // column i pairs with eigenvalues[i]
  Eigen::VectorXcd nus;            // continuous exponents, units 1/time
  Eigen::VectorXcd scales;         // fitted amplitude b of each exponential
  Eigen::VectorXd fit_residuals;   // fit error normalized by ||V||^2
  Eigen::VectorXd time_constants;  // 1/|Re nu|; +inf below the decay floor
  std::vector<int> decay_signs;    // -1 decaying, +1 growing, 0 at the floor
  std::vector<bool> high_residual; // exponential fit above the flag threshold
  double min_eigen_gap = 0.0;      // smallest pairwise eigenvalue distance
  bool non_distinct = false;       // a pair sits closer than 1e-12
  bool rank_deficient = false;     // carried over from the source model
  std::size_t d = 0;
  double dt = 1.0;
  std::size_t n_source = 0;

  Eigen::Index mode_count() const { return eigenvalues.size(); }
};

struct ExponentialFit {
  std::complex<double> nu{0.0, 0.0};
  std::complex<double> b{0.0, 0.0};
  double residual = 0.0;  // sum_k |V_k - b e^{nu (d-1-k) dt}|^2 / ||V||^2
};

// How a mode amplitude at index n is measured.
enum class AmplitudeEstimator {
  kExponentialBasis,      // sum_{k<d} y[n-k] e^{nu k dt}
  kEigenvectorProjection  // x_d[n]^T V_i
};

struct SpectrumEntry {
  double time_constant = 0.0;
  std::complex<double> amplitude{0.0, 0.0};
  double magnitude = 0.0;
  int decay_sign = 0;
};

// Per-mode amplitudes at one query index, sorted by time constant ascending
// (+inf entries last, ties keep mode order).
struct AmplitudeSpectrum {
  std::size_t time_index = 0;
  std::size_t d_star = 0;
  std::vector<SpectrumEntry> entries;
};

// Full eigendecomposition, normalized and sorted as described on ModeSet.
// The exponential-fit arrays are left empty. Throws numeric_error if the
// solver fails to converge.
ModeSet eigendecompose(const IdentifiedModel& model);

// Fit V_k ~ b e^{nu (d-1-k) dt}. Primary path averages logs of consecutive
// entry ratios (phase-unwrapped); entries too small for ratios fall back to
// a log-linear regression; a nonlinear polish runs only when the normalized
// residual exceeds 1e-3. All-zero vectors are rejected.
ExponentialFit fit_exponential(const Eigen::VectorXcd& eigenvector, double dt);

// eigendecompose + fit_exponential per mode, dropping degenerate modes and
// attaching time constants. T = 1/|Re nu| with sign recorded separately;
// |Re nu| below 1/(100 N dt) becomes the +inf sentinel. Fits with residual
// above `residual_flag_threshold` are flagged but kept.
ModeSet build_mode_set(const IdentifiedModel& model, double residual_flag_threshold = 1e-3);

// Mode amplitudes of `series` at index n (requires d-1 <= n < N).
AmplitudeSpectrum amplitude_at(const TimeSeries& series, const ModeSet& modes, std::size_t n,
                               AmplitudeEstimator estimator = AmplitudeEstimator::kExponentialBasis);

// Forced variant: projects x_d[n+1] - B u_d[n] onto each eigenvector, so the
// input's one-step contribution is removed first. Requires n >= d-1 and
// n+1 < N, with the input aligned to the series.
AmplitudeSpectrum amplitude_forced(const TimeSeries& series, const InputSeries& input,
                                   const ForcedModel& model, const ModeSet& modes, std::size_t n);

// End-to-end result: order selection, the model refit at d*, its mode set,
// and one spectrum per query index (input order preserved).
struct DefResult {
  OrderSelection selection;
  IdentifiedModel model;
  ModeSet modes;
  std::vector<AmplitudeSpectrum> spectra;
};

DefResult analyze(const TimeSeries& series, const std::vector<std::size_t>& candidates,
                  std::size_t l_horizon, double sigma2,
                  const std::vector<std::size_t>& query_indices,
                  AmplitudeEstimator estimator = AmplitudeEstimator::kExponentialBasis);

}  // namespace def
