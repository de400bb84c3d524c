#pragma once

#include <Eigen/Dense>
#include <map>
#include <utility>
#include <vector>

#include "core/hankel.hpp"
#include "core/time_series.hpp"

namespace def {

// Discrete delay operator fitted by least squares: a_tilde minimizes
// ||Y - A X||_F^2 over the snapshot range. fit_error is that minimum.
struct IdentifiedModel {
  Eigen::MatrixXd a_tilde;  // d x d
  std::size_t d = 0;
  double dt = 1.0;
  double fit_error = 0.0;
  Eigen::Index rank = 0;        // effective rank of the regressor
  bool rank_deficient = false;  // minimum-norm solve was used; treat as a warning
  std::size_t n_source = 0;     // sample count of the series behind the fit (m2)
};

// Forced variant: (a_tilde, b_tilde) jointly minimize ||Y - A X - B U||_F^2.
struct ForcedModel {
  Eigen::MatrixXd a_tilde;  // d x d
  Eigen::MatrixXd b_tilde;  // d x (d*m)
  std::size_t d = 0;
  std::size_t m = 0;
  double dt = 1.0;
  double fit_error = 0.0;
  Eigen::Index rank = 0;
  bool rank_deficient = false;
  std::size_t n_source = 0;
};

// AIC sweep over a candidate set of delay orders.
struct OrderSelection {
  std::vector<std::size_t> candidates;  // sorted ascending, deduplicated
  std::vector<double> aic_values;       // NaN where infeasible
  std::vector<char> feasible;           // per-candidate flag
  std::size_t d_star = 0;               // argmin over feasible candidates; ties -> smaller d
  std::size_t l_horizon = 5;
  double sigma2 = 0.0;
  double dt = 1.0;
  std::size_t n_samples = 0;
};

IdentifiedModel identify(const DelayMatrices& matrices);

ForcedModel identify_forced(const DelayMatrices& matrices, const InputDelayMatrices& inputs);

// A^steps x0 by repeated application.
Eigen::VectorXd predict(const IdentifiedModel& model, const Eigen::VectorXd& x0,
                        std::size_t steps);

// x_{i+1} = A x_i + B u_i for the given input-lag columns (one per step).
Eigen::VectorXd predict_forced(const ForcedModel& model, const Eigen::VectorXd& x0,
                               const std::vector<Eigen::VectorXd>& input_cols,
                               std::size_t steps);

// L-ahead information criterion evaluated on the newest-sample row:
// ||y_row - c0^T A^L X||^2 / (N-d-L) + 2 d sigma2 / (N-d-L), with the model
// identified on the full range (d, N). Accepts any L >= 1.
double aic(const TimeSeries& series, std::size_t d, std::size_t l_horizon, double sigma2);

double aic_forced(const TimeSeries& series, const InputSeries& input, std::size_t d,
                  std::size_t l_horizon, double sigma2);

// Sweep aic over candidates; infeasible candidates (N - d - L <= 0, or too
// few snapshot columns for the solve) are kept in the report but excluded
// from the argmin.
OrderSelection select_order(const TimeSeries& series, const std::vector<std::size_t>& candidates,
                            std::size_t l_horizon, double sigma2);

// Per-horizon curves AIC(d;L) - min_d AIC(d;L). Each inner list is sorted by
// d; each curve's minimum is exactly 0. The expensive identification is
// shared across horizons for each d.
std::map<std::size_t, std::vector<std::pair<std::size_t, double>>> relative_aic_curves(
    const TimeSeries& series, const std::vector<std::size_t>& d_grid,
    const std::vector<std::size_t>& l_list, double sigma2);

}  // namespace def
