#include "core/linear_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

#include "core/lstsq.hpp"

namespace def {

namespace {

// True when Y is exactly X advanced one step in its lag rows, i.e. the pair
// came from a scalar delay embedding. Then every row of the least-squares
// solution below the first is forced to the lag shift e_{j-1}^T (its residual
// is exactly zero and the full-rank solution is unique), so only the newest-
// sample row needs a solve.
bool shift_structured(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  const Eigen::Index d = x.rows();
  if (d == 1) return true;
  return (y.bottomRows(d - 1).array() == x.topRows(d - 1).array()).all();
}

void place_shift_rows(Eigen::MatrixXd& a) {
  for (Eigen::Index j = 1; j < a.rows(); ++j) a(j, j - 1) = 1.0;
}

std::size_t feasible_columns(std::size_t n, std::size_t d) { return n - d; }

}  // namespace

IdentifiedModel identify(const DelayMatrices& matrices) {
  const Eigen::MatrixXd& x = matrices.x_matrix;
  const Eigen::MatrixXd& y = matrices.y_matrix;
  const Eigen::Index d = x.rows();
  if (d < 1 || y.rows() != d || y.cols() != x.cols())
    throw std::invalid_argument("snapshot matrices must be d x M with matching shapes");
  if (x.cols() < d)
    throw std::invalid_argument("identification needs at least d snapshot columns (got " +
                                std::to_string(x.cols()) + " for d=" + std::to_string(d) + ")");

  IdentifiedModel model;
  model.d = static_cast<std::size_t>(d);
  model.dt = matrices.dt;
  model.n_source = matrices.m2;

  if (shift_structured(x, y)) {
    RowLsqResult top = solve_row_lsq(x, y.row(0));
    if (!top.rank_deficient) {
      model.a_tilde = Eigen::MatrixXd::Zero(d, d);
      model.a_tilde.row(0) = top.solution;
      place_shift_rows(model.a_tilde);
      model.fit_error = (y.row(0) - top.solution * x).squaredNorm();
      model.rank = top.rank;
      return model;
    }
  }

  RowLsqResult full = solve_row_lsq(x, y);
  model.a_tilde = full.solution;
  model.fit_error = (y - model.a_tilde * x).squaredNorm();
  model.rank = full.rank;
  model.rank_deficient = full.rank_deficient;
  return model;
}

ForcedModel identify_forced(const DelayMatrices& matrices, const InputDelayMatrices& inputs) {
  const Eigen::MatrixXd& x = matrices.x_matrix;
  const Eigen::MatrixXd& y = matrices.y_matrix;
  const Eigen::MatrixXd& u = inputs.u_matrix;
  const Eigen::Index d = x.rows();
  if (u.cols() != x.cols()) throw std::invalid_argument("input columns must match snapshots");
  if (inputs.d != matrices.d) throw std::invalid_argument("input lag order must match d");
  const Eigen::Index dm = u.rows();
  if (x.cols() < d)
    throw std::invalid_argument("identification needs at least d snapshot columns");

  Eigen::MatrixXd g(d + dm, x.cols());
  g.topRows(d) = x;
  g.bottomRows(dm) = u;

  ForcedModel model;
  model.d = static_cast<std::size_t>(d);
  model.m = inputs.m;
  model.dt = matrices.dt;
  model.n_source = matrices.m2;

  if (shift_structured(x, y)) {
    RowLsqResult top = solve_row_lsq(g, y.row(0));
    if (!top.rank_deficient) {
      model.a_tilde = Eigen::MatrixXd::Zero(d, d);
      model.b_tilde = Eigen::MatrixXd::Zero(d, dm);
      model.a_tilde.row(0) = top.solution.leftCols(d);
      model.b_tilde.row(0) = top.solution.rightCols(dm);
      place_shift_rows(model.a_tilde);
      model.fit_error = (y.row(0) - top.solution * g).squaredNorm();
      model.rank = top.rank;
      return model;
    }
  }

  RowLsqResult full = solve_row_lsq(g, y);
  model.a_tilde = full.solution.leftCols(d);
  model.b_tilde = full.solution.rightCols(dm);
  model.fit_error = (y - model.a_tilde * x - model.b_tilde * u).squaredNorm();
  model.rank = full.rank;
  model.rank_deficient = full.rank_deficient;
  return model;
}

Eigen::VectorXd predict(const IdentifiedModel& model, const Eigen::VectorXd& x0,
                        std::size_t steps) {
  if (x0.size() != model.a_tilde.rows())
    throw std::invalid_argument("state length must equal d");
  Eigen::VectorXd x = x0;
  for (std::size_t i = 0; i < steps; ++i) x = model.a_tilde * x;
  return x;
}

Eigen::VectorXd predict_forced(const ForcedModel& model, const Eigen::VectorXd& x0,
                               const std::vector<Eigen::VectorXd>& input_cols,
                               std::size_t steps) {
  if (x0.size() != model.a_tilde.rows())
    throw std::invalid_argument("state length must equal d");
  if (input_cols.size() != steps)
    throw std::invalid_argument("need exactly one input column per step");
  Eigen::VectorXd x = x0;
  for (std::size_t i = 0; i < steps; ++i) {
    if (input_cols[i].size() != model.b_tilde.cols())
      throw std::invalid_argument("input column length must equal d*m");
    x = model.a_tilde * x + model.b_tilde * input_cols[i];
  }
  return x;
}

namespace {

void check_aic_args(std::size_t n, std::size_t d, std::size_t l, double sigma2) {
  if (l < 1) throw std::invalid_argument("horizon L must be >= 1");
  if (!(sigma2 >= 0.0)) throw std::invalid_argument("sigma2 must be >= 0");
  if (n <= d + l)
    throw std::invalid_argument("aic needs N - d - L > 0 (N=" + std::to_string(n) +
                                ", d=" + std::to_string(d) + ", L=" + std::to_string(l) + ")");
  if (feasible_columns(n, d) < d)
    throw std::invalid_argument("aic needs N - d >= d snapshot columns");
}

// Newest-sample L-ahead residual term plus complexity penalty, reusing an
// already-identified model and its full-range snapshot matrix.
double aic_from_fit(const TimeSeries& series, const DelayMatrices& mats,
                    const IdentifiedModel& model, std::size_t l, double sigma2) {
  const std::size_t n = series.size();
  const std::size_t d = model.d;
  const Eigen::Index cols = static_cast<Eigen::Index>(n - d - l + 1);
  // c0^T A^L accumulated as a row vector: same operator composition as
  // propagating the snapshot block, at 1/d of the cost.
  Eigen::RowVectorXd c = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(d));
  c(0) = 1.0;
  for (std::size_t i = 0; i < l; ++i) c = c * model.a_tilde;
  const Eigen::RowVectorXd pred = c * mats.x_matrix.leftCols(cols);
  const Eigen::Map<const Eigen::RowVectorXd> target(series.samples.data() + (d + l - 1), cols);
  const double denom = static_cast<double>(n - d - l);
  const double residual_term = (target - pred).squaredNorm() / denom;
  const double penalty = 2.0 * static_cast<double>(d) * sigma2 / denom;
  return residual_term + penalty;
}

}  // namespace

double aic(const TimeSeries& series, std::size_t d, std::size_t l_horizon, double sigma2) {
  check_aic_args(series.size(), d, l_horizon, sigma2);
  DelayMatrices mats = build_matrices(series, d, d, series.size());
  IdentifiedModel model = identify(mats);
  return aic_from_fit(series, mats, model, l_horizon, sigma2);
}

double aic_forced(const TimeSeries& series, const InputSeries& input, std::size_t d,
                  std::size_t l_horizon, double sigma2) {
  check_aic_args(series.size(), d, l_horizon, sigma2);
  if (input.size() != series.size()) throw std::invalid_argument("input length must match series");
  const std::size_t n = series.size();
  const std::size_t l = l_horizon;
  DelayMatrices mats = build_matrices(series, d, d, n);
  InputDelayMatrices inputs = build_input_matrices(input, d, d, n);
  ForcedModel model = identify_forced(mats, inputs);

  const Eigen::Index cols = static_cast<Eigen::Index>(n - d - l + 1);
  // Rows c0^T A^j for j = 0..L, newest-sample slice of the forced predictor
  // Z = A^L X + sum_i A^{L-i} B U^(d+i-1, N-L+i).
  std::vector<Eigen::RowVectorXd> c(l + 1);
  c[0] = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(d));
  c[0](0) = 1.0;
  for (std::size_t j = 1; j <= l; ++j) c[j] = c[j - 1] * model.a_tilde;

  Eigen::RowVectorXd pred = c[l] * mats.x_matrix.leftCols(cols);
  for (std::size_t i = 1; i <= l; ++i) {
    InputDelayMatrices ui = build_input_matrices(input, d, d + i - 1, n - l + i);
    pred += (c[l - i] * model.b_tilde) * ui.u_matrix;
  }
  const Eigen::Map<const Eigen::RowVectorXd> target(series.samples.data() + (d + l - 1), cols);
  const double denom = static_cast<double>(n - d - l);
  const double residual_term = (target - pred).squaredNorm() / denom;
  const double penalty = 2.0 * static_cast<double>(d) * sigma2 / denom;
  return residual_term + penalty;
}

OrderSelection select_order(const TimeSeries& series, const std::vector<std::size_t>& candidates,
                            std::size_t l_horizon, double sigma2) {
  if (candidates.empty()) throw std::invalid_argument("candidate set must be non-empty");
  if (l_horizon < 1) throw std::invalid_argument("horizon L must be >= 1");
  if (!(sigma2 >= 0.0)) throw std::invalid_argument("sigma2 must be >= 0");

  OrderSelection sel;
  sel.l_horizon = l_horizon;
  sel.sigma2 = sigma2;
  sel.dt = series.dt;
  sel.n_samples = series.size();
  std::set<std::size_t> unique(candidates.begin(), candidates.end());
  sel.candidates.assign(unique.begin(), unique.end());

  const std::size_t n = series.size();
  double best = std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t d : sel.candidates) {
    const bool ok = d >= 1 && n > d + l_horizon && feasible_columns(n, d) >= d;
    sel.feasible.push_back(ok ? 1 : 0);
    if (!ok) {
      sel.aic_values.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const double value = aic(series, d, l_horizon, sigma2);
    sel.aic_values.push_back(value);
    if (value < best) {  // strict: ties keep the smaller d seen first
      best = value;
      sel.d_star = d;
      any = true;
    }
  }
  if (!any) throw std::invalid_argument("no feasible candidate in the set");
  return sel;
}

std::map<std::size_t, std::vector<std::pair<std::size_t, double>>> relative_aic_curves(
    const TimeSeries& series, const std::vector<std::size_t>& d_grid,
    const std::vector<std::size_t>& l_list, double sigma2) {
  if (d_grid.empty() || l_list.empty())
    throw std::invalid_argument("grid and horizon list must be non-empty");
  const std::size_t n = series.size();
  std::set<std::size_t> ds(d_grid.begin(), d_grid.end());
  std::set<std::size_t> ls(l_list.begin(), l_list.end());
  for (std::size_t d : ds)
    for (std::size_t l : ls) check_aic_args(n, d, l, sigma2);

  std::map<std::size_t, std::vector<std::pair<std::size_t, double>>> curves;
  for (std::size_t l : ls) curves[l].reserve(ds.size());
  for (std::size_t d : ds) {
    DelayMatrices mats = build_matrices(series, d, d, n);
    IdentifiedModel model = identify(mats);
    for (std::size_t l : ls)
      curves[l].emplace_back(d, aic_from_fit(series, mats, model, l, sigma2));
  }
  for (auto& [l, curve] : curves) {
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& [d, v] : curve) lo = std::min(lo, v);
    for (auto& [d, v] : curve) v -= lo;
  }
  return curves;
}

}  // namespace def
