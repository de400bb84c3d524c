#pragma once

#include <Eigen/Dense>

#include "core/time_series.hpp"

namespace def {

// Paired delay-coordinate snapshot matrices over the index range (m1, m2):
// column j of x_matrix is x_d[m1-1+j], column j of y_matrix is x_d[m1+j],
// so y_matrix is x_matrix advanced by one step. Entry (r, j) of x_matrix is
// y[m1-1+j-r]; anti-diagonals are constant.
struct DelayMatrices {
  Eigen::MatrixXd x_matrix;  // d x (m2-m1)
  Eigen::MatrixXd y_matrix;  // d x (m2-m1)
  std::size_t d = 0;
  std::size_t m1 = 0;
  std::size_t m2 = 0;
  double dt = 1.0;
};

// Stacked input lags aligned with DelayMatrices: column j holds
// [u[m1-1+j]; u[m1-2+j]; ...; u[m1-d+j]], each entry an m-vector, so row
// block r carries the channels at delay r.
struct InputDelayMatrices {
  Eigen::MatrixXd u_matrix;  // (d*m) x (m2-m1)
  std::size_t d = 0;
  std::size_t m = 0;
  std::size_t m1 = 0;
  std::size_t m2 = 0;
  double dt = 1.0;
};

// x_d[n] = [y[n], y[n-1], ..., y[n-d+1]]^T. Requires d >= 1 and d-1 <= n < N.
Eigen::VectorXd delay_vector(const TimeSeries& series, std::size_t n, std::size_t d);

// Snapshot pair for the range (m1, m2); requires d <= m1 < m2 <= N. The
// default identification range of the method is (d, N).
DelayMatrices build_matrices(const TimeSeries& series, std::size_t d, std::size_t m1,
                             std::size_t m2);

// Input-lag analogue; same range rules as build_matrices.
InputDelayMatrices build_input_matrices(const InputSeries& input, std::size_t d, std::size_t m1,
                                        std::size_t m2);

// u_d[n] = [u[n]; u[n-1]; ...; u[n-d+1]] stacked to length d*m.
Eigen::VectorXd input_delay_vector(const InputSeries& input, std::size_t n, std::size_t d);

}  // namespace def
