#include "core/hankel.hpp"

#include <stdexcept>
#include <string>

namespace def {

namespace {

void check_range(std::size_t d, std::size_t m1, std::size_t m2, std::size_t n) {
  if (d < 1) throw std::invalid_argument("delay order d must be >= 1");
  if (m1 < d || m1 >= m2 || m2 > n)
    throw std::invalid_argument("range must satisfy d <= m1 < m2 <= N (d=" + std::to_string(d) +
                                ", m1=" + std::to_string(m1) + ", m2=" + std::to_string(m2) +
                                ", N=" + std::to_string(n) + ")");
}

}  // namespace

Eigen::VectorXd delay_vector(const TimeSeries& series, std::size_t n, std::size_t d) {
  if (d < 1) throw std::invalid_argument("delay order d must be >= 1");
  if (n + 1 < d || n >= series.size())
    throw std::invalid_argument("delay vector needs d-1 <= n < N (n=" + std::to_string(n) +
                                ", d=" + std::to_string(d) + ")");
  Eigen::VectorXd x(static_cast<Eigen::Index>(d));
  for (std::size_t r = 0; r < d; ++r) x[static_cast<Eigen::Index>(r)] = series.samples[n - r];
  return x;
}

DelayMatrices build_matrices(const TimeSeries& series, std::size_t d, std::size_t m1,
                             std::size_t m2) {
  check_range(d, m1, m2, series.size());
  const Eigen::Index rows = static_cast<Eigen::Index>(d);
  const Eigen::Index cols = static_cast<Eigen::Index>(m2 - m1);
  DelayMatrices out;
  out.x_matrix.resize(rows, cols);
  out.y_matrix.resize(rows, cols);
  const double* y = series.samples.data();
  for (Eigen::Index j = 0; j < cols; ++j) {
    const std::size_t base = m1 + static_cast<std::size_t>(j);  // newest index of column j + 1
    for (Eigen::Index r = 0; r < rows; ++r) {
      out.x_matrix(r, j) = y[base - 1 - static_cast<std::size_t>(r)];
      out.y_matrix(r, j) = y[base - static_cast<std::size_t>(r)];
    }
  }
  out.d = d;
  out.m1 = m1;
  out.m2 = m2;
  out.dt = series.dt;
  return out;
}

Eigen::VectorXd input_delay_vector(const InputSeries& input, std::size_t n, std::size_t d) {
  const std::size_t m = input.channel_count();
  if (m < 1) throw std::invalid_argument("input needs m >= 1 channels");
  if (d < 1) throw std::invalid_argument("delay order d must be >= 1");
  if (n + 1 < d || n >= input.size())
    throw std::invalid_argument("input delay vector needs d-1 <= n < N");
  Eigen::VectorXd u(static_cast<Eigen::Index>(d * m));
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < m; ++c)
      u[static_cast<Eigen::Index>(r * m + c)] = input.channels[c][n - r];
  return u;
}

InputDelayMatrices build_input_matrices(const InputSeries& input, std::size_t d, std::size_t m1,
                                        std::size_t m2) {
  const std::size_t m = input.channel_count();
  if (m < 1) throw std::invalid_argument("input needs m >= 1 channels");
  for (const auto& ch : input.channels)
    if (ch.size() != input.size()) throw std::invalid_argument("input channel length mismatch");
  check_range(d, m1, m2, input.size());
  InputDelayMatrices out;
  const Eigen::Index cols = static_cast<Eigen::Index>(m2 - m1);
  out.u_matrix.resize(static_cast<Eigen::Index>(d * m), cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    const std::size_t newest = m1 - 1 + static_cast<std::size_t>(j);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < m; ++c)
        out.u_matrix(static_cast<Eigen::Index>(r * m + c), j) = input.channels[c][newest - r];
  }
  out.d = d;
  out.m = m;
  out.m1 = m1;
  out.m2 = m2;
  out.dt = input.dt;
  return out;
}

}  // namespace def
