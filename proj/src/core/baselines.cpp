#include "core/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include "core/errors.hpp"

namespace def {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

Eigen::MatrixXd trajectory_matrix(const TimeSeries& series, std::size_t window) {
  const std::size_t n = series.size();
  const std::size_t cols = n - window + 1;
  Eigen::MatrixXd x(window, cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t r = 0; r < window; ++r)
      x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = series.samples[r + j];
  return x;
}

}  // namespace

SsaDecomposition ssa_decompose(const TimeSeries& series, std::size_t window) {
  const std::size_t n = series.size();
  if (window < 2 || window > n - 1)
    throw std::invalid_argument("ssa window must satisfy 2 <= d <= N-1");

  const Eigen::MatrixXd x = trajectory_matrix(series, window);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);

  SsaDecomposition out;
  out.singular_values = svd.singularValues();
  out.left_vectors = svd.matrixU();
  out.right_vectors = svd.matrixV();
  out.window = window;
  out.n_samples = n;
  out.dt = series.dt;
  return out;
}

TimeSeries ssa_reconstruct(const SsaDecomposition& decomp,
                           const std::vector<std::size_t>& components) {
  const std::size_t d = decomp.window;
  const std::size_t n = decomp.n_samples;
  const std::size_t k = n - d + 1;
  const std::size_t r = static_cast<std::size_t>(decomp.singular_values.size());
  const std::set<std::size_t> selected(components.begin(), components.end());
  for (const std::size_t i : selected)
    if (i >= r) throw std::out_of_range("ssa component index out of range");

  // Each triplet's anti-diagonal sums are the full convolution of its left
  // and right vectors, so the d x K outer product never materializes.
  std::vector<double> sums(n, 0.0);
  for (const std::size_t i : selected) {
    const double sigma = decomp.singular_values[static_cast<Eigen::Index>(i)];
    const auto u = decomp.left_vectors.col(static_cast<Eigen::Index>(i));
    const auto v = decomp.right_vectors.col(static_cast<Eigen::Index>(i));
    for (std::size_t t = 0; t < n; ++t) {
      const std::size_t r_lo = t >= k ? t - k + 1 : 0;
      const std::size_t r_hi = std::min(t, d - 1);
      double acc = 0.0;
      for (std::size_t row = r_lo; row <= r_hi; ++row)
        acc += u[static_cast<Eigen::Index>(row)] * v[static_cast<Eigen::Index>(t - row)];
      sums[t] += sigma * acc;
    }
  }
  std::vector<double> samples(n);
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t count = std::min({t + 1, d, k, n - t});
    samples[t] = sums[t] / double(count);
  }
  return make_series(std::move(samples), decomp.dt, "ssa_reconstruction");
}

DmdDecomposition dmd_decompose(const DelayMatrices& matrices, std::optional<std::size_t> rank) {
  const Eigen::MatrixXd& x = matrices.x_matrix;
  const Eigen::MatrixXd& y = matrices.y_matrix;
  const std::size_t d = matrices.d;
  const std::size_t cols = static_cast<std::size_t>(x.cols());
  const std::size_t max_rank = std::min(d, cols);

  Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double sigma_tol =
      double(std::max(d, cols)) * std::numeric_limits<double>::epsilon() * sigma[0];

  std::size_t r;
  if (rank) {
    r = *rank;
    if (r < 1 || r > max_rank)
      throw std::invalid_argument("dmd rank must satisfy 1 <= r <= min(d, columns)");
    if (!(sigma[static_cast<Eigen::Index>(r) - 1] > sigma_tol))
      throw numeric_error("requested dmd rank hits a numerically zero singular value");
  } else {
    // Smallest rank holding 99.9% of the squared singular-value energy,
    // capped so the reduced eigenproblem stays small at large d.
    const double total = sigma.squaredNorm();
    double acc = 0.0;
    r = max_rank;
    for (std::size_t i = 0; i < max_rank; ++i) {
      acc += sigma[static_cast<Eigen::Index>(i)] * sigma[static_cast<Eigen::Index>(i)];
      if (acc >= 0.999 * total) {
        r = i + 1;
        break;
      }
    }
    r = std::min<std::size_t>(r, 200);
    while (r > 1 && !(sigma[static_cast<Eigen::Index>(r) - 1] > sigma_tol)) --r;
  }

  const Eigen::Index ri = static_cast<Eigen::Index>(r);
  const Eigen::MatrixXd u_r = svd.matrixU().leftCols(ri);
  const Eigen::MatrixXd v_r = svd.matrixV().leftCols(ri);
  const Eigen::VectorXd s_r = sigma.head(ri);
  // Y V Sigma^-1 appears in both the reduced operator and the data-space
  // modes; build it once.
  const Eigen::MatrixXd y_vs = y * (v_r * s_r.cwiseInverse().asDiagonal());
  const Eigen::MatrixXd a_reduced = u_r.transpose() * y_vs;

  Eigen::EigenSolver<Eigen::MatrixXd> solver(a_reduced);
  if (solver.info() != Eigen::Success)
    throw numeric_error("dmd eigensolver did not converge");
  const Eigen::VectorXcd lambda = solver.eigenvalues();
  const Eigen::MatrixXcd phi = y_vs * solver.eigenvectors();

  std::vector<Eigen::Index> order(r);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    const double mi = std::abs(lambda[i]), mj = std::abs(lambda[j]);
    if (mi != mj) return mi > mj;
    const double ai = std::arg(lambda[i]), aj = std::arg(lambda[j]);
    if (ai != aj) return ai < aj;
    return i < j;
  });

  DmdDecomposition out;
  out.rank = r;
  out.d = d;
  out.dt = matrices.dt;
  out.eigenvalues.resize(ri);
  out.modes.resize(x.rows(), ri);
  out.nus.resize(ri);
  out.periods.resize(ri);
  out.oscillatory.assign(r, false);
  const double omega_floor = 1e-10 / matrices.dt;
  for (Eigen::Index i = 0; i < ri; ++i) {
    const Eigen::Index src = order[static_cast<std::size_t>(i)];
    out.eigenvalues[i] = lambda[src];
    out.modes.col(i) = phi.col(src);
    const std::complex<double> nu = std::log(lambda[src]) / matrices.dt;
    out.nus[i] = nu;
    const double omega = nu.imag();
    if (std::abs(omega) >= omega_floor) {
      out.oscillatory[static_cast<std::size_t>(i)] = true;
      out.periods[i] = kTwoPi / std::abs(omega);
    } else {
      out.periods[i] = std::numeric_limits<double>::infinity();
    }
  }
  out.contributions = dmd_contribution(out, matrices);
  return out;
}

Eigen::VectorXd dmd_contribution(const DmdDecomposition& decomp, const DelayMatrices& matrices) {
  const Eigen::MatrixXd& x = matrices.x_matrix;
  if (decomp.modes.rows() != x.rows())
    throw std::invalid_argument("decomposition and matrices disagree on embedding dimension");
  const double x_energy = x.squaredNorm();
  if (!(x_energy > 0.0)) throw numeric_error("snapshot matrix has no energy");

  Eigen::VectorXd c(decomp.modes.cols());
  for (Eigen::Index i = 0; i < decomp.modes.cols(); ++i) {
    const auto phi = decomp.modes.col(i);
    const double phi_norm2 = phi.squaredNorm();
    if (!(phi_norm2 > 0.0)) throw numeric_error("dmd mode has zero norm");
    // ||P X||_F^2 with P = phi phi^H / (phi^H phi) collapses to
    // ||phi^H X||^2 / ||phi||^2.
    const double projected = (phi.adjoint() * x).squaredNorm() / phi_norm2;
    c[i] = std::clamp(projected / x_energy, 0.0, 1.0);
  }
  return c;
}

}  // namespace def
