#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "core/hankel.hpp"
#include "core/linear_model.hpp"
#include "core/time_series.hpp"
#include "doctest.h"

namespace {

def::TimeSeries geometric(double rho, std::size_t n) {
  std::vector<double> y(n);
  double v = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = v;
    v *= rho;
  }
  return def::make_series(std::move(y), 1.0, "geometric");
}

// y[n+1] = c1 y[n] + c2 y[n-1] + ... from the given seed values.
def::TimeSeries recurrence(const std::vector<double>& coeffs, std::vector<double> seed,
                           std::size_t n) {
  std::vector<double> y = std::move(seed);
  while (y.size() < n) {
    double next = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) next += coeffs[k] * y[y.size() - 1 - k];
    y.push_back(next);
  }
  return def::make_series(std::move(y), 1.0, "recurrence");
}

std::vector<std::complex<double>> sorted_eigenvalues(const Eigen::MatrixXd& a) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a);
  std::vector<std::complex<double>> ev(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) ev[size_t(i)] = solver.eigenvalues()(i);
  std::sort(ev.begin(), ev.end(), [](auto l, auto r) {
    if (l.real() != r.real()) return l.real() < r.real();
    return l.imag() < r.imag();
  });
  return ev;
}

double frobenius_residual(const Eigen::MatrixXd& a, const def::DelayMatrices& m) {
  return (m.y_matrix - a * m.x_matrix).squaredNorm();
}

}  // namespace

TEST_CASE("constant series identifies the fixed point") {
  const auto s = def::make_series(std::vector<double>(20, 3.7), 1.0, "c");
  const auto model = def::identify(def::build_matrices(s, 1, 1, s.size()));
  CHECK(model.a_tilde(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(model.fit_error <= 1e-20);
}

TEST_CASE("geometric series identifies its ratio") {
  const auto s = geometric(0.9, 50);
  const auto model = def::identify(def::build_matrices(s, 1, 1, s.size()));
  CHECK(std::abs(model.a_tilde(0, 0) - 0.9) <= 1e-10);
  CHECK(model.fit_error <= 1e-20);
}

TEST_CASE("order-2 recurrence eigenvalues match the companion roots") {
  // y[n+1] = 1.5 y[n] - 0.56 y[n-1], characteristic roots 0.8 and 0.7.
  const auto s = recurrence({1.5, -0.56}, {2.0, 1.0}, 30);
  const auto model = def::identify(def::build_matrices(s, 2, 2, s.size()));
  CHECK(model.a_tilde(1, 0) == 1.0);
  CHECK(model.a_tilde(1, 1) == 0.0);
  const auto ev = sorted_eigenvalues(model.a_tilde);
  CHECK(std::abs(ev[0] - std::complex<double>(0.7, 0.0)) <= 1e-8);
  CHECK(std::abs(ev[1] - std::complex<double>(0.8, 0.0)) <= 1e-8);
}

TEST_CASE("noise-free order-3 recurrence is fitted exactly") {
  // Roots {0.9, -0.5, 0.3}: lambda^3 = 0.7 lambda^2 + 0.33 lambda - 0.135.
  const std::vector<double> coeffs = {0.7, 0.33, -0.135};
  const auto s = recurrence(coeffs, {1.0, 0.2, -0.4}, 30);
  const auto model = def::identify(def::build_matrices(s, 3, 3, s.size()));
  CHECK(model.fit_error <= 1e-16);

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(3, 3);
  companion(0, 0) = coeffs[0];
  companion(0, 1) = coeffs[1];
  companion(0, 2) = coeffs[2];
  companion(1, 0) = 1.0;
  companion(2, 1) = 1.0;
  const auto got = sorted_eigenvalues(model.a_tilde);
  const auto want = sorted_eigenvalues(companion);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(got[i] - want[i]) <= 1e-8);
}

TEST_CASE("identify rejects ranges with fewer columns than d") {
  const auto s = geometric(0.9, 10);
  CHECK_THROWS_AS(def::identify(def::build_matrices(s, 3, 3, 5)), std::invalid_argument);
}

TEST_CASE("least-squares optimality and normal equations") {
  // Imperfect model class (three tones, d=4) so the residual is nonzero and
  // the optimum is strict.
  std::vector<double> y(48);
  for (std::size_t n = 0; n < y.size(); ++n)
    y[n] = std::sin(0.3 * double(n)) + 0.01 * std::sin(7.7 * double(n)) +
           0.001 * std::cos(2.1 * double(n));
  const auto s = def::make_series(y, 1.0, "tones");
  const auto mats = def::build_matrices(s, 4, 4, s.size());
  const auto model = def::identify(mats);

  const double base = frobenius_residual(model.a_tilde, mats);
  CHECK(model.fit_error == doctest::Approx(base).epsilon(1e-9));
  for (Eigen::Index r = 0; r < 4; ++r)
    for (Eigen::Index c = 0; c < 4; ++c)
      for (double delta : {1e-4, -1e-4}) {
        Eigen::MatrixXd perturbed = model.a_tilde;
        perturbed(r, c) += delta;
        CHECK(frobenius_residual(perturbed, mats) >= base);
      }

  const Eigen::MatrixXd lhs = model.a_tilde * (mats.x_matrix * mats.x_matrix.transpose());
  const Eigen::MatrixXd rhs = mats.y_matrix * mats.x_matrix.transpose();
  CHECK((lhs - rhs).norm() <= 1e-8 * rhs.norm());
}

TEST_CASE("prediction composes the operator") {
  def::IdentifiedModel scalar;
  scalar.a_tilde = Eigen::MatrixXd::Constant(1, 1, 0.9);
  scalar.d = 1;
  Eigen::VectorXd x0(1);
  x0 << 2.0;
  CHECK(def::predict(scalar, x0, 0)(0) == 2.0);
  CHECK(def::predict(scalar, x0, 3)(0) == doctest::Approx(1.458).epsilon(1e-12));

  def::IdentifiedModel m4;
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> dist(-0.25, 0.25);
  m4.a_tilde = Eigen::MatrixXd::NullaryExpr(4, 4, [&]() { return dist(gen); });
  m4.d = 4;
  Eigen::VectorXd z0 = Eigen::VectorXd::NullaryExpr(4, [&]() { return dist(gen); });
  const Eigen::VectorXd whole = def::predict(m4, z0, 7);
  const Eigen::VectorXd split = def::predict(m4, def::predict(m4, z0, 3), 4);
  CHECK((whole - split).norm() <= 1e-12 * whole.norm());

  Eigen::VectorXd wrong(2);
  wrong << 1.0, 2.0;
  CHECK_THROWS_AS(def::predict(scalar, wrong, 1), std::invalid_argument);
}

TEST_CASE("forced prediction folds inputs step by step") {
  def::ForcedModel fm;
  fm.a_tilde = Eigen::MatrixXd::Zero(1, 1);
  fm.b_tilde = Eigen::MatrixXd::Constant(1, 1, 1.0);
  fm.d = 1;
  fm.m = 1;
  Eigen::VectorXd x0(1);
  x0 << 5.0;
  Eigen::VectorXd u0(1);
  u0 << 3.0;
  CHECK(def::predict_forced(fm, x0, {u0}, 1)(0) == 3.0);
  CHECK_THROWS_AS(def::predict_forced(fm, x0, {}, 1), std::invalid_argument);

  std::mt19937 gen(5);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  def::ForcedModel fm3;
  fm3.a_tilde = Eigen::MatrixXd::NullaryExpr(3, 3, [&]() { return dist(gen); });
  fm3.b_tilde = Eigen::MatrixXd::NullaryExpr(3, 3, [&]() { return dist(gen); });
  fm3.d = 3;
  fm3.m = 1;
  const Eigen::VectorXd z0 = Eigen::VectorXd::NullaryExpr(3, [&]() { return dist(gen); });
  const Eigen::VectorXd w0 = Eigen::VectorXd::NullaryExpr(3, [&]() { return dist(gen); });
  const Eigen::VectorXd one_step = def::predict_forced(fm3, z0, {w0}, 1);
  const Eigen::VectorXd direct = fm3.a_tilde * z0 + fm3.b_tilde * w0;
  CHECK((one_step - direct).norm() <= 1e-15);

  // All-zero inputs reduce to the autonomous prediction.
  def::IdentifiedModel plain;
  plain.a_tilde = fm3.a_tilde;
  plain.d = 3;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(3);
  const Eigen::VectorXd forced = def::predict_forced(fm3, z0, {zero, zero}, 2);
  const Eigen::VectorXd autonomous = def::predict(plain, z0, 2);
  CHECK((forced - autonomous).norm() <= 1e-15);
}

TEST_CASE("zero input leaves the identified operator unchanged") {
  const auto s = recurrence({1.5, -0.56}, {2.0, 1.0}, 40);
  const auto mats = def::build_matrices(s, 2, 2, s.size());
  const auto input = def::make_input({std::vector<double>(s.size(), 0.0)}, 1.0);
  const auto umats = def::build_input_matrices(input, 2, 2, s.size());

  const auto plain = def::identify(mats);
  const auto forced = def::identify_forced(mats, umats);
  CHECK(forced.b_tilde.cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((forced.a_tilde - plain.a_tilde).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("forced scalar system recovers gain and input weight") {
  const std::size_t n = 60;
  std::vector<double> u(n), x(n);
  x[0] = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = std::sin(0.7 * double(i)) + 0.3 * std::cos(1.3 * double(i)) + 0.5;
    if (i + 1 < n) x[i + 1] = 0.5 * x[i] + u[i];
  }
  const auto s = def::make_series(x, 1.0, "forced");
  const auto input = def::make_input({u}, 1.0);
  const auto model = def::identify_forced(def::build_matrices(s, 1, 1, n),
                                          def::build_input_matrices(input, 1, 1, n));
  CHECK(std::abs(model.a_tilde(0, 0) - 0.5) <= 1e-8);
  CHECK(std::abs(model.b_tilde(0, 0) - 1.0) <= 1e-8);
  CHECK(model.fit_error <= 1e-18);
}

TEST_CASE("on a plateau the forced fit matches an autonomous one") {
  // Piecewise-constant drive; inside one plateau the response is an affine
  // first-order recurrence, which an unforced order-2 model represents
  // exactly (extra unit root), so both residuals vanish.
  const std::size_t n = 100;
  std::vector<double> u(n), x(n);
  x[0] = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = i < 30 ? 2.0 : (i < 70 ? 5.0 : 2.5);
    if (i + 1 < n) x[i + 1] = 0.5 * x[i] + u[i];
  }
  const auto s = def::make_series(x, 1.0, "pwc");
  const auto input = def::make_input({u}, 1.0);

  const auto plain = def::identify(def::build_matrices(s, 2, 40, 65));
  const auto forced = def::identify_forced(def::build_matrices(s, 2, 40, 65),
                                           def::build_input_matrices(input, 2, 40, 65));
  CHECK(plain.fit_error <= 1e-18);
  CHECK(forced.fit_error <= 1e-18);
  CHECK(std::abs(plain.fit_error - forced.fit_error) <= 1e-18);
}

TEST_CASE("aic on exact data reduces to the complexity penalty") {
  const auto s = geometric(0.9, 50);
  const std::size_t d = 1, l = 5;
  const double denom = double(s.size() - d - l);

  const double noise_free = def::aic(s, d, l, 0.0);
  CHECK(noise_free <= 1e-18);

  const double sigma2 = 1e-4;
  const double penalty = 2.0 * double(d) * sigma2 / denom;
  CHECK(def::aic(s, d, l, sigma2) == doctest::Approx(penalty).epsilon(1e-9));

  // Decomposition: the penalty enters as one final addition.
  CHECK(def::aic(s, d, l, sigma2) == noise_free + penalty);
}

TEST_CASE("aic matches a normal-equation reimplementation") {
  std::vector<double> y(48);
  for (std::size_t n = 0; n < y.size(); ++n)
    y[n] = std::sin(0.3 * double(n)) + 0.01 * std::sin(7.7 * double(n)) +
           0.001 * std::cos(2.1 * double(n));
  const auto s = def::make_series(y, 1.0, "tones");
  const std::size_t n = y.size(), d = 4, l = 3;
  const double sigma2 = 1e-4;

  // Independent route: explicit element indexing, normal equations, and the
  // L-ahead residual written out column by column.
  Eigen::MatrixXd x(d, n - d), yy(d, n - d);
  for (std::size_t j = 0; j < n - d; ++j)
    for (std::size_t r = 0; r < d; ++r) {
      x(Eigen::Index(r), Eigen::Index(j)) = y[d - 1 + j - r];
      yy(Eigen::Index(r), Eigen::Index(j)) = y[d + j - r];
    }
  const Eigen::MatrixXd a =
      (x * x.transpose()).ldlt().solve(x * yy.transpose()).transpose();
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(d, d);
  for (std::size_t i = 0; i < l; ++i) power = a * power;

  double residual = 0.0;
  const std::size_t cols = n - d - l + 1;
  for (std::size_t j = 0; j < cols; ++j) {
    double pred = 0.0;
    for (std::size_t r = 0; r < d; ++r) pred += power(0, Eigen::Index(r)) * y[d - 1 + j - r];
    const double err = y[d + l - 1 + j] - pred;
    residual += err * err;
  }
  const double denom = double(n - d - l);
  const double expect = residual / denom + 2.0 * double(d) * sigma2 / denom;

  CHECK(def::aic(s, d, l, sigma2) == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("aic argument validation") {
  const auto s = geometric(0.9, 20);
  CHECK_THROWS_AS(def::aic(s, 15, 5, 0.0), std::invalid_argument);  // N - d - L <= 0
  CHECK_THROWS_AS(def::aic(s, 2, 0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(def::aic(s, 2, 5, -1.0), std::invalid_argument);
}

TEST_CASE("forced aic reduces to the unforced value on zero input") {
  std::vector<double> y(60);
  for (std::size_t n = 0; n < y.size(); ++n)
    y[n] = std::sin(0.3 * double(n)) + 0.05 * std::cos(1.9 * double(n));
  const auto s = def::make_series(y, 1.0, "tones");
  const auto zero = def::make_input({std::vector<double>(y.size(), 0.0)}, 1.0);
  const double plain = def::aic(s, 3, 4, 1e-5);
  const double forced = def::aic_forced(s, zero, 3, 4, 1e-5);
  CHECK(std::abs(forced - plain) <= 1e-12 * plain);
}

TEST_CASE("forced aic vanishes on exactly forced data") {
  const std::size_t n = 60;
  std::vector<double> u(n), x(n);
  x[0] = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = std::sin(0.7 * double(i)) + 0.3 * std::cos(1.3 * double(i)) + 0.5;
    if (i + 1 < n) x[i + 1] = 0.5 * x[i] + u[i];
  }
  const auto s = def::make_series(x, 1.0, "forced");
  const auto input = def::make_input({u}, 1.0);
  const std::size_t d = 1, l = 3;
  CHECK(def::aic_forced(s, input, d, l, 0.0) <= 1e-18);

  const double sigma2 = 2e-4;
  const double penalty = 2.0 * double(d) * sigma2 / double(n - d - l);
  CHECK(def::aic_forced(s, input, d, l, sigma2) == doctest::Approx(penalty).epsilon(1e-9));
}

TEST_CASE("order selection handles singletons, ties, and infeasible candidates") {
  const auto s = geometric(0.9, 20);
  const auto single = def::select_order(s, {3}, 5, 0.0);
  CHECK(single.d_star == 3);
  REQUIRE(single.candidates.size() == 1);
  CHECK(bool(single.feasible[0]));

  // All-zero data fits every order with a bitwise-zero criterion; the tie
  // must resolve to the smallest candidate.
  const auto flat = def::make_series(std::vector<double>(20, 0.0), 1.0, "zero");
  const auto tie = def::select_order(flat, {3, 1, 2}, 5, 0.0);
  CHECK(tie.candidates == std::vector<std::size_t>{1, 2, 3});
  for (double v : tie.aic_values) CHECK(v == 0.0);
  CHECK(tie.d_star == 1);

  // d = N - L violates N - d - L > 0: kept in the report, excluded from argmin.
  const auto mixed = def::select_order(s, {2, 15}, 5, 1e-6);
  REQUIRE(mixed.candidates.size() == 2);
  CHECK(bool(mixed.feasible[0]));
  CHECK(!bool(mixed.feasible[1]));
  CHECK(std::isnan(mixed.aic_values[1]));
  CHECK(mixed.d_star == 2);

  CHECK_THROWS_AS(def::select_order(s, {}, 5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(def::select_order(s, {15, 16}, 5, 0.0), std::invalid_argument);
}

TEST_CASE("relative aic curves are normalized to a zero minimum") {
  std::vector<double> y(80);
  for (std::size_t n = 0; n < y.size(); ++n)
    y[n] = std::sin(0.3 * double(n)) + 0.05 * std::cos(1.9 * double(n));
  const auto s = def::make_series(y, 1.0, "tones");

  const auto curves = def::relative_aic_curves(s, {2, 3, 4, 6}, {1, 2}, 1e-6);
  REQUIRE(curves.size() == 2);
  for (const auto& [l, curve] : curves) {
    REQUIRE(curve.size() == 4);
    double lo = curve[0].second;
    for (std::size_t i = 1; i < curve.size(); ++i) {
      CHECK(curve[i].first > curve[i - 1].first);  // sorted by d
      lo = std::min(lo, curve[i].second);
    }
    CHECK(lo == 0.0);
    for (const auto& [d, v] : curve) CHECK(v >= 0.0);
  }

  const auto degenerate = def::relative_aic_curves(s, {5}, {3}, 1e-6);
  REQUIRE(degenerate.at(3).size() == 1);
  CHECK(degenerate.at(3)[0].first == 5);
  CHECK(degenerate.at(3)[0].second == 0.0);

  // Every (d, L) pair must be feasible up front.
  CHECK_THROWS_AS(def::relative_aic_curves(s, {2, 78}, {1}, 1e-6), std::invalid_argument);
}

TEST_CASE("aic consistency between sweep and single evaluations") {
  std::vector<double> y(80);
  for (std::size_t n = 0; n < y.size(); ++n)
    y[n] = std::sin(0.3 * double(n)) + 0.05 * std::cos(1.9 * double(n));
  const auto s = def::make_series(y, 1.0, "tones");
  const auto sel = def::select_order(s, {2, 4, 8}, 5, 1e-6);
  for (std::size_t i = 0; i < sel.candidates.size(); ++i)
    CHECK(sel.aic_values[i] == def::aic(s, sel.candidates[i], 5, 1e-6));
}
