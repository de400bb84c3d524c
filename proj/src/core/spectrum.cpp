#include "core/spectrum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "core/errors.hpp"
#include "core/hankel.hpp"

namespace def {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kDegenerateEigenvalue = 1e-12;
constexpr double kNonDistinctGap = 1e-12;
constexpr double kPolishTrigger = 1e-3;

struct BasisFit {
  std::complex<double> b{0.0, 0.0};
  double residual = 0.0;
};

// Least-squares scale for a fixed exponent. The exponent is shifted so the
// basis magnitudes stay <= 1; the shift cancels out of b * basis, so the
// residual is exact even when e^{nu (d-1) dt} alone would overflow.
BasisFit fit_scale(const Eigen::VectorXcd& v, std::complex<double> nu, double dt) {
  const Eigen::Index d = v.size();
  const double shift = nu.real() >= 0.0 ? nu.real() * double(d - 1) * dt : 0.0;
  Eigen::VectorXcd basis(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const double age = double(d - 1 - k) * dt;
    basis[k] = std::exp(std::complex<double>(nu.real() * age - shift, nu.imag() * age));
  }
  const std::complex<double> scaled = basis.dot(v) / basis.squaredNorm();
  BasisFit fit;
  fit.residual = (v - scaled * basis).squaredNorm() / v.squaredNorm();
  fit.b = scaled * std::exp(-shift);
  return fit;
}

double residual_at(const Eigen::VectorXcd& v, double re, double im, double dt) {
  return fit_scale(v, std::complex<double>(re, im), dt).residual;
}

// Nelder-Mead over (Re nu, Im nu). Only reached when the closed-form
// estimate leaves a visible residual, so a modest iteration cap suffices.
std::complex<double> polish_nu(const Eigen::VectorXcd& v, std::complex<double> nu0, double dt,
                               double* best_residual) {
  using Point = std::array<double, 2>;
  const double span = double(v.size() - 1) * dt;
  const double h = 0.5 / (span > 0.0 ? span : 1.0);
  std::array<Point, 3> s = {Point{nu0.real(), nu0.imag()},
                            Point{nu0.real() + h, nu0.imag()},
                            Point{nu0.real(), nu0.imag() + h}};
  std::array<double, 3> f;
  for (int i = 0; i < 3; ++i) f[i] = residual_at(v, s[i][0], s[i][1], dt);

  auto order = [&]() {
    std::array<int, 3> idx = {0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return f[a] < f[b]; });
    return idx;
  };
  for (int it = 0; it < 200; ++it) {
    const auto idx = order();
    const int lo = idx[0], mid = idx[1], hi = idx[2];
    if (f[hi] - f[lo] <= 1e-15 * (1.0 + f[lo])) break;
    const Point c = {(s[lo][0] + s[mid][0]) / 2.0, (s[lo][1] + s[mid][1]) / 2.0};
    const Point xr = {2.0 * c[0] - s[hi][0], 2.0 * c[1] - s[hi][1]};
    const double fr = residual_at(v, xr[0], xr[1], dt);
    if (fr < f[lo]) {
      const Point xe = {3.0 * c[0] - 2.0 * s[hi][0], 3.0 * c[1] - 2.0 * s[hi][1]};
      const double fe = residual_at(v, xe[0], xe[1], dt);
      if (fe < fr) { s[hi] = xe; f[hi] = fe; } else { s[hi] = xr; f[hi] = fr; }
    } else if (fr < f[mid]) {
      s[hi] = xr;
      f[hi] = fr;
    } else {
      const Point xc = {(c[0] + s[hi][0]) / 2.0, (c[1] + s[hi][1]) / 2.0};
      const double fc = residual_at(v, xc[0], xc[1], dt);
      if (fc < f[hi]) {
        s[hi] = xc;
        f[hi] = fc;
      } else {
        for (int i : {mid, hi}) {
          s[i] = {(s[i][0] + s[lo][0]) / 2.0, (s[i][1] + s[lo][1]) / 2.0};
          f[i] = residual_at(v, s[i][0], s[i][1], dt);
        }
      }
    }
  }
  const auto idx = order();
  *best_residual = f[idx[0]];
  return {s[idx[0]][0], s[idx[0]][1]};
}

template <class Fn>
auto run_stage(const char* name, Fn&& fn) -> decltype(fn()) {
  const auto tag = [name](const char* what) { return std::string(name) + ": " + what; };
  try {
    return fn();
  } catch (const io_error& e) {
    throw io_error(tag(e.what()));
  } catch (const numeric_error& e) {
    throw numeric_error(tag(e.what()));
  } catch (const std::out_of_range& e) {
    throw std::out_of_range(tag(e.what()));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(tag(e.what()));
  }
}

}  // namespace

ModeSet eigendecompose(const IdentifiedModel& model) {
  const Eigen::MatrixXd& a = model.a_tilde;
  if (a.rows() == 0 || a.rows() != a.cols())
    throw std::invalid_argument("operator must be square and non-empty");
  if (!a.allFinite()) throw std::invalid_argument("operator has non-finite entries");

  Eigen::EigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "eigensolver did not converge for a %td x %td operator "
                  "(reciprocal condition estimate %.3e)",
                  static_cast<ptrdiff_t>(a.rows()), static_cast<ptrdiff_t>(a.cols()),
                  a.partialPivLu().rcond());
    throw numeric_error(buf);
  }
  const Eigen::VectorXcd lambda = solver.eigenvalues();
  const Eigen::MatrixXcd vectors = solver.eigenvectors();
  const Eigen::Index d = lambda.size();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    const double mi = std::abs(lambda[i]), mj = std::abs(lambda[j]);
    if (mi != mj) return mi > mj;
    const double ai = std::arg(lambda[i]), aj = std::arg(lambda[j]);
    if (ai != aj) return ai < aj;
    return i < j;
  });

  ModeSet modes;
  modes.eigenvalues.resize(d);
  modes.eigenvectors.resize(d, d);
  for (Eigen::Index out = 0; out < d; ++out) {
    const Eigen::Index src = order[static_cast<std::size_t>(out)];
    modes.eigenvalues[out] = lambda[src];
    Eigen::VectorXcd col = vectors.col(src);
    col /= col.norm();
    Eigen::Index peak = 0;
    double peak_mag = -1.0;
    for (Eigen::Index k = 0; k < d; ++k) {
      const double mag = std::abs(col[k]);
      if (mag > peak_mag) {
        peak_mag = mag;
        peak = k;
      }
    }
    // Rotate the dominant component onto the positive real axis so the
    // vector (and everything fitted to it) is solver-independent.
    col *= std::conj(col[peak]) / peak_mag;
    modes.eigenvectors.col(out) = col;
  }

  double min_gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i + 1; j < d; ++j)
      min_gap = std::min(min_gap, std::abs(modes.eigenvalues[i] - modes.eigenvalues[j]));
  modes.min_eigen_gap = min_gap;
  modes.non_distinct = d >= 2 && min_gap < kNonDistinctGap;

  modes.rank_deficient = model.rank_deficient;
  modes.d = model.d;
  modes.dt = model.dt;
  modes.n_source = model.n_source;
  return modes;
}

ExponentialFit fit_exponential(const Eigen::VectorXcd& eigenvector, double dt) {
  const Eigen::Index d = eigenvector.size();
  if (d < 2) throw std::invalid_argument("exponential fit needs at least two entries");
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw std::invalid_argument("dt must be positive and finite");
  if (!eigenvector.allFinite())
    throw std::invalid_argument("eigenvector has non-finite entries");
  const Eigen::VectorXd mags = eigenvector.cwiseAbs();
  const double top = mags.maxCoeff();
  if (!(top > 0.0)) throw std::invalid_argument("cannot fit an exponential to the zero vector");
  const double tol = 1e-12 * top;

  std::complex<double> nu{0.0, 0.0};
  bool have_nu = false;

  // Each valid consecutive pair satisfies V_k / V_{k+1} = e^{nu dt} on a
  // pure exponential, so the mean of the log ratios is the estimate. The
  // angle of each ratio joins the mean on the branch nearest the running
  // average, which keeps frequencies near Nyquist from folding.
  double sum_mag = 0.0, sum_ang = 0.0;
  Eigen::Index used = 0;
  for (Eigen::Index k = 0; k + 1 < d; ++k) {
    if (mags[k] <= tol || mags[k + 1] <= tol) continue;
    const std::complex<double> ratio = eigenvector[k] / eigenvector[k + 1];
    double ang = std::arg(ratio);
    if (used > 0) {
      const double running = sum_ang / double(used);
      ang += kTwoPi * std::round((running - ang) / kTwoPi);
    }
    sum_mag += std::log(std::abs(ratio));
    sum_ang += ang;
    ++used;
  }
  if (used > 0) {
    nu = std::complex<double>(sum_mag, sum_ang) / (double(used) * dt);
    have_nu = true;
  }

  if (!have_nu) {
    // Interior zeros broke every consecutive ratio; regress log V against
    // the index over the surviving entries instead. Phases unwrap toward
    // the previous retained entry.
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < d; ++k)
      if (mags[k] > tol) keep.push_back(k);
    if (keep.size() >= 2) {
      std::vector<std::complex<double>> logs(keep.size());
      double prev = std::arg(eigenvector[keep[0]]);
      logs[0] = {std::log(mags[keep[0]]), prev};
      for (std::size_t j = 1; j < keep.size(); ++j) {
        double ph = std::arg(eigenvector[keep[j]]);
        ph += kTwoPi * std::round((prev - ph) / kTwoPi);
        logs[j] = {std::log(mags[keep[j]]), ph};
        prev = ph;
      }
      double mean_k = 0.0;
      std::complex<double> mean_w{0.0, 0.0};
      for (std::size_t j = 0; j < keep.size(); ++j) {
        mean_k += double(keep[j]);
        mean_w += logs[j];
      }
      mean_k /= double(keep.size());
      mean_w /= double(keep.size());
      double skk = 0.0;
      std::complex<double> skw{0.0, 0.0};
      for (std::size_t j = 0; j < keep.size(); ++j) {
        const double dk = double(keep[j]) - mean_k;
        skk += dk * dk;
        skw += dk * (logs[j] - mean_w);
      }
      // log V_k = log b + nu (d-1-k) dt, so the slope over k is -nu dt.
      nu = -(skw / skk) / dt;
    }
    // With a single usable entry there is no rate information; nu stays 0
    // and the residual reports how poor that is.
  }

  BasisFit fit = fit_scale(eigenvector, nu, dt);
  if (fit.residual > kPolishTrigger) {
    double polished = fit.residual;
    const std::complex<double> candidate = polish_nu(eigenvector, nu, dt, &polished);
    if (polished < fit.residual) {
      nu = candidate;
      fit = fit_scale(eigenvector, nu, dt);
    }
  }
  return {nu, fit.b, fit.residual};
}

ModeSet build_mode_set(const IdentifiedModel& model, double residual_flag_threshold) {
  const ModeSet full = eigendecompose(model);

  // Numerically zero eigenvalues (rank-deficient sources produce them)
  // have no exponential content and are dropped rather than fitted.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < full.mode_count(); ++i)
    if (std::abs(full.eigenvalues[i]) >= kDegenerateEigenvalue) keep.push_back(i);

  ModeSet modes;
  modes.min_eigen_gap = full.min_eigen_gap;
  modes.non_distinct = full.non_distinct;
  modes.rank_deficient = full.rank_deficient;
  modes.d = full.d;
  modes.dt = full.dt;
  modes.n_source = full.n_source;

  const Eigen::Index m = static_cast<Eigen::Index>(keep.size());
  modes.eigenvalues.resize(m);
  modes.eigenvectors.resize(full.eigenvectors.rows(), m);
  modes.nus.resize(m);
  modes.scales.resize(m);
  modes.fit_residuals.resize(m);
  modes.time_constants.resize(m);
  modes.decay_signs.assign(static_cast<std::size_t>(m), 0);
  modes.high_residual.assign(static_cast<std::size_t>(m), false);

  // Below this decay rate a mode cannot be told apart from a constant over
  // a hundred lifetimes of the record, so its time constant saturates.
  const std::size_t span = std::max<std::size_t>(modes.n_source, modes.d);
  const double floor_nu = 1.0 / (100.0 * double(span) * modes.dt);

  for (Eigen::Index j = 0; j < m; ++j) {
    const Eigen::Index i = keep[static_cast<std::size_t>(j)];
    modes.eigenvalues[j] = full.eigenvalues[i];
    modes.eigenvectors.col(j) = full.eigenvectors.col(i);
    const ExponentialFit fit = fit_exponential(full.eigenvectors.col(i), modes.dt);
    modes.nus[j] = fit.nu;
    modes.scales[j] = fit.b;
    modes.fit_residuals[j] = fit.residual;
    modes.high_residual[static_cast<std::size_t>(j)] = fit.residual > residual_flag_threshold;
    const double rate = fit.nu.real();
    if (std::abs(rate) < floor_nu) {
      modes.time_constants[j] = std::numeric_limits<double>::infinity();
      modes.decay_signs[static_cast<std::size_t>(j)] = 0;
    } else {
      modes.time_constants[j] = 1.0 / std::abs(rate);
      modes.decay_signs[static_cast<std::size_t>(j)] = rate > 0.0 ? 1 : -1;
    }
  }
  return modes;
}

AmplitudeSpectrum amplitude_at(const TimeSeries& series, const ModeSet& modes, std::size_t n,
                               AmplitudeEstimator estimator) {
  const std::size_t d = modes.d;
  if (d == 0) throw std::invalid_argument("mode set has no delay order");
  if (n + 1 < d || n >= series.size())
    throw std::out_of_range("query index must satisfy d-1 <= n < N");

  AmplitudeSpectrum spectrum;
  spectrum.time_index = n;
  spectrum.d_star = d;
  const Eigen::Index m = modes.mode_count();
  if (m == 0) return spectrum;
  if (modes.time_constants.size() != m || modes.nus.size() != m)
    throw std::invalid_argument("mode set lacks exponential fits; run build_mode_set first");

  spectrum.entries.reserve(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    std::complex<double> amplitude{0.0, 0.0};
    if (estimator == AmplitudeEstimator::kExponentialBasis) {
      const std::complex<double> step = std::exp(modes.nus[i] * modes.dt);
      std::complex<double> weight{1.0, 0.0};
      for (std::size_t k = 0; k < d; ++k) {
        amplitude += series.samples[n - k] * weight;
        weight *= step;
      }
    } else {
      for (std::size_t k = 0; k < d; ++k)
        amplitude += series.samples[n - k] * modes.eigenvectors(static_cast<Eigen::Index>(k), i);
    }
    const double magnitude = std::abs(amplitude);
    if (!std::isfinite(magnitude)) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "amplitude overflow for mode %td at index %zu",
                    static_cast<ptrdiff_t>(i), n);
      throw numeric_error(buf);
    }
    spectrum.entries.push_back({modes.time_constants[i], amplitude, magnitude,
                                modes.decay_signs[static_cast<std::size_t>(i)]});
  }
  std::stable_sort(spectrum.entries.begin(), spectrum.entries.end(),
                   [](const SpectrumEntry& a, const SpectrumEntry& b) {
                     return a.time_constant < b.time_constant;
                   });
  return spectrum;
}

AmplitudeSpectrum amplitude_forced(const TimeSeries& series, const InputSeries& input,
                                   const ForcedModel& model, const ModeSet& modes,
                                   std::size_t n) {
  const std::size_t d = model.d;
  if (modes.d != d) throw std::invalid_argument("mode set and forced model disagree on order");
  if (input.channel_count() != model.m)
    throw std::invalid_argument("input channel count does not match the model");
  if (input.size() != series.size())
    throw std::invalid_argument("input is misaligned: length differs from the series");
  if (input.dt != series.dt)
    throw std::invalid_argument("input is misaligned: dt differs from the series");
  if (model.b_tilde.rows() != static_cast<Eigen::Index>(d) ||
      model.b_tilde.cols() != static_cast<Eigen::Index>(d * model.m))
    throw std::invalid_argument("forced model has inconsistent input-map shape");
  if (n + 1 < d || n + 1 >= series.size())
    throw std::out_of_range("forced amplitude needs d-1 <= n and n+1 < N");

  const Eigen::Index m = modes.mode_count();
  AmplitudeSpectrum spectrum;
  spectrum.time_index = n;
  spectrum.d_star = d;
  if (m == 0) return spectrum;
  if (modes.time_constants.size() != m)
    throw std::invalid_argument("mode set lacks exponential fits; run build_mode_set first");

  // Strip the one-step input contribution, then project what the free
  // dynamics must explain onto each eigenvector.
  const Eigen::VectorXd x_next = delay_vector(series, n + 1, d);
  const Eigen::VectorXd u_now = input_delay_vector(input, n, d);
  const Eigen::VectorXd free_part = x_next - model.b_tilde * u_now;

  spectrum.entries.reserve(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    std::complex<double> amplitude{0.0, 0.0};
    for (std::size_t k = 0; k < d; ++k)
      amplitude += free_part[static_cast<Eigen::Index>(k)] *
                   modes.eigenvectors(static_cast<Eigen::Index>(k), i);
    const double magnitude = std::abs(amplitude);
    if (!std::isfinite(magnitude)) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "amplitude overflow for mode %td at index %zu",
                    static_cast<ptrdiff_t>(i), n);
      throw numeric_error(buf);
    }
    spectrum.entries.push_back({modes.time_constants[i], amplitude, magnitude,
                                modes.decay_signs[static_cast<std::size_t>(i)]});
  }
  std::stable_sort(spectrum.entries.begin(), spectrum.entries.end(),
                   [](const SpectrumEntry& a, const SpectrumEntry& b) {
                     return a.time_constant < b.time_constant;
                   });
  return spectrum;
}

DefResult analyze(const TimeSeries& series, const std::vector<std::size_t>& candidates,
                  std::size_t l_horizon, double sigma2,
                  const std::vector<std::size_t>& query_indices,
                  AmplitudeEstimator estimator) {
  DefResult result;
  result.selection = run_stage("order selection", [&] {
    return select_order(series, candidates, l_horizon, sigma2);
  });
  const std::size_t d_star = result.selection.d_star;
  result.model = run_stage("identification", [&] {
    return identify(build_matrices(series, d_star, d_star, series.size()));
  });
  result.modes = run_stage("mode decomposition", [&] { return build_mode_set(result.model); });
  result.spectra.reserve(query_indices.size());
  for (const std::size_t n : query_indices) {
    result.spectra.push_back(run_stage("amplitude evaluation", [&] {
      return amplitude_at(series, result.modes, n, estimator);
    }));
  }
  return result;
}

}  // namespace def
