#include "core/peaks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace def {

std::vector<double> running_median(const std::vector<double>& values,
                                   const std::vector<double>& keys, double window) {
  if (values.size() != keys.size())
    throw std::invalid_argument("running median: values and keys differ in length");
  if (!(window > 0.0)) throw std::invalid_argument("running median: window must be positive");
  for (std::size_t i = 1; i < keys.size(); ++i)
    if (keys[i] < keys[i - 1])
      throw std::invalid_argument("running median: keys must be non-decreasing");

  const double half = window / 2.0;
  std::vector<double> medians(values.size());
  std::size_t lo = 0;
  std::vector<double> scratch;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    while (keys[lo] < keys[i] - half) ++lo;
    std::size_t hi = i;
    while (hi + 1 < keys.size() && keys[hi + 1] <= keys[i] + half) ++hi;
    scratch.assign(values.begin() + long(lo), values.begin() + long(hi) + 1);
    // Lower median: the (count-1)/2 order statistic, no averaging, so the
    // output is always one of the inputs.
    const std::size_t rank = (scratch.size() - 1) / 2;
    std::nth_element(scratch.begin(), scratch.begin() + long(rank), scratch.end());
    medians[i] = scratch[rank];
  }
  return medians;
}

PeakReport extract_peaks(const AmplitudeSpectrum& spectrum, const PeakParams& params) {
  if (!(params.w > 0.0)) throw std::invalid_argument("peak window w must be positive");
  if (params.eps && !(*params.eps >= 0.0))
    throw std::invalid_argument("eps must be non-negative");
  if (!(params.theta >= 0.0)) throw std::invalid_argument("theta must be non-negative");
  if (params.k_top < 1) throw std::invalid_argument("k_top must be at least 1");

  struct Entry {
    std::size_t mode;
    double t;
    double a;
  };
  std::vector<Entry> finite;
  finite.reserve(spectrum.entries.size());
  for (std::size_t i = 0; i < spectrum.entries.size(); ++i) {
    const SpectrumEntry& e = spectrum.entries[i];
    if (std::isinf(e.time_constant)) continue;
    if (!(e.time_constant > 0.0))
      throw std::invalid_argument("spectrum contains a non-positive time constant");
    finite.push_back({i, e.time_constant, e.magnitude});
  }
  if (finite.empty())
    throw std::invalid_argument("spectrum has no finite-time-constant entries");

  std::stable_sort(finite.begin(), finite.end(),
                   [](const Entry& a, const Entry& b) { return a.t < b.t; });

  // Conjugate modes share one physical time scale; collapse runs of equal T
  // (1e-9 relative, anchored at the run head) to the strongest member.
  std::vector<Entry> merged;
  merged.reserve(finite.size());
  std::size_t i = 0;
  while (i < finite.size()) {
    Entry best = finite[i];
    std::size_t j = i + 1;
    while (j < finite.size() && finite[j].t - finite[i].t <= 1e-9 * finite[i].t) {
      if (finite[j].a > best.a) best = finite[j];
      ++j;
    }
    merged.push_back(best);
    i = j;
  }

  const std::size_t m = merged.size();
  PeakReport report;
  report.time_index = spectrum.time_index;
  report.d_star = spectrum.d_star;
  report.params = params;

  std::vector<double> a(m), x(m);
  for (std::size_t idx = 0; idx < m; ++idx) {
    a[idx] = merged[idx].a;
    x[idx] = std::log(merged[idx].t);
  }
  const double max_a = *std::max_element(a.begin(), a.end());
  report.eps_used = params.eps ? *params.eps : 1e-12 * max_a;

  const std::vector<double> baseline = running_median(a, x, params.w);

  report.diagnostics.resize(m);
  const double half = params.w / 2.0;
  for (std::size_t idx = 0; idx < m; ++idx) {
    PeakDiagnostics& diag = report.diagnostics[idx];
    diag.mode = merged[idx].mode;
    diag.time_constant = merged[idx].t;
    diag.amplitude = a[idx];
    diag.log_t = x[idx];
    diag.baseline = baseline[idx];
    diag.prominence = std::max(0.0, a[idx] - baseline[idx]);

    double sum_sq = 0.0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == idx) continue;
      const double gap = std::abs(x[j] - x[idx]);
      if (gap >= half && gap <= params.w) {
        sum_sq += a[j] * a[j];
        ++count;
      }
    }
    diag.background = count ? std::sqrt(sum_sq / double(count)) : 0.0;
    // A zero-prominence mode scores zero outright; otherwise an empty or
    // silent annulus with eps = 0 legitimately sends the score to +inf.
    if (diag.prominence == 0.0) {
      diag.isolation = 0.0;
      diag.score = 0.0;
    } else {
      diag.isolation = diag.prominence / (report.eps_used + diag.background);
      diag.score = diag.prominence * diag.isolation;
    }
  }

  // Candidates are strict peaks of the score: positive, and not beaten by
  // any neighbor within +-w (ties survive on both sides).
  for (std::size_t idx = 0; idx < m; ++idx) {
    PeakDiagnostics& diag = report.diagnostics[idx];
    if (!(diag.score > 0.0)) continue;
    bool is_max = true;
    for (std::size_t j = 0; j < m && is_max; ++j) {
      if (j == idx) continue;
      if (std::abs(x[j] - x[idx]) <= params.w && report.diagnostics[j].score > diag.score)
        is_max = false;
    }
    diag.candidate = is_max;
    if (is_max) report.candidates.push_back(idx);
  }

  for (std::size_t idx = 0; idx < m; ++idx) {
    const double q = report.diagnostics[idx].score;
    if (q > 0.0 && q >= params.theta) report.all_peaks.push_back(idx);
  }

  report.reported = report.candidates;
  std::sort(report.reported.begin(), report.reported.end(), [&](std::size_t l, std::size_t r) {
    const PeakDiagnostics& dl = report.diagnostics[l];
    const PeakDiagnostics& dr = report.diagnostics[r];
    if (dl.score != dr.score) return dl.score > dr.score;
    if (dl.time_constant != dr.time_constant) return dl.time_constant < dr.time_constant;
    return l < r;
  });
  if (report.reported.size() > params.k_top) report.reported.resize(params.k_top);
  return report;
}

}  // namespace def
