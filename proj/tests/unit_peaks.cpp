#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "core/peaks.hpp"
#include "core/spectrum.hpp"
#include "doctest.h"

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

def::AmplitudeSpectrum make_spectrum(const std::vector<std::pair<double, double>>& tm) {
  def::AmplitudeSpectrum s;
  s.time_index = 7;
  s.d_star = 42;
  for (const auto& [t, mag] : tm)
    s.entries.push_back({t, {mag, 0.0}, mag, -1});
  return s;
}

// Straight-line reimplementation of the whole extraction, all O(m^2), used
// as the oracle for the windowed pipeline. Formulas mirror the production
// ones exactly so results must agree to the last bit.
struct BruteForce {
  std::vector<double> a, x, baseline, prominence, background, score;
  std::vector<std::size_t> candidates, reported;

  BruteForce(const std::vector<double>& amps, const std::vector<double>& ts,
             const def::PeakParams& p, double eps_used) {
    const std::size_t m = amps.size();
    a = amps;
    x.resize(m);
    for (std::size_t i = 0; i < m; ++i) x[i] = std::log(ts[i]);
    const double half = p.w / 2.0;

    baseline.resize(m);
    prominence.resize(m);
    background.resize(m);
    score.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<double> window;
      for (std::size_t j = 0; j < m; ++j)
        if (x[j] >= x[i] - half && x[j] <= x[i] + half) window.push_back(a[j]);
      std::sort(window.begin(), window.end());
      baseline[i] = window[(window.size() - 1) / 2];
      prominence[i] = std::max(0.0, a[i] - baseline[i]);

      double sum_sq = 0.0;
      std::size_t count = 0;
      for (std::size_t j = 0; j < m; ++j) {
        if (j == i) continue;
        const double gap = std::abs(x[j] - x[i]);
        if (gap >= half && gap <= p.w) {
          sum_sq += a[j] * a[j];
          ++count;
        }
      }
      background[i] = count ? std::sqrt(sum_sq / double(count)) : 0.0;
      score[i] = prominence[i] == 0.0
                     ? 0.0
                     : prominence[i] * (prominence[i] / (eps_used + background[i]));
    }

    for (std::size_t i = 0; i < m; ++i) {
      if (!(score[i] > 0.0)) continue;
      bool best = true;
      for (std::size_t j = 0; j < m && best; ++j)
        if (j != i && std::abs(x[j] - x[i]) <= p.w && score[j] > score[i]) best = false;
      if (best) candidates.push_back(i);
    }
    reported = candidates;
    std::sort(reported.begin(), reported.end(), [&](std::size_t l, std::size_t r) {
      if (score[l] != score[r]) return score[l] > score[r];
      if (ts[l] != ts[r]) return ts[l] < ts[r];
      return l < r;
    });
    if (reported.size() > p.k_top) reported.resize(p.k_top);
  }
};

// 0.01 floor plus two Gaussian bumps in log time, heights 1.0 and 0.6.
std::vector<std::pair<double, double>> two_bump_grid(double scale = 1.0) {
  std::vector<std::pair<double, double>> tm;
  for (std::size_t i = 0; i < 200; ++i) {
    const double x = 7.0 * double(i) / 199.0;
    const double amp = 0.01 + std::exp(-(x - 2.0) * (x - 2.0) / 0.045) +
                       0.6 * std::exp(-(x - 5.0) * (x - 5.0) / 0.045);
    tm.emplace_back(std::exp(x), scale * amp);
  }
  return tm;
}

}  // namespace

TEST_CASE("running median: windows, lower-median rank, and boundaries") {
  // Spacing wider than half the window: every element is its own median.
  CHECK(def::running_median({5.0, -2.0, 7.0}, {0.0, 1.0, 2.0}, 1.0) ==
        std::vector<double>{5.0, -2.0, 7.0});

  // Dense constant input stays constant.
  CHECK(def::running_median({3.0, 3.0, 3.0, 3.0}, {0.0, 0.2, 0.4, 0.6}, 1.0) ==
        std::vector<double>{3.0, 3.0, 3.0, 3.0});

  // A single spike never lifts a wide-window baseline.
  CHECK(def::running_median({0.0, 0.0, 10.0, 0.0, 0.0}, {0.0, 1.0, 2.0, 3.0, 4.0}, 10.0) ==
        std::vector<double>{0.0, 0.0, 0.0, 0.0, 0.0});

  // Even-count windows take the lower of the two central values.
  CHECK(def::running_median({1.0, 9.0}, {0.0, 0.1}, 1.0) == std::vector<double>{1.0, 1.0});

  // Boundary windows shrink: [4 2], [4 2 6], [2 6] with rank (n-1)/2.
  CHECK(def::running_median({4.0, 2.0, 6.0}, {0.0, 1.0, 2.0}, 2.0) ==
        std::vector<double>{2.0, 4.0, 2.0});

  CHECK_THROWS_AS(def::running_median({1.0}, {0.0, 1.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(def::running_median({1.0, 2.0}, {0.0, 1.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(def::running_median({1.0, 2.0}, {1.0, 0.0}, 1.0), std::invalid_argument);
}

TEST_CASE("a flat spectrum has no peaks") {
  std::vector<std::pair<double, double>> tm;
  for (std::size_t i = 0; i < 30; ++i) tm.emplace_back(std::exp(0.05 * double(i)), 1.0);
  const auto report = def::extract_peaks(make_spectrum(tm));
  CHECK(report.diagnostics.size() == 30);
  CHECK(report.candidates.empty());
  CHECK(report.all_peaks.empty());
  CHECK(report.reported.empty());
  CHECK(report.eps_used == 1e-12);  // defaults to 1e-12 * max amplitude
  for (const auto& d : report.diagnostics) {
    CHECK(d.prominence == 0.0);
    CHECK(d.score == 0.0);
  }
  CHECK(report.time_index == 7);
  CHECK(report.d_star == 42);
}

TEST_CASE("two bumps are found where they were planted") {
  def::PeakParams params;
  params.w = 0.5;
  params.eps = 1e-9;
  params.k_top = 2;
  const auto report = def::extract_peaks(make_spectrum(two_bump_grid()), params);

  REQUIRE(report.reported.size() == 2);
  const double t_first = report.diagnostics[report.reported[0]].time_constant;
  const double t_second = report.diagnostics[report.reported[1]].time_constant;
  // Taller bump wins the top slot; both land within 5% of the planted
  // centers (one grid step is ~3.6% in T).
  CHECK(std::abs(t_first - std::exp(2.0)) <= 0.05 * std::exp(2.0));
  CHECK(std::abs(t_second - std::exp(5.0)) <= 0.05 * std::exp(5.0));
  CHECK(report.diagnostics[report.reported[0]].score >
        report.diagnostics[report.reported[1]].score);

  // Reported peaks are drawn from the candidate set; with theta = 0 every
  // candidate also clears the dominance list, and bump shoulders give the
  // dominance list extra positive-score members.
  for (const std::size_t idx : report.reported)
    CHECK(std::find(report.candidates.begin(), report.candidates.end(), idx) !=
          report.candidates.end());
  for (const std::size_t idx : report.candidates)
    CHECK(std::find(report.all_peaks.begin(), report.all_peaks.end(), idx) !=
          report.all_peaks.end());
  CHECK(report.all_peaks.size() > report.candidates.size());
}

TEST_CASE("the windowed pipeline agrees with a quadratic-time oracle") {
  def::PeakParams params;
  params.w = 0.5;
  params.eps = 1e-9;
  params.k_top = 6;
  const auto tm = two_bump_grid();
  const auto report = def::extract_peaks(make_spectrum(tm), params);

  std::vector<double> amps, ts;
  for (const auto& [t, mag] : tm) {
    ts.push_back(t);
    amps.push_back(mag);
  }
  const BruteForce oracle(amps, ts, params, report.eps_used);

  REQUIRE(report.diagnostics.size() == oracle.a.size());
  for (std::size_t i = 0; i < oracle.a.size(); ++i) {
    CHECK(report.diagnostics[i].baseline == oracle.baseline[i]);
    CHECK(report.diagnostics[i].prominence == oracle.prominence[i]);
    CHECK(report.diagnostics[i].background == oracle.background[i]);
    CHECK(report.diagnostics[i].score == oracle.score[i]);
  }
  CHECK(report.candidates == oracle.candidates);
  CHECK(report.reported == oracle.reported);
}

TEST_CASE("scores scale linearly with the spectrum when eps is zero") {
  def::PeakParams params;
  params.w = 0.5;
  params.eps = 0.0;
  const auto base = def::extract_peaks(make_spectrum(two_bump_grid()), params);
  const auto scaled = def::extract_peaks(make_spectrum(two_bump_grid(1000.0)), params);

  CHECK(base.candidates == scaled.candidates);
  CHECK(base.reported == scaled.reported);
  REQUIRE(base.diagnostics.size() == scaled.diagnostics.size());
  for (std::size_t i = 0; i < base.diagnostics.size(); ++i) {
    CHECK(scaled.diagnostics[i].isolation ==
          doctest::Approx(base.diagnostics[i].isolation).epsilon(1e-12));
    // score = prominence * prominence / background: one net power of the
    // spectrum scale survives the ratio.
    CHECK(scaled.diagnostics[i].score ==
          doctest::Approx(base.diagnostics[i].score * 1000.0).epsilon(1e-12));
  }

  // The default eps tracks max amplitude, so the ranking is scale-free
  // there too.
  const auto d_base = def::extract_peaks(make_spectrum(two_bump_grid()));
  const auto d_scaled = def::extract_peaks(make_spectrum(two_bump_grid(1000.0)));
  CHECK(d_base.reported == d_scaled.reported);
  CHECK(d_scaled.eps_used == doctest::Approx(d_base.eps_used * 1000.0).epsilon(1e-12));
}

TEST_CASE("raising one mode raises only its own neighborhood") {
  def::PeakParams params;
  params.w = 0.5;
  params.eps = 1e-9;
  auto tm = two_bump_grid();
  const auto before = def::extract_peaks(make_spectrum(tm), params);

  // Find the tall-bump center and raise it in place.
  std::size_t center = 0;
  for (std::size_t i = 1; i < tm.size(); ++i)
    if (tm[i].second > tm[center].second) center = i;
  tm[center].second *= 1.5;
  const auto after = def::extract_peaks(make_spectrum(tm), params);

  CHECK(after.diagnostics[center].score > before.diagnostics[center].score);
  CHECK(after.diagnostics[center].prominence > before.diagnostics[center].prominence);
  // Modes beyond w in log T share no window or annulus with the change.
  const double xc = std::log(tm[center].first);
  for (std::size_t i = 0; i < tm.size(); ++i) {
    if (std::abs(std::log(tm[i].first) - xc) <= params.w) continue;
    CHECK(after.diagnostics[i].score == before.diagnostics[i].score);
    CHECK(after.diagnostics[i].baseline == before.diagnostics[i].baseline);
  }
}

TEST_CASE("a lone mode is its own baseline and scores zero") {
  const auto report =
      def::extract_peaks(make_spectrum({{kInf, 5.0}, {100.0, 3.0}}));
  REQUIRE(report.diagnostics.size() == 1);  // the sentinel entry is excluded
  CHECK(report.diagnostics[0].mode == 1);
  CHECK(report.diagnostics[0].baseline == 3.0);
  CHECK(report.diagnostics[0].prominence == 0.0);
  CHECK(report.diagnostics[0].score == 0.0);
  CHECK(!report.diagnostics[0].candidate);
  CHECK(report.reported.empty());
}

TEST_CASE("an empty annulus with zero eps sends a real peak to infinite score") {
  def::PeakParams params;
  params.w = 0.5;
  params.eps = 0.0;
  // Both modes sit inside each other's half-window, so the lower median is
  // the smaller value and no mode lands in the w/2..w annulus.
  const auto report =
      def::extract_peaks(make_spectrum({{1.0, 1.0}, {std::exp(0.1), 2.0}}), params);
  REQUIRE(report.diagnostics.size() == 2);
  CHECK(report.diagnostics[0].score == 0.0);
  CHECK(report.diagnostics[1].prominence == 1.0);
  CHECK(report.diagnostics[1].background == 0.0);
  CHECK(std::isinf(report.diagnostics[1].score));
  CHECK(!report.diagnostics[0].candidate);
  CHECK(report.diagnostics[1].candidate);
  REQUIRE(report.reported.size() == 1);
  CHECK(report.reported[0] == 1);
}

TEST_CASE("equal time constants merge to the strongest twin") {
  // Conjugate pairs produce bitwise-equal T; the merged mode must point
  // back at the larger-magnitude source entry.
  const auto merged =
      def::extract_peaks(make_spectrum({{10.0, 3.0}, {10.0, 5.0}, {20.0, 1.0}, {kInf, 9.0}}));
  REQUIRE(merged.diagnostics.size() == 2);
  CHECK(merged.diagnostics[0].mode == 1);
  CHECK(merged.diagnostics[0].amplitude == 5.0);
  CHECK(merged.diagnostics[1].mode == 2);

  // Just inside the 1e-9 relative tolerance merges; well outside does not.
  const auto near =
      def::extract_peaks(make_spectrum({{10.0, 3.0}, {10.0 * (1.0 + 0.5e-9), 5.0}}));
  CHECK(near.diagnostics.size() == 1);
  const auto apart =
      def::extract_peaks(make_spectrum({{10.0, 3.0}, {10.0 * (1.0 + 1e-7), 5.0}}));
  CHECK(apart.diagnostics.size() == 2);
}

TEST_CASE("score ties inside one window keep both candidates, smaller T first") {
  def::PeakParams params;
  params.w = 0.3;
  params.eps = std::optional<double>{};  // default: 1e-12 * max a
  const auto report = def::extract_peaks(
      make_spectrum({{std::exp(0.0), 2.0},
                     {std::exp(0.04), 1.0},
                     {std::exp(0.08), 1.0},
                     {std::exp(0.12), 2.0}}),
      params);
  // All four share one window; the two ends tie exactly and neither beats
  // the other, so both survive the strict-maximum test.
  REQUIRE(report.candidates.size() == 2);
  CHECK(report.diagnostics[0].candidate);
  CHECK(report.diagnostics[3].candidate);
  CHECK(report.diagnostics[0].score == report.diagnostics[3].score);
  REQUIRE(report.reported.size() == 2);
  CHECK(report.reported[0] == 0);
  CHECK(report.reported[1] == 3);
}

TEST_CASE("mirrored clusters tie across windows and order by time constant") {
  std::vector<std::pair<double, double>> tm;
  const double shape[5] = {1.0, 2.0, 9.0, 2.0, 1.0};
  for (std::size_t i = 0; i < 5; ++i) tm.emplace_back(std::exp(0.05 * double(i)), shape[i]);
  for (std::size_t i = 0; i < 5; ++i) tm.emplace_back(std::exp(3.0 + 0.05 * double(i)), shape[i]);
  const auto report = def::extract_peaks(make_spectrum(tm));

  REQUIRE(report.reported.size() == 2);
  CHECK(report.diagnostics[report.reported[0]].score ==
        report.diagnostics[report.reported[1]].score);
  CHECK(report.diagnostics[report.reported[0]].time_constant <
        report.diagnostics[report.reported[1]].time_constant);
  CHECK(report.diagnostics[report.reported[0]].mode == 2);
  CHECK(report.diagnostics[report.reported[1]].mode == 7);
}

TEST_CASE("theta prunes the dominance list but not the ranked report") {
  def::PeakParams params;
  params.w = 0.5;
  params.eps = 1e-9;
  const auto open = def::extract_peaks(make_spectrum(two_bump_grid()), params);
  REQUIRE(open.candidates.size() >= 2);
  const double top_score =
      open.diagnostics[open.reported[0]].score;

  params.theta = 0.5 * top_score;
  const auto pruned = def::extract_peaks(make_spectrum(two_bump_grid()), params);
  CHECK(pruned.all_peaks.size() < open.all_peaks.size());
  for (const std::size_t idx : pruned.all_peaks)
    CHECK(pruned.diagnostics[idx].score >= params.theta);
  // The ranked report answers "best K" regardless of theta.
  CHECK(pruned.reported == open.reported);
}

TEST_CASE("the report honors the k_top cap") {
  def::PeakParams params;
  params.w = 0.5;
  params.eps = 1e-9;
  params.k_top = 1;
  const auto report = def::extract_peaks(make_spectrum(two_bump_grid()), params);
  REQUIRE(report.reported.size() == 1);
  const double t_top = report.diagnostics[report.reported[0]].time_constant;
  CHECK(std::abs(t_top - std::exp(2.0)) <= 0.05 * std::exp(2.0));
}

TEST_CASE("extraction rejects unusable spectra and parameters") {
  CHECK_THROWS_AS(def::extract_peaks(make_spectrum({})), std::invalid_argument);
  CHECK_THROWS_AS(def::extract_peaks(make_spectrum({{kInf, 1.0}, {kInf, 2.0}})),
                  std::invalid_argument);
  CHECK_THROWS_AS(def::extract_peaks(make_spectrum({{-5.0, 1.0}})), std::invalid_argument);
  CHECK_THROWS_AS(def::extract_peaks(make_spectrum({{0.0, 1.0}})), std::invalid_argument);

  const auto ok = make_spectrum({{10.0, 1.0}, {20.0, 2.0}});
  def::PeakParams params;
  params.w = 0.0;
  CHECK_THROWS_AS(def::extract_peaks(ok, params), std::invalid_argument);
  params.w = -1.0;
  CHECK_THROWS_AS(def::extract_peaks(ok, params), std::invalid_argument);
  params = {};
  params.eps = -1e-3;
  CHECK_THROWS_AS(def::extract_peaks(ok, params), std::invalid_argument);
  params = {};
  params.theta = -0.1;
  CHECK_THROWS_AS(def::extract_peaks(ok, params), std::invalid_argument);
  params = {};
  params.k_top = 0;
  CHECK_THROWS_AS(def::extract_peaks(ok, params), std::invalid_argument);
}
