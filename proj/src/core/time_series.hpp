#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace def {

// Uniformly sampled scalar series y[0..N-1]. N >= 2, dt > 0, samples finite.
struct TimeSeries {
  std::vector<double> samples;
  double dt = 1.0;
  std::string name;

  std::size_t size() const { return samples.size(); }
};

// Multichannel exogenous input u[c][n]; every channel shares the paired
// series' length and dt.
struct InputSeries {
  std::vector<std::vector<double>> channels;
  double dt = 1.0;

  std::size_t channel_count() const { return channels.size(); }
  std::size_t size() const { return channels.empty() ? 0 : channels.front().size(); }
};

// Checked constructors; throw std::invalid_argument on invariant violation.
TimeSeries make_series(std::vector<double> samples, double dt, std::string name = {});
InputSeries make_input(std::vector<std::vector<double>> channels, double dt);

// Load one column of a CSV file as a series. `column` selects by header name
// or by 0-based index ("" means column 0). dt comes out-of-band. Throws
// io_error on missing files, non-numeric cells (with row index), or N < 2.
TimeSeries load_series(const std::string& path, const std::string& column, double dt);

// One sample per line, %.17g, optional "y" header line.
void save_series(const TimeSeries& series, const std::string& path, bool header = false);

// series + i.i.d. N(0, variance) draws; pure in (series, variance, seed).
TimeSeries add_gaussian_noise(const TimeSeries& series, double variance, std::uint64_t seed);

}  // namespace def
