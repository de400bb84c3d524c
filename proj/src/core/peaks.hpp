#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "core/spectrum.hpp"

namespace def {

// Knobs for peak extraction on a log-time-constant axis. `w` is the window
// width in natural-log units; `eps` stabilizes the isolation ratio and
// defaults to 1e-12 times the largest amplitude when unset; `theta` is the
// dominance threshold for the full peak list; `k_top` caps the report.
struct PeakParams {
  double w = 0.25;
  std::optional<double> eps;
  double theta = 0.0;
  std::size_t k_top = 6;
};

// Per-mode numbers behind the extraction, on the merged axis sorted by
// log T ascending. `mode` points back into the source spectrum entries.
struct PeakDiagnostics {
  std::size_t mode = 0;
  double time_constant = 0.0;
  double amplitude = 0.0;   // a
  double log_t = 0.0;       // x
  double baseline = 0.0;    // b, running lower-median within w/2
  double prominence = 0.0;  // p = max(0, a - b)
  double background = 0.0;  // e, RMS over the w/2..w annulus
  double isolation = 0.0;   // s = p / (eps + e)
  double score = 0.0;       // q = p s
  bool candidate = false;   // local q maximum within +-w
};

struct PeakReport {
  std::size_t time_index = 0;
  std::size_t d_star = 0;
  PeakParams params;
  double eps_used = 0.0;
  std::vector<PeakDiagnostics> diagnostics;  // log T ascending
  std::vector<std::size_t> candidates;       // indices into diagnostics, same order
  std::vector<std::size_t> all_peaks;        // score >= theta (and > 0), same order
  std::vector<std::size_t> reported;         // top k_top candidates, score descending
};

// Element i is the lower median of values whose key lies within window/2 of
// keys[i]. Keys must be non-decreasing and the two lists equally long.
std::vector<double> running_median(const std::vector<double>& values,
                                   const std::vector<double>& keys, double window);

// Runs the extraction on the finite-time-constant part of the spectrum.
// Conjugate twins (equal T within 1e-9 relative) merge to the larger
// magnitude first. Throws if no finite entry remains or any T <= 0.
PeakReport extract_peaks(const AmplitudeSpectrum& spectrum, const PeakParams& params = {});

}  // namespace def
