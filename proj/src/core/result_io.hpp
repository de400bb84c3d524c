#pragma once

#include <string>
#include <utility>
#include <vector>

#include "core/baselines.hpp"
#include "core/linear_model.hpp"
#include "core/peaks.hpp"
#include "core/spectrum.hpp"
#include "core/toy_model.hpp"

namespace def {

// Context block shared by every JSON result: {"meta": {...}, "payload": ...}.
struct ResultMeta {
  std::size_t d_star = 0;
  std::size_t l_horizon = 0;
  double sigma2 = 0.0;
  double dt = 1.0;
  std::size_t n_samples = 0;
};

ResultMeta meta_from(const OrderSelection& selection);

// Reals are rendered with %.17g throughout so parsed values are bitwise
// equal to what was written; infinities appear as "inf".

// "time_constant,amplitude_abs,amplitude_re,amplitude_im", one mode per row.
void write_spectrum_csv(const AmplitudeSpectrum& spectrum, const std::string& path);
// Restores the entries; time_index and d_star are not part of the schema
// and come back as 0.
AmplitudeSpectrum read_spectrum_csv(const std::string& path);

// "d,aic", one candidate per row (infeasible candidates carry nan).
void write_aic_csv(const OrderSelection& selection, const std::string& path);
std::vector<std::pair<std::size_t, double>> read_aic_csv(const std::string& path);

// "component,value" long form: each selected component contributes one row
// per sample, in time order.
void write_ssa_csv(const std::vector<std::pair<std::size_t, TimeSeries>>& components,
                   const std::string& path);

// "period,contribution,re_lambda,im_lambda,alpha,omega" for the oscillatory
// modes, in decomposition order.
void write_dmd_csv(const DmdDecomposition& decomp, const std::string& path);

void write_selection_json(const OrderSelection& selection, const std::string& path);
void write_modes_json(const ModeSet& modes, const ResultMeta& meta, const std::string& path);
void write_peaks_json(const PeakReport& report, const ResultMeta& meta, const std::string& path);
void write_toy_config_json(const ToyConfig& cfg, const std::string& path);

}  // namespace def
