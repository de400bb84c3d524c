#include "core/result_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"
#include "json.hpp"

namespace def {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open for writing: " + path);
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw io_error("write failed: " + path);
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open: " + path);
  return in;
}

std::string trimmed(std::string line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
    line.pop_back();
  std::size_t start = 0;
  while (start < line.size() && (line[start] == ' ' || line[start] == '\t')) ++start;
  return line.substr(start);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, ',')) cells.push_back(trimmed(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_double(const std::string& cell, const std::string& path, std::size_t row) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    char buf[64];
    std::snprintf(buf, sizeof buf, ": row %zu is not numeric: ", row);
    throw io_error(path + buf + cell);
  }
  return value;
}

std::size_t parse_index(const std::string& cell, const std::string& path, std::size_t row) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  const unsigned long long value = std::strtoull(begin, &end, 10);
  if (end == begin || *end != '\0') {
    char buf[64];
    std::snprintf(buf, sizeof buf, ": row %zu is not an index: ", row);
    throw io_error(path + buf + cell);
  }
  return static_cast<std::size_t>(value);
}

void expect_header(std::ifstream& in, const std::string& path, const std::string& want) {
  std::string line;
  if (!std::getline(in, line) || trimmed(line) != want)
    throw io_error(path + ": expected header \"" + want + "\"");
}

// JSON has no infinity literal; time constants saturate to the string form.
ordered_json json_real(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return value;
}

void dump_json(const ordered_json& doc, const std::string& path) {
  std::ofstream out = open_out(path);
  out << doc.dump(2) << '\n';
  finish(out, path);
}

ordered_json meta_json(const ResultMeta& meta) {
  return ordered_json{{"d_star", meta.d_star},
                      {"L", meta.l_horizon},
                      {"sigma2", meta.sigma2},
                      {"dt", meta.dt},
                      {"N", meta.n_samples}};
}

ordered_json peak_row(const PeakReport& report, std::size_t idx) {
  const PeakDiagnostics& diag = report.diagnostics[idx];
  return ordered_json{{"mode", diag.mode},
                      {"time_constant", diag.time_constant},
                      {"amplitude", diag.amplitude},
                      {"score", diag.score}};
}

}  // namespace

ResultMeta meta_from(const OrderSelection& selection) {
  ResultMeta meta;
  meta.d_star = selection.d_star;
  meta.l_horizon = selection.l_horizon;
  meta.sigma2 = selection.sigma2;
  meta.dt = selection.dt;
  meta.n_samples = selection.n_samples;
  return meta;
}

void write_spectrum_csv(const AmplitudeSpectrum& spectrum, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "time_constant,amplitude_abs,amplitude_re,amplitude_im\n";
  for (const SpectrumEntry& entry : spectrum.entries)
    out << fmt(entry.time_constant) << ',' << fmt(entry.magnitude) << ','
        << fmt(entry.amplitude.real()) << ',' << fmt(entry.amplitude.imag()) << '\n';
  finish(out, path);
}

AmplitudeSpectrum read_spectrum_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  expect_header(in, path, "time_constant,amplitude_abs,amplitude_re,amplitude_im");
  AmplitudeSpectrum spectrum;
  std::string line;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    const std::string body = trimmed(line);
    if (body.empty()) continue;
    const std::vector<std::string> cells = split_csv(body);
    if (cells.size() != 4) {
      char buf[64];
      std::snprintf(buf, sizeof buf, ": row %zu has %zu cells, want 4", row, cells.size());
      throw io_error(path + buf);
    }
    SpectrumEntry entry;
    entry.time_constant = parse_double(cells[0], path, row);
    entry.magnitude = parse_double(cells[1], path, row);
    entry.amplitude = {parse_double(cells[2], path, row), parse_double(cells[3], path, row)};
    spectrum.entries.push_back(entry);
  }
  return spectrum;
}

void write_aic_csv(const OrderSelection& selection, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "d,aic\n";
  for (std::size_t i = 0; i < selection.candidates.size(); ++i)
    out << selection.candidates[i] << ',' << fmt(selection.aic_values[i]) << '\n';
  finish(out, path);
}

std::vector<std::pair<std::size_t, double>> read_aic_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  expect_header(in, path, "d,aic");
  std::vector<std::pair<std::size_t, double>> rows;
  std::string line;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    const std::string body = trimmed(line);
    if (body.empty()) continue;
    const std::vector<std::string> cells = split_csv(body);
    if (cells.size() != 2) {
      char buf[64];
      std::snprintf(buf, sizeof buf, ": row %zu has %zu cells, want 2", row, cells.size());
      throw io_error(path + buf);
    }
    rows.emplace_back(parse_index(cells[0], path, row), parse_double(cells[1], path, row));
  }
  return rows;
}

void write_ssa_csv(const std::vector<std::pair<std::size_t, TimeSeries>>& components,
                   const std::string& path) {
  std::ofstream out = open_out(path);
  out << "component,value\n";
  for (const auto& [index, series] : components)
    for (const double value : series.samples) out << index << ',' << fmt(value) << '\n';
  finish(out, path);
}

void write_dmd_csv(const DmdDecomposition& decomp, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "period,contribution,re_lambda,im_lambda,alpha,omega\n";
  for (Eigen::Index i = 0; i < decomp.eigenvalues.size(); ++i) {
    if (!decomp.oscillatory[static_cast<std::size_t>(i)]) continue;
    out << fmt(decomp.periods[i]) << ',' << fmt(decomp.contributions[i]) << ','
        << fmt(decomp.eigenvalues[i].real()) << ',' << fmt(decomp.eigenvalues[i].imag()) << ','
        << fmt(decomp.nus[i].real()) << ',' << fmt(decomp.nus[i].imag()) << '\n';
  }
  finish(out, path);
}

void write_selection_json(const OrderSelection& selection, const std::string& path) {
  ordered_json payload;
  payload["candidates"] = selection.candidates;
  payload["aic"] = selection.aic_values;
  payload["feasible"] = ordered_json::array();
  for (const char flag : selection.feasible) payload["feasible"].push_back(flag != 0);
  dump_json(ordered_json{{"meta", meta_json(meta_from(selection))}, {"payload", payload}}, path);
}

void write_modes_json(const ModeSet& modes, const ResultMeta& meta, const std::string& path) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < modes.mode_count(); ++i) {
    rows.push_back(ordered_json{
        {"re_lambda", modes.eigenvalues[i].real()},
        {"im_lambda", modes.eigenvalues[i].imag()},
        {"re_nu", modes.nus[i].real()},
        {"im_nu", modes.nus[i].imag()},
        {"time_constant", json_real(modes.time_constants[i])},
        {"fit_residual", modes.fit_residuals[i]},
        {"decay_sign", modes.decay_signs[static_cast<std::size_t>(i)]},
        {"high_residual", bool(modes.high_residual[static_cast<std::size_t>(i)])}});
  }
  ordered_json payload{{"d", modes.d},
                       {"min_eigen_gap", modes.min_eigen_gap},
                       {"non_distinct", modes.non_distinct},
                       {"rank_deficient", modes.rank_deficient},
                       {"modes", rows}};
  dump_json(ordered_json{{"meta", meta_json(meta)}, {"payload", payload}}, path);
}

void write_peaks_json(const PeakReport& report, const ResultMeta& meta, const std::string& path) {
  ordered_json params{{"w", report.params.w},
                      {"eps", report.eps_used},
                      {"theta", report.params.theta},
                      {"k_top", report.params.k_top}};
  ordered_json candidates = ordered_json::array();
  for (const std::size_t idx : report.candidates) {
    const PeakDiagnostics& diag = report.diagnostics[idx];
    candidates.push_back(ordered_json{{"mode", diag.mode},
                                      {"time_constant", diag.time_constant},
                                      {"amplitude", diag.amplitude},
                                      {"baseline", diag.baseline},
                                      {"prominence", diag.prominence},
                                      {"background", diag.background},
                                      {"isolation", diag.isolation},
                                      {"score", diag.score}});
  }
  ordered_json all_peaks = ordered_json::array();
  for (const std::size_t idx : report.all_peaks) all_peaks.push_back(peak_row(report, idx));
  ordered_json reported = ordered_json::array();
  for (const std::size_t idx : report.reported) reported.push_back(peak_row(report, idx));

  ordered_json payload{{"n", report.time_index}, {"params", params},
                       {"candidates", candidates}, {"all_peaks", all_peaks},
                       {"reported", reported}};
  dump_json(ordered_json{{"meta", meta_json(meta)}, {"payload", payload}}, path);
}

void write_toy_config_json(const ToyConfig& cfg, const std::string& path) {
  dump_json(ordered_json{{"k", cfg.k},
                         {"m0", cfg.m0},
                         {"m1", cfg.m1},
                         {"amplitude", cfg.amplitude},
                         {"t0", cfg.t0},
                         {"t1", cfg.t1},
                         {"tau0", half_period(cfg.k, cfg.m0)},
                         {"tau1", half_period(cfg.k, cfg.m1)},
                         {"n_samples", cfg.n_samples},
                         {"dt", cfg.dt},
                         {"noise_variance", cfg.noise_variance},
                         {"seed", cfg.seed}},
            path);
}

}  // namespace def
