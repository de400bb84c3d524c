#include "core/time_series.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "core/errors.hpp"
#include "core/gaussian_rng.hpp"

namespace def {

namespace {

void check_series(const std::vector<double>& samples, double dt) {
  if (samples.size() < 2) throw std::invalid_argument("time series needs N >= 2");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  for (double v : samples)
    if (!std::isfinite(v)) throw std::invalid_argument("time series samples must be finite");
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

bool parse_double(const std::string& cell, double* out) {
  if (cell.empty()) return false;
  const char* begin = cell.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end != begin + cell.size()) return false;
  *out = v;
  return true;
}

}  // namespace

TimeSeries make_series(std::vector<double> samples, double dt, std::string name) {
  check_series(samples, dt);
  return TimeSeries{std::move(samples), dt, std::move(name)};
}

InputSeries make_input(std::vector<std::vector<double>> channels, double dt) {
  if (channels.empty()) throw std::invalid_argument("input needs m >= 1 channels");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  const std::size_t n = channels.front().size();
  for (const auto& ch : channels) {
    if (ch.size() != n) throw std::invalid_argument("input channels must share one length");
    for (double v : ch)
      if (!std::isfinite(v)) throw std::invalid_argument("input samples must be finite");
  }
  return InputSeries{std::move(channels), dt};
}

TimeSeries load_series(const std::string& path, const std::string& column, double dt) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "'");

  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!trim(line).empty()) lines.push_back(line);
  }
  if (lines.empty()) throw io_error("'" + path + "': N < 2 (empty file)");

  // Header: present iff any cell of the first line fails to parse as a real.
  const auto first_cells = split_csv(lines.front());
  bool has_header = false;
  for (const auto& c : first_cells) {
    double ignored;
    if (!parse_double(c, &ignored)) {
      has_header = true;
      break;
    }
  }

  // Resolve the column selector: empty -> 0, digits -> index, else header name.
  std::size_t col = 0;
  const std::string sel = trim(column);
  if (!sel.empty()) {
    bool numeric = true;
    for (char c : sel)
      if (!std::isdigit(static_cast<unsigned char>(c))) numeric = false;
    if (numeric) {
      col = static_cast<std::size_t>(std::stoull(sel));
    } else {
      if (!has_header)
        throw io_error("'" + path + "': column '" + sel + "' needs a header line");
      col = first_cells.size();
      for (std::size_t i = 0; i < first_cells.size(); ++i)
        if (first_cells[i] == sel) {
          col = i;
          break;
        }
      if (col == first_cells.size())
        throw io_error("'" + path + "': no column named '" + sel + "'");
    }
  }

  std::vector<double> samples;
  samples.reserve(lines.size());
  for (std::size_t i = has_header ? 1 : 0; i < lines.size(); ++i) {
    const auto cells = split_csv(lines[i]);
    if (col >= cells.size())
      throw io_error("'" + path + "': row " + std::to_string(i + 1) + " has no column " +
                     std::to_string(col));
    double v = 0.0;
    if (!parse_double(cells[col], &v))
      throw io_error("'" + path + "': non-numeric cell at row " + std::to_string(i + 1));
    if (!std::isfinite(v))
      throw io_error("'" + path + "': non-finite value at row " + std::to_string(i + 1));
    samples.push_back(v);
  }
  if (samples.size() < 2) throw io_error("'" + path + "': N < 2");
  return make_series(std::move(samples), dt, path);
}

void save_series(const TimeSeries& series, const std::string& path, bool header) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write '" + path + "'");
  if (header) out << "y\n";
  char buf[40];
  for (double v : series.samples) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf << '\n';
  }
  if (!out) throw io_error("write failed for '" + path + "'");
}

TimeSeries add_gaussian_noise(const TimeSeries& series, double variance, std::uint64_t seed) {
  if (!(variance >= 0.0)) throw std::invalid_argument("noise variance must be >= 0");
  TimeSeries out = series;
  if (variance == 0.0) return out;
  GaussianRng rng(seed);
  const double sd = std::sqrt(variance);
  for (double& v : out.samples) v += sd * rng.next();
  return out;
}

}  // namespace def
