// Command-line front end. Every numeric operation goes through the public
// C interface in def/def.h; this file only parses flags, moves buffers,
// and formats text.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "def/def.h"
#include "json.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

// Abnormal ends carry the process exit code: 1 usage, 2 numeric failure.
struct ExitWith {
  int code;
  std::string message;
};

[[noreturn]] void usage_error(const std::string& message) { throw ExitWith{1, message}; }

void check(def_status status) {
  if (status == DEF_OK) return;
  throw ExitWith{status == DEF_NUMERIC_ERROR ? 2 : 1, def_last_error()};
}

template <typename T, void (*Free)(T*)>
struct Guard {
  T* h = nullptr;
  Guard() = default;
  ~Guard() { Free(h); }
  Guard(const Guard&) = delete;
  Guard& operator=(const Guard&) = delete;
  Guard(Guard&& o) noexcept : h(o.h) { o.h = nullptr; }
  Guard& operator=(Guard&& o) noexcept {
    if (this != &o) {
      Free(h);
      h = o.h;
      o.h = nullptr;
    }
    return *this;
  }
  T** slot() { return &h; }
  operator T*() const { return h; }
};

using Series = Guard<def_series, def_series_free>;
using Matrices = Guard<def_matrices, def_matrices_free>;
using Model = Guard<def_model, def_model_free>;
using Selection = Guard<def_selection, def_selection_free>;
using Curves = Guard<def_aic_curves, def_aic_curves_free>;
using Modes = Guard<def_modes, def_modes_free>;
using Spectrum = Guard<def_spectrum, def_spectrum_free>;
using Result = Guard<def_result, def_result_free>;
using Peaks = Guard<def_peaks, def_peaks_free>;
using Ssa = Guard<def_ssa, def_ssa_free>;
using Dmd = Guard<def_dmd, def_dmd_free>;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Grid syntax: a single value ("1200"), a comma list ("2,5,9"), or an
// inclusive range "start:stop:step" (":step" optional, default 1).
// Delay orders and horizons must be positive; component indices may be 0.
std::vector<std::size_t> parse_grid(const std::string& text, bool allow_zero = false) {
  const auto parse_one = [&](const std::string& piece) -> std::size_t {
    if (piece.empty() || piece.find_first_not_of("0123456789") != std::string::npos)
      usage_error("bad grid element '" + piece + "' in '" + text + "'");
    return std::stoull(piece);
  };
  std::vector<std::size_t> grid;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::string piece;
    std::istringstream in(text);
    while (std::getline(in, piece, ':')) parts.push_back(piece);
    if (parts.size() < 2 || parts.size() > 3)
      usage_error("range syntax is start:stop[:step], got '" + text + "'");
    const std::size_t start = parse_one(parts[0]);
    const std::size_t stop = parse_one(parts[1]);
    const std::size_t step = parts.size() == 3 ? parse_one(parts[2]) : 1;
    if (step == 0) usage_error("range step must be positive in '" + text + "'");
    if (start > stop) usage_error("range start exceeds stop in '" + text + "'");
    for (std::size_t v = start; v <= stop; v += step) grid.push_back(v);
  } else {
    std::string piece;
    std::istringstream in(text);
    while (std::getline(in, piece, ',')) grid.push_back(parse_one(piece));
  }
  if (grid.empty()) usage_error("empty grid '" + text + "'");
  if (!allow_zero)
    for (std::size_t v : grid)
      if (v == 0) usage_error("grid values must be positive in '" + text + "'");
  return grid;
}

fs::path prepare_out(const std::string& out) {
  fs::path dir = out.empty() ? fs::path(".") : fs::path(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) usage_error("cannot create output directory '" + dir.string() + "'");
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  if (!out) usage_error("cannot write '" + path.string() + "'");
}

void write_sidecar(const fs::path& dir, const ordered_json& config) {
  write_text(dir / "run_config.json", config.dump(2) + "\n");
}

Series load_input_series(const std::string& path, const std::string& column, double dt) {
  Series s;
  check(def_series_load(path.c_str(), column.c_str(), dt, s.slot()));
  return s;
}

// Shared flag bundles ------------------------------------------------

struct IoOpts {
  std::string in;
  std::string column;
  double dt = 1.0;
  std::string out;
};

void add_io(CLI::App* cmd, IoOpts& io, bool requires_input = true) {
  auto* in = cmd->add_option("--in", io.in, "input series CSV");
  if (requires_input) in->required();
  cmd->add_option("--column", io.column, "CSV column, by header name or 0-based index");
  cmd->add_option("--dt", io.dt, "sampling period")->check(CLI::PositiveNumber);
  cmd->add_option("--out", io.out, "output directory")->envname("DEF_OUT_DIR");
}

struct PeakOpts {
  double w = 0.25;
  double eps = -1.0;
  double theta = 0.0;
  std::size_t k_top = 6;
};

void add_peak_opts(CLI::App* cmd, PeakOpts& p) {
  cmd->add_option("--w", p.w, "peak window width in log-time units");
  cmd->add_option("--eps", p.eps, "isolation stabilizer (negative = automatic)");
  cmd->add_option("--theta", p.theta, "dominance threshold for the full peak list");
  cmd->add_option("--k-top", p.k_top, "report size cap");
}

def_peak_params to_params(const PeakOpts& p) {
  def_peak_params params;
  params.w = p.w;
  params.eps = p.eps;
  params.theta = p.theta;
  params.k_top = p.k_top;
  return params;
}

def_estimator to_estimator(const std::string& name) {
  return name == "proj" ? DEF_ESTIMATOR_PROJECTION : DEF_ESTIMATOR_EXP_BASIS;
}

std::vector<std::size_t> resolve_candidates(const std::string& omega, std::size_t d_single) {
  if (!omega.empty() && d_single > 0)
    usage_error("pass either --omega or --d, not both");
  if (!omega.empty()) return parse_grid(omega);
  if (d_single > 0) return {d_single};
  usage_error("an order grid is required: pass --omega or --d");
}

// Result emission ----------------------------------------------------

void emit_selection(const Selection& sel, const fs::path& dir) {
  check(def_selection_write_csv(sel, (dir / "aic.csv").string().c_str()));
  check(def_selection_write_json(sel, (dir / "selection.json").string().c_str()));
}

// One spectrum CSV and one peak report per query index.
void emit_query(const Spectrum& spec, const Selection& sel, const PeakOpts& peak_opts,
                const fs::path& dir, std::size_t n) {
  check(def_spectrum_write_csv(spec, (dir / ("spectrum_" + std::to_string(n) + ".csv")).string().c_str()));
  const def_peak_params params = to_params(peak_opts);
  Peaks peaks;
  check(def_peaks_extract(spec, &params, peaks.slot()));
  check(def_peaks_write_json(peaks, sel,
                             (dir / ("peaks_" + std::to_string(n) + ".json")).string().c_str()));

  const std::size_t reported = def_peaks_reported_count(peaks);
  std::cout << "n=" << n << ": " << reported << " peak(s) reported";
  if (reported > 0) {
    std::vector<std::size_t> idx(reported);
    check(def_peaks_reported(peaks, idx.data(), reported));
    std::vector<double> t(def_peaks_count(peaks)), score(def_peaks_count(peaks));
    check(def_peaks_diagnostics(peaks, nullptr, t.data(), nullptr, nullptr, nullptr, nullptr,
                                nullptr, score.data(), nullptr, t.size()));
    std::cout << ", top T=" << fmt17(t[idx[0]]) << " score=" << fmt17(score[idx[0]]);
  }
  std::cout << "\n";
}

// Subcommands --------------------------------------------------------

struct GenerateOpts {
  std::string preset;
  def_toy_config cfg{1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0, 1.0, 0.0, 1};
  bool emit_velocity = false;
  bool emit_input = false;
  std::string out;
  CLI::Option* opts[10] = {};
};

void run_generate(const GenerateOpts& g) {
  // Flags land in g.cfg during parsing; a preset replaces the base values
  // but any explicitly given flag still wins, field by field.
  def_toy_config cfg = g.cfg;
  if (g.preset == "toy-sec3") {
    def_toy_benchmark_config(&cfg);
    const def_toy_config& f = g.cfg;
    if (g.opts[0]->count()) cfg.k = f.k;
    if (g.opts[1]->count()) cfg.m0 = f.m0;
    if (g.opts[2]->count()) cfg.m1 = f.m1;
    if (g.opts[3]->count()) cfg.amplitude = f.amplitude;
    if (g.opts[4]->count()) cfg.t0 = f.t0;
    if (g.opts[5]->count()) cfg.t1 = f.t1;
    if (g.opts[6]->count()) cfg.n_samples = f.n_samples;
    if (g.opts[7]->count()) cfg.dt = f.dt;
    if (g.opts[8]->count()) cfg.noise_variance = f.noise_variance;
    if (g.opts[9]->count()) cfg.seed = f.seed;
  }
  check(def_toy_validate(&cfg));

  const fs::path dir = prepare_out(g.out);
  Series position, velocity;
  check(def_toy_simulate(&cfg, position.slot(), velocity.slot()));
  check(def_series_save(position, (dir / "position.csv").string().c_str(), 1));
  if (g.emit_velocity)
    check(def_series_save(velocity, (dir / "velocity.csv").string().c_str(), 1));
  if (g.emit_input) {
    const std::size_t n = cfg.n_samples;
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i)
      check(def_toy_input_at(&cfg, double(i) * cfg.dt, &u[i]));
    Series input;
    check(def_series_create(u.data(), n, cfg.dt, "input", input.slot()));
    check(def_series_save(input, (dir / "input.csv").string().c_str(), 1));
  }
  check(def_toy_write_config_json(&cfg, (dir / "config.json").string().c_str()));

  ordered_json rc;
  rc["subcommand"] = "generate";
  rc["preset"] = g.preset;
  rc["n_samples"] = cfg.n_samples;
  rc["dt"] = cfg.dt;
  rc["noise_variance"] = cfg.noise_variance;
  rc["seed"] = cfg.seed;
  rc["emit_velocity"] = g.emit_velocity;
  rc["emit_input"] = g.emit_input;
  write_sidecar(dir, rc);
  std::cout << "wrote " << (dir / "position.csv").string() << " (N=" << cfg.n_samples << ")\n";
}

void run_select_order(const IoOpts& io, const std::string& omega, std::size_t l_horizon,
                      double sigma2) {
  const fs::path dir = prepare_out(io.out);
  const Series s = load_input_series(io.in, io.column, io.dt);
  const std::vector<std::size_t> grid = parse_grid(omega);
  Selection sel;
  check(def_select_order(s, grid.data(), grid.size(), l_horizon, sigma2, sel.slot()));
  emit_selection(sel, dir);

  ordered_json rc;
  rc["subcommand"] = "select-order";
  rc["in"] = io.in;
  rc["column"] = io.column;
  rc["dt"] = io.dt;
  rc["omega"] = omega;
  rc["L"] = l_horizon;
  rc["sigma2"] = sigma2;
  write_sidecar(dir, rc);
  std::cout << "d_star = " << def_selection_d_star(sel) << "\n";
}

void run_analyze(const IoOpts& io, const std::string& omega, std::size_t d_single,
                 std::size_t l_horizon, double sigma2, const std::vector<std::size_t>& at,
                 const std::string& estimator, const PeakOpts& peak_opts) {
  if (at.empty()) usage_error("at least one --at query index is required");
  const fs::path dir = prepare_out(io.out);
  const Series s = load_input_series(io.in, io.column, io.dt);
  const std::vector<std::size_t> grid = resolve_candidates(omega, d_single);

  Result result;
  check(def_analyze(s, grid.data(), grid.size(), l_horizon, sigma2, at.data(), at.size(),
                    to_estimator(estimator), result.slot()));
  Selection sel;
  check(def_result_selection(result, sel.slot()));
  emit_selection(sel, dir);
  Modes modes;
  check(def_result_modes(result, modes.slot()));
  check(def_modes_write_json(modes, sel, (dir / "modes.json").string().c_str()));

  std::cout << "d_star = " << def_selection_d_star(sel) << ", " << def_modes_count(modes)
            << " modes\n";
  for (std::size_t i = 0; i < at.size(); ++i) {
    Spectrum spec;
    check(def_result_spectrum(result, i, spec.slot()));
    emit_query(spec, sel, peak_opts, dir, at[i]);
  }

  ordered_json rc;
  rc["subcommand"] = "analyze";
  rc["in"] = io.in;
  rc["column"] = io.column;
  rc["dt"] = io.dt;
  rc["omega"] = omega.empty() ? std::to_string(d_single) : omega;
  rc["L"] = l_horizon;
  rc["sigma2"] = sigma2;
  rc["at"] = at;
  rc["estimator"] = estimator;
  rc["w"] = peak_opts.w;
  rc["eps"] = peak_opts.eps;
  rc["theta"] = peak_opts.theta;
  rc["k_top"] = peak_opts.k_top;
  write_sidecar(dir, rc);
}

void run_peaks(const std::string& spectrum_path, const PeakOpts& peak_opts,
               const std::string& out) {
  const fs::path dir = prepare_out(out);
  Spectrum spec;
  check(def_spectrum_read_csv(spectrum_path.c_str(), spec.slot()));
  const def_peak_params params = to_params(peak_opts);
  Peaks peaks;
  check(def_peaks_extract(spec, &params, peaks.slot()));
  check(def_peaks_write_json(peaks, nullptr, (dir / "peaks.json").string().c_str()));

  const std::size_t reported = def_peaks_reported_count(peaks);
  std::vector<std::size_t> idx(reported);
  if (reported) check(def_peaks_reported(peaks, idx.data(), reported));
  const std::size_t rows = def_peaks_count(peaks);
  std::vector<double> t(rows), score(rows);
  check(def_peaks_diagnostics(peaks, nullptr, t.data(), nullptr, nullptr, nullptr, nullptr,
                              nullptr, score.data(), nullptr, rows));
  std::cout << reported << " peak(s) reported\n";
  for (std::size_t i : idx)
    std::cout << "T=" << fmt17(t[i]) << " score=" << fmt17(score[i]) << "\n";

  ordered_json rc;
  rc["subcommand"] = "peaks";
  rc["spectrum"] = spectrum_path;
  rc["w"] = peak_opts.w;
  rc["eps"] = peak_opts.eps;
  rc["theta"] = peak_opts.theta;
  rc["k_top"] = peak_opts.k_top;
  write_sidecar(dir, rc);
}

// Writes the singular spectrum, the per-component reconstructions, and the
// summed reconstruction; returns the relative reconstruction error.
double emit_ssa(const Series& s, std::size_t window, const std::vector<std::size_t>& components,
                const fs::path& dir) {
  Ssa ssa;
  check(def_ssa_decompose(s, window, ssa.slot()));
  const std::size_t rank = def_ssa_rank(ssa);
  std::vector<double> sv(rank);
  check(def_ssa_singular_values(ssa, sv.data(), rank));
  std::string text = "k,sigma\n";
  for (std::size_t i = 0; i < rank; ++i)
    text += std::to_string(i) + "," + fmt17(sv[i]) + "\n";
  write_text(dir / "singular.csv", text);

  for (std::size_t c : components)
    if (c >= rank) usage_error("component " + std::to_string(c) + " exceeds the rank");
  check(def_ssa_write_csv(ssa, components.data(), components.size(),
                          (dir / "components.csv").string().c_str()));
  Series recon;
  check(def_ssa_reconstruct(ssa, components.data(), components.size(), recon.slot()));
  check(def_series_save(recon, (dir / "reconstruction.csv").string().c_str(), 1));

  const std::size_t n = def_series_size(s);
  std::vector<double> y(n), r(n);
  check(def_series_values(s, y.data(), n));
  check(def_series_values(recon, r.data(), n));
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (r[i] - y[i]) * (r[i] - y[i]);
    den += y[i] * y[i];
  }
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

void run_ssa(const IoOpts& io, std::size_t window, const std::string& components_text) {
  const fs::path dir = prepare_out(io.out);
  const Series s = load_input_series(io.in, io.column, io.dt);
  const std::vector<std::size_t> components = parse_grid(components_text, true);
  const double err = emit_ssa(s, window, components, dir);
  std::cout << "relative reconstruction error = " << fmt17(err) << "\n";

  ordered_json rc;
  rc["subcommand"] = "ssa";
  rc["in"] = io.in;
  rc["column"] = io.column;
  rc["dt"] = io.dt;
  rc["window"] = window;
  rc["components"] = components;
  write_sidecar(dir, rc);
}

// Emits the mode table; returns the dominant oscillatory period when one
// exists.
std::optional<double> emit_dmd(const Series& s, std::size_t d, std::size_t rank,
                               const fs::path& dir) {
  Matrices m;
  check(def_matrices_build(s, d, 0, 0, m.slot()));
  Dmd dmd;
  check(def_dmd_decompose(m, rank, dmd.slot()));
  check(def_dmd_write_csv(dmd, (dir / "dmd.csv").string().c_str()));

  const std::size_t r = def_dmd_rank(dmd);
  std::vector<double> periods(r), contributions(r);
  std::vector<int> oscillatory(r);
  check(def_dmd_values(dmd, nullptr, nullptr, periods.data(), oscillatory.data(),
                       contributions.data(), r));
  std::optional<double> dominant;
  double best = -1.0;
  for (std::size_t i = 0; i < r; ++i)
    if (oscillatory[i] && contributions[i] > best) {
      best = contributions[i];
      dominant = periods[i];
    }
  std::cout << "rank = " << r;
  if (dominant) std::cout << ", dominant oscillatory period = " << fmt17(*dominant);
  std::cout << "\n";
  return dominant;
}

void run_dmd(const IoOpts& io, std::size_t d, std::size_t rank) {
  const fs::path dir = prepare_out(io.out);
  const Series s = load_input_series(io.in, io.column, io.dt);
  emit_dmd(s, d, rank, dir);

  ordered_json rc;
  rc["subcommand"] = "dmd";
  rc["in"] = io.in;
  rc["column"] = io.column;
  rc["dt"] = io.dt;
  rc["d"] = d;
  rc["rank"] = rank;
  write_sidecar(dir, rc);
}

void run_aic_curves(const IoOpts& io, const std::string& omega, const std::string& l_text,
                    double sigma2) {
  const fs::path dir = prepare_out(io.out);
  const Series s = load_input_series(io.in, io.column, io.dt);
  const std::vector<std::size_t> grid = parse_grid(omega);
  const std::vector<std::size_t> horizons = parse_grid(l_text);

  Curves curves;
  check(def_aic_curves_compute(s, grid.data(), grid.size(), horizons.data(), horizons.size(),
                               sigma2, curves.slot()));
  const std::size_t nd = def_aic_curves_grid_count(curves);
  std::vector<std::size_t> ds(nd);
  check(def_aic_curves_grid(curves, ds.data(), nd));
  const std::size_t nl = def_aic_curves_horizon_count(curves);
  std::vector<std::size_t> ls(nl);
  check(def_aic_curves_horizons(curves, ls.data(), nl));
  for (std::size_t l : ls) {
    std::vector<double> vals(nd);
    check(def_aic_curves_values(curves, l, vals.data(), nd));
    std::string text = "d,aic\n";
    for (std::size_t i = 0; i < nd; ++i)
      text += std::to_string(ds[i]) + "," + fmt17(vals[i]) + "\n";
    write_text(dir / ("aic_rel_L" + std::to_string(l) + ".csv"), text);
  }
  std::cout << "wrote " << nl << " relative curve(s) over " << nd << " orders\n";

  ordered_json rc;
  rc["subcommand"] = "aic-curves";
  rc["in"] = io.in;
  rc["column"] = io.column;
  rc["dt"] = io.dt;
  rc["omega"] = omega;
  rc["L"] = l_text;
  rc["sigma2"] = sigma2;
  write_sidecar(dir, rc);
}

void run_compare(const IoOpts& io, const std::string& omega, std::size_t d_single,
                 std::size_t l_horizon, double sigma2, const std::vector<std::size_t>& at,
                 const std::string& estimator, const PeakOpts& peak_opts, std::size_t window,
                 std::size_t rank) {
  if (at.empty()) usage_error("at least one --at query index is required");
  const fs::path dir = prepare_out(io.out);
  const Series s = load_input_series(io.in, io.column, io.dt);
  const std::vector<std::size_t> grid = resolve_candidates(omega, d_single);

  Result result;
  check(def_analyze(s, grid.data(), grid.size(), l_horizon, sigma2, at.data(), at.size(),
                    to_estimator(estimator), result.slot()));
  Selection sel;
  check(def_result_selection(result, sel.slot()));
  emit_selection(sel, dir);
  Modes modes;
  check(def_result_modes(result, modes.slot()));
  check(def_modes_write_json(modes, sel, (dir / "modes.json").string().c_str()));
  const std::size_t d_star = def_selection_d_star(sel);
  std::cout << "d_star = " << d_star << "\n";

  ordered_json report;
  report["d_star"] = d_star;
  report["queries"] = ordered_json::array();
  for (std::size_t i = 0; i < at.size(); ++i) {
    Spectrum spec;
    check(def_result_spectrum(result, i, spec.slot()));
    emit_query(spec, sel, peak_opts, dir, at[i]);

    const def_peak_params params = to_params(peak_opts);
    Peaks peaks;
    check(def_peaks_extract(spec, &params, peaks.slot()));
    const std::size_t reported = def_peaks_reported_count(peaks);
    std::vector<std::size_t> idx(reported);
    if (reported) check(def_peaks_reported(peaks, idx.data(), reported));
    const std::size_t rows = def_peaks_count(peaks);
    std::vector<double> t(rows), score(rows);
    check(def_peaks_diagnostics(peaks, nullptr, t.data(), nullptr, nullptr, nullptr, nullptr,
                                nullptr, score.data(), nullptr, rows));
    ordered_json q;
    q["n"] = at[i];
    q["top"] = ordered_json::array();
    for (std::size_t k : idx)
      q["top"].push_back({{"time_constant", t[k]}, {"score", score[k]}});
    report["queries"].push_back(q);
  }

  const std::size_t w = window > 0 ? window : d_star;
  const double err = emit_ssa(s, w, {0}, dir);
  std::cout << "ssa leading-component relative error = " << fmt17(err) << "\n";
  report["ssa"] = {{"window", w}, {"leading_error", err}};

  const std::optional<double> period = emit_dmd(s, d_star, rank, dir);
  report["dmd"] = {{"embedding", d_star}, {"rank_flag", rank}};
  if (period && std::isfinite(*period))
    report["dmd"]["dominant_period"] = *period;
  else
    report["dmd"]["dominant_period"] = nullptr;

  write_text(dir / "compare.json", report.dump(2) + "\n");

  ordered_json rc;
  rc["subcommand"] = "compare";
  rc["in"] = io.in;
  rc["column"] = io.column;
  rc["dt"] = io.dt;
  rc["omega"] = omega.empty() ? std::to_string(d_single) : omega;
  rc["L"] = l_horizon;
  rc["sigma2"] = sigma2;
  rc["at"] = at;
  rc["estimator"] = estimator;
  rc["window"] = w;
  rc["rank"] = rank;
  write_sidecar(dir, rc);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"delay-embedding time-scale analysis"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", std::string(def_version()));

  // generate ----------------------------------------------------------
  GenerateOpts gen;
  auto* generate = app.add_subcommand("generate", "simulate the benchmark oscillator");
  generate->add_option("--preset", gen.preset, "parameter preset")
      ->check(CLI::IsMember({"toy-sec3"}));
  gen.opts[0] = generate->add_option("--k", gen.cfg.k, "spring constant");
  gen.opts[1] = generate->add_option("--m0", gen.cfg.m0, "mass before the switch");
  gen.opts[2] = generate->add_option("--m1", gen.cfg.m1, "mass from the switch on");
  gen.opts[3] = generate->add_option("--amplitude", gen.cfg.amplitude, "plateau height");
  gen.opts[4] = generate->add_option("--t0", gen.cfg.t0, "rise start time");
  gen.opts[5] = generate->add_option("--t1", gen.cfg.t1, "fall start time");
  gen.opts[6] = generate->add_option("--n", gen.cfg.n_samples, "sample count");
  gen.opts[7] = generate->add_option("--sample-dt", gen.cfg.dt, "sampling period");
  gen.opts[8] = generate->add_option("--noise", gen.cfg.noise_variance, "observation noise variance");
  gen.opts[9] = generate->add_option("--seed", gen.cfg.seed, "noise seed");
  generate->add_flag("--emit-velocity", gen.emit_velocity, "also write velocity.csv");
  generate->add_flag("--emit-input", gen.emit_input, "also write input.csv");
  generate->add_option("--out", gen.out, "output directory")->envname("DEF_OUT_DIR");
  generate->callback([&] { run_generate(gen); });

  // select-order ------------------------------------------------------
  IoOpts sel_io;
  std::string sel_omega;
  std::size_t sel_l = 5;
  double sel_sigma2 = 0.0;
  auto* select = app.add_subcommand("select-order", "sweep delay orders by the information criterion");
  add_io(select, sel_io);
  select->add_option("--omega", sel_omega, "order grid: start:stop:step, comma list, or one value")
      ->required();
  select->add_option("--L", sel_l, "prediction horizon");
  select->add_option("--sigma2", sel_sigma2, "noise variance for the complexity term");
  select->callback([&] { run_select_order(sel_io, sel_omega, sel_l, sel_sigma2); });

  // analyze -------------------------------------------------------------
  IoOpts an_io;
  std::string an_omega, an_estimator = "exp";
  std::size_t an_d = 0, an_l = 5;
  double an_sigma2 = 0.0;
  std::vector<std::size_t> an_at;
  PeakOpts an_peaks;
  auto* analyze = app.add_subcommand("analyze", "identify, decompose, and report spectra at query indices");
  add_io(analyze, an_io);
  analyze->add_option("--omega", an_omega, "order grid for selection");
  analyze->add_option("--d", an_d, "single delay order (shorthand for a one-point grid)");
  analyze->add_option("--L", an_l, "prediction horizon");
  analyze->add_option("--sigma2", an_sigma2, "noise variance for the complexity term");
  analyze->add_option("--at", an_at, "query index (repeatable)")->required();
  analyze->add_option("--estimator", an_estimator, "amplitude estimator")
      ->check(CLI::IsMember({"exp", "proj"}));
  add_peak_opts(analyze, an_peaks);
  analyze->callback([&] {
    run_analyze(an_io, an_omega, an_d, an_l, an_sigma2, an_at, an_estimator, an_peaks);
  });

  // peaks ---------------------------------------------------------------
  std::string pk_spectrum, pk_out;
  PeakOpts pk_opts;
  auto* peaks = app.add_subcommand("peaks", "extract peaks from a stored spectrum CSV");
  peaks->add_option("--spectrum", pk_spectrum, "spectrum CSV path")->required();
  add_peak_opts(peaks, pk_opts);
  peaks->add_option("--out", pk_out, "output directory")->envname("DEF_OUT_DIR");
  peaks->callback([&] { run_peaks(pk_spectrum, pk_opts, pk_out); });

  // ssa -----------------------------------------------------------------
  IoOpts ssa_io;
  std::size_t ssa_window = 0;
  std::string ssa_components = "0";
  auto* ssa = app.add_subcommand("ssa", "singular-spectrum baseline decomposition");
  add_io(ssa, ssa_io);
  ssa->add_option("--window", ssa_window, "trajectory window length")->required();
  ssa->add_option("--components", ssa_components, "component indices to reconstruct");
  ssa->callback([&] { run_ssa(ssa_io, ssa_window, ssa_components); });

  // dmd -----------------------------------------------------------------
  IoOpts dmd_io;
  std::size_t dmd_d = 0, dmd_rank = 0;
  auto* dmd = app.add_subcommand("dmd", "delay-embedded mode decomposition baseline");
  add_io(dmd, dmd_io);
  dmd->add_option("--d", dmd_d, "embedding window length")->required();
  dmd->add_option("--rank", dmd_rank, "truncation rank (0 = automatic)");
  dmd->callback([&] { run_dmd(dmd_io, dmd_d, dmd_rank); });

  // aic-curves ------------------------------------------------------------
  IoOpts ac_io;
  std::string ac_omega, ac_l = "1,5,20";
  double ac_sigma2 = 0.0;
  auto* curves = app.add_subcommand("aic-curves", "relative criterion curves per horizon");
  add_io(curves, ac_io);
  curves->add_option("--omega", ac_omega, "order grid")->required();
  curves->add_option("--L", ac_l, "horizon list (same grid syntax)");
  curves->add_option("--sigma2", ac_sigma2, "noise variance for the complexity term");
  curves->callback([&] { run_aic_curves(ac_io, ac_omega, ac_l, ac_sigma2); });

  // compare ----------------------------------------------------------------
  IoOpts cmp_io;
  std::string cmp_omega, cmp_estimator = "exp";
  std::size_t cmp_d = 0, cmp_l = 5, cmp_window = 0, cmp_rank = 0;
  double cmp_sigma2 = 0.0;
  std::vector<std::size_t> cmp_at;
  PeakOpts cmp_peaks;
  auto* compare = app.add_subcommand("compare", "run the full pipeline plus both baselines");
  add_io(compare, cmp_io);
  compare->add_option("--omega", cmp_omega, "order grid for selection");
  compare->add_option("--d", cmp_d, "single delay order (shorthand for a one-point grid)");
  compare->add_option("--L", cmp_l, "prediction horizon");
  compare->add_option("--sigma2", cmp_sigma2, "noise variance for the complexity term");
  compare->add_option("--at", cmp_at, "query index (repeatable)")->required();
  compare->add_option("--estimator", cmp_estimator, "amplitude estimator")
      ->check(CLI::IsMember({"exp", "proj"}));
  add_peak_opts(compare, cmp_peaks);
  compare->add_option("--window", cmp_window, "SSA window (0 = use d_star)");
  compare->add_option("--rank", cmp_rank, "DMD truncation rank (0 = automatic)");
  compare->callback([&] {
    run_compare(cmp_io, cmp_omega, cmp_d, cmp_l, cmp_sigma2, cmp_at, cmp_estimator, cmp_peaks,
                cmp_window, cmp_rank);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const ExitWith& e) {
    std::cerr << e.message << "\n";
    return e.code;
  }
  return 0;
}
