#include "core/toy_model.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace def {
namespace {

constexpr double kPi = 3.14159265358979323846264338328;

struct Segment {
  double start;
  double u;
  double m;
};

std::array<Segment, 5> schedule(const ToyConfig& cfg) {
  const double tau_rise = half_period(cfg.k, cfg.m0);
  const double tau_fall = half_period(cfg.k, cfg.m1);
  const double half_force = cfg.k * cfg.amplitude / 2.0;
  return {{{0.0, 0.0, cfg.m0},
           {cfg.t0, half_force, cfg.m0},
           {cfg.t0 + tau_rise, 2.0 * half_force, cfg.m0},
           {cfg.t1, half_force, cfg.m1},
           {cfg.t1 + tau_fall, 0.0, cfg.m1}}};
}

}  // namespace

double half_period(double k, double m) { return kPi * std::sqrt(m / k); }

double mass_for_half_period(double k, double tau) { return k * (tau / kPi) * (tau / kPi); }

ToyConfig benchmark_config() {
  ToyConfig cfg;
  cfg.k = 1.0;
  cfg.m0 = mass_for_half_period(cfg.k, 1000.0);
  cfg.m1 = mass_for_half_period(cfg.k, 100.0);
  cfg.amplitude = 1.0;
  cfg.t0 = 5000.0;
  cfg.t1 = 10000.0;
  cfg.n_samples = 15000;
  cfg.dt = 1.0;
  cfg.noise_variance = 1e-6;
  cfg.seed = 1;
  return cfg;
}

void validate(const ToyConfig& cfg) {
  if (!(cfg.k > 0.0) || !std::isfinite(cfg.k))
    throw std::invalid_argument("spring constant must be positive");
  if (!(cfg.m0 > 0.0) || !(cfg.m1 > 0.0) || !std::isfinite(cfg.m0) || !std::isfinite(cfg.m1))
    throw std::invalid_argument("masses must be positive");
  if (!std::isfinite(cfg.amplitude)) throw std::invalid_argument("amplitude must be finite");
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt))
    throw std::invalid_argument("dt must be positive");
  if (cfg.n_samples < 2) throw std::invalid_argument("need at least two samples");
  if (!(cfg.noise_variance >= 0.0) || !std::isfinite(cfg.noise_variance))
    throw std::invalid_argument("noise variance must be non-negative");
  if (!(cfg.t0 >= 0.0) || !std::isfinite(cfg.t0) || !std::isfinite(cfg.t1))
    throw std::invalid_argument("switch times must be finite and non-negative");
  const double tau_rise = half_period(cfg.k, cfg.m0);
  const double tau_fall = half_period(cfg.k, cfg.m1);
  if (cfg.t0 + tau_rise > cfg.t1)
    throw std::invalid_argument("rise segment overlaps the fall: t0 + tau0 must not exceed t1");
  if (cfg.t1 + tau_fall > double(cfg.n_samples) * cfg.dt)
    throw std::invalid_argument("fall segment ends past the sampled record");
}

double designed_input(const ToyConfig& cfg, double t) {
  const auto segs = schedule(cfg);
  double u = segs[0].u;
  for (const Segment& s : segs)
    if (t >= s.start) u = s.u;
  return u;
}

OscState oscillator_segment(OscState state, double s, double k, double m, double u) {
  if (!(k > 0.0) || !(m > 0.0))
    throw std::invalid_argument("oscillator needs positive spring constant and mass");
  const double w = std::sqrt(k / m);
  const double x_eq = u / k;
  const double c = std::cos(w * s);
  const double sn = std::sin(w * s);
  const double dx = state.x - x_eq;
  return {x_eq + dx * c + (state.v / w) * sn, -w * dx * sn + state.v * c};
}

ToyResult simulate(const ToyConfig& cfg) {
  validate(cfg);
  const auto segs = schedule(cfg);

  std::vector<double> xs(cfg.n_samples), vs(cfg.n_samples);
  OscState entry{0.0, 0.0};
  double entry_t = 0.0;
  std::size_t seg = 0;
  for (std::size_t n = 0; n < cfg.n_samples; ++n) {
    const double t = double(n) * cfg.dt;
    // Cross any switch times at or below t first, carrying the state over
    // continuously; a sample landing exactly on a switch belongs to the new
    // segment (zero-length propagation).
    while (seg + 1 < segs.size() && segs[seg + 1].start <= t) {
      entry = oscillator_segment(entry, segs[seg + 1].start - entry_t, cfg.k, segs[seg].m,
                                 segs[seg].u);
      entry_t = segs[seg + 1].start;
      ++seg;
    }
    const OscState at = oscillator_segment(entry, t - entry_t, cfg.k, segs[seg].m, segs[seg].u);
    xs[n] = at.x;
    vs[n] = at.v;
  }

  ToyResult result;
  result.position = make_series(std::move(xs), cfg.dt, "position");
  result.velocity = make_series(std::move(vs), cfg.dt, "velocity");
  if (cfg.noise_variance > 0.0)
    result.position = add_gaussian_noise(result.position, cfg.noise_variance, cfg.seed);
  return result;
}

}  // namespace def
