#pragma once

#include <cstdint>

#include "core/time_series.hpp"

namespace def {

// Switched-mass harmonic oscillator k x'' ... m(t) x'' + k x = u(t), driven
// by a five-level piecewise-constant force. The force rises to k*amplitude/2
// at t0, to k*amplitude at t0 + tau0, drops back to k*amplitude/2 at t1 and
// to 0 at t1 + tau1, where tau = pi sqrt(m/k) is the half period. The mass
// switches from m0 to m1 at t1, so the rise and fall are exact half-sines
// and the plateau is flat.
struct ToyConfig {
  double k = 1.0;
  double m0 = 1.0;
  double m1 = 1.0;
  double amplitude = 1.0;
  double t0 = 0.0;
  double t1 = 0.0;
  std::size_t n_samples = 0;
  double dt = 1.0;
  double noise_variance = 0.0;
  std::uint64_t seed = 1;
};

struct ToyResult {
  TimeSeries position;
  TimeSeries velocity;
};

struct OscState {
  double x = 0.0;
  double v = 0.0;
};

double half_period(double k, double m);           // pi sqrt(m/k)
double mass_for_half_period(double k, double tau); // inverse of the above

// The benchmark schedule: amplitude 1, half periods 1000 and 100, switches
// at 5000 and 10000, 15000 unit-step samples, observation noise 1e-6.
ToyConfig benchmark_config();

// Throws std::invalid_argument when parameters are non-positive, segments
// overlap (t0 + tau0 > t1) or the schedule outruns the record.
void validate(const ToyConfig& cfg);

// Force level at time t; negative t reads as the initial rest segment.
double designed_input(const ToyConfig& cfg, double t);

// Exact state after time s under constant force u and constant mass m:
// x(s) = u/k + (x - u/k) cos(w s) + (v/w) sin(w s), w = sqrt(k/m).
OscState oscillator_segment(OscState state, double s, double k, double m, double u);

// Samples position and velocity at n dt for n < n_samples, starting from
// rest, propagating each sample in closed form from its segment entry so no
// integrator error accumulates. Gaussian observation noise (variance
// noise_variance, fixed seed) is added to the position afterwards.
ToyResult simulate(const ToyConfig& cfg);

}  // namespace def
