#pragma once

#include <cstdint>
#include <random>

namespace def {

// Deterministic standard-normal stream.
//
// Algorithm (fixed, do not change without bumping the format note in the
// README): std::mt19937_64 seeded directly, uniforms built from the top 53
// bits, mapped to N(0,1) by the Marsaglia polar transform. The transform
// uses only sqrt and log, so a given seed reproduces the same stream on any
// IEEE-754 platform.
class GaussianRng {
 public:
  explicit GaussianRng(std::uint64_t seed) : engine_(seed) {}

  // One N(0,1) draw.
  double next();

 private:
  double uniform();  // [0, 1) with 53-bit resolution

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace def
