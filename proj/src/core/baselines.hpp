#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "core/hankel.hpp"
#include "core/time_series.hpp"

namespace def {

// Singular triplets of the trajectory matrix X[r][j] = y[r+j] (d rows,
// K = N-d+1 columns). Triplets are ordered by singular value descending;
// component indices elsewhere are 0-based into that order.
struct SsaDecomposition {
  Eigen::VectorXd singular_values;
  Eigen::MatrixXd left_vectors;   // d x r
  Eigen::MatrixXd right_vectors;  // K x r
  std::size_t window = 0;
  std::size_t n_samples = 0;
  double dt = 1.0;
};

// Delay-embedded DMD of a snapshot pair, reduced to `rank` dimensions.
// Modes are sorted like the eigendecomposition elsewhere: |lambda|
// descending, angle ascending. `periods` carries 2 pi / |omega| with +inf
// for non-oscillatory modes (|omega| below 1e-10 / dt).
struct DmdDecomposition {
  std::size_t rank = 0;
  Eigen::VectorXcd eigenvalues;
  Eigen::MatrixXcd modes;        // d x rank, column i pairs with eigenvalues[i]
  Eigen::VectorXcd nus;          // principal log(lambda) / dt
  Eigen::VectorXd periods;       // +inf sentinel when not oscillatory
  std::vector<bool> oscillatory;
  Eigen::VectorXd contributions;  // Frobenius energy ratios, each in [0, 1]
  std::size_t d = 0;
  double dt = 1.0;
};

// SVD of the trajectory matrix; requires 2 <= window <= N-1.
SsaDecomposition ssa_decompose(const TimeSeries& series, std::size_t window);

// Sum of the selected triplets' rank-one terms, averaged over each
// anti-diagonal (count-weighted at the edges) back into a length-N series.
// Indices are deduplicated; an empty selection gives the zero series.
TimeSeries ssa_reconstruct(const SsaDecomposition& decomp,
                           const std::vector<std::size_t>& components);

// Rank-r DMD on (X, Y). An absent rank picks the smallest r holding 99.9%
// of the squared singular-value energy, capped at 200. Throws when the
// requested rank exceeds min(d, columns) or hits a zero singular value.
// Contributions are filled via dmd_contribution.
DmdDecomposition dmd_decompose(const DelayMatrices& matrices,
                               std::optional<std::size_t> rank = std::nullopt);

// c_i = ||phi_i phi_i^H / (phi_i^H phi_i) . X||_F^2 / ||X||_F^2, clamped to
// [0, 1] against rounding. Throws on a zero-norm mode.
Eigen::VectorXd dmd_contribution(const DmdDecomposition& decomp, const DelayMatrices& matrices);

}  // namespace def
