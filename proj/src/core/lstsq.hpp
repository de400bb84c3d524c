#pragma once

#include <Eigen/Dense>

namespace def {

// Solution of min_W || H - W G ||_F, i.e. one transposed least-squares solve
// G^T w = h^T per row of H.
struct RowLsqResult {
  Eigen::MatrixXd solution;  // rows(H) x rows(G)
  Eigen::Index rank = 0;
  bool rank_deficient = false;
};

// Orthogonal-decomposition solve of the transposed system. The fast path is
// an unpivoted blocked QR of G^T, taken only when the R diagonal clears the
// rank tolerance (max_dim * eps * max|R_ii|) with a wide safety margin.
// Otherwise a complete orthogonal decomposition supplies the minimum-norm
// solution and the effective rank. Never forms G G^T.
RowLsqResult solve_row_lsq(const Eigen::MatrixXd& g, const Eigen::MatrixXd& h);

}  // namespace def
