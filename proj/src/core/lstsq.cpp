#include "core/lstsq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace def {

RowLsqResult solve_row_lsq(const Eigen::MatrixXd& g, const Eigen::MatrixXd& h) {
  if (g.cols() != h.cols()) throw std::invalid_argument("regressor/target column mismatch");
  const Eigen::Index p = g.rows();   // unknowns per row problem
  const Eigen::Index mm = g.cols();  // observations
  const double eps = std::numeric_limits<double>::epsilon();
  const double rank_tol = static_cast<double>(std::max(p, mm)) * eps;

  RowLsqResult out;
  if (mm >= p) {
    Eigen::MatrixXd gt = g.transpose();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(gt);
    const auto diag = qr.matrixQR().diagonal().head(p);
    double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < p; ++i) {
      const double a = std::abs(diag[i]);
      dmax = std::max(dmax, a);
      dmin = std::min(dmin, a);
    }
    // Unpivoted R diagonals are only a rank heuristic; demand three orders
    // of margin before trusting them.
    if (dmax > 0.0 && dmin > 1e3 * rank_tol * dmax) {
      out.solution = qr.solve(h.transpose()).transpose();
      out.rank = p;
      out.rank_deficient = false;
      return out;
    }
  }

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(g.transpose());
  cod.setThreshold(rank_tol);
  out.solution = cod.solve(h.transpose()).transpose();
  out.rank = cod.rank();
  out.rank_deficient = out.rank < p;
  return out;
}

}  // namespace def
