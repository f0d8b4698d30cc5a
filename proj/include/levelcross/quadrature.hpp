#pragma once

#include <cstddef>
#include <functional>

#include "levelcross/model.hpp"

namespace levelcross {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t cells_used = 0;
  bool converged = false;
};

struct QuadratureOptions {
  double abs_tol = 1e-8;
  double rel_tol = 1e-8;
  std::size_t max_cells = 20000;
  unsigned threads = 0;  // 0: hardware concurrency
};

// Integral of f over one cell with the 15x15 Kronrod rule; error is the
// difference to the embedded 7x7 Gauss-Legendre rule.
struct CellEstimate {
  double value = 0.0;
  double error = 0.0;
};
CellEstimate integrate_cell(const std::function<double(Complex)>& f, const Rectangle& cell);

// Adaptive tensor-product Gauss-Kronrod (G7/K15) integration of f over the
// region. Each leaf cell may carry error up to tol * (cell area / region
// area), tol = max(abs_tol, rel_tol * |value|); failing cells are halved
// along their longer side. Running out of max_cells returns the best
// estimate with converged = false. Exceptions thrown by f propagate.
QuadratureResult integrate_density(const std::function<double(Complex)>& f,
                                   const Rectangle& region, const QuadratureOptions& options);

inline QuadratureResult integrate_density(const std::function<double(Complex)>& f,
                                          const Rectangle& region, double abs_tol,
                                          double rel_tol, std::size_t max_cells) {
  return integrate_density(f, region, QuadratureOptions{abs_tol, rel_tol, max_cells, 0});
}

}  // namespace levelcross
