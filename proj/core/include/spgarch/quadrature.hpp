#pragma once

#include <cstddef>
#include <functional>

namespace spgarch {

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  std::size_t max_intervals = 2000;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t intervals = 0;
  std::size_t evaluations = 0;
};

/**
 * @brief Globally adaptive 15-point Gauss-Kronrod quadrature on a finite [a, b].
 *
 * Repeatedly bisects the interval with the largest error estimate until
 * abs_error <= max(abs_tol, rel_tol * |value|). Throws NumericError (with the
 * reached estimate and interval count in the message) if the budget runs out.
 */
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureOptions& options = {});

}  // namespace spgarch
