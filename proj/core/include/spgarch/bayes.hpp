#pragma once

#include <span>
#include <vector>

#include "spgarch/indicator.hpp"
#include "spgarch/spline.hpp"
#include "spgarch/volmodel.hpp"

namespace spgarch {

/// Slab variance and independent knot-inclusion probabilities.
struct PriorConfig {
  double sigma2_beta = 2500.0;
  /// One probability per knot; empty means 0.5 for every knot.
  std::vector<double> inclusion_prob;

  double inclusion(std::size_t knot) const {
    return inclusion_prob.empty() ? 0.5 : inclusion_prob.at(knot);
  }
  /// Throws ContractViolation for sigma2_beta <= 0 or probabilities outside (0,1).
  void validate(std::size_t num_knots) const;
};

/**
 * log p(theta | m) + log p(m) up to a constant:
 *   -2 log nu + sum_{m_i = 1} log N(beta_i; 0, sigma2_beta) + sum_i log Bernoulli(m_i; pi_i).
 * The spike at zero for inactive coefficients is never evaluated. Throws
 * ContractViolation if theta's indicator differs from m or an inactive beta is nonzero.
 */
double log_prior(const ParamVector& theta, const Indicator& m, const PriorConfig& cfg);

/// Prior on raw pieces; `active_beta` holds the active coefficients in knot order.
double log_prior_raw(double nu, std::span<const double> active_beta, const Indicator& m,
                     const PriorConfig& cfg);

/// log_likelihood + log_prior, or kNegInf outside the restricted parameter space.
double log_posterior(const ParamVector& theta, const Indicator& m, const ReturnSeries& r,
                     const PriorConfig& cfg, const CTable& table);

}  // namespace spgarch
