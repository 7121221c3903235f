#include "spgarch/bayes.hpp"

#include <cmath>
#include <numbers>

#include "spgarch/error.hpp"

namespace spgarch {

void PriorConfig::validate(std::size_t num_knots) const {
  if (!(sigma2_beta > 0.0)) throw ContractViolation("sigma2_beta must be positive");
  if (!inclusion_prob.empty() && inclusion_prob.size() != num_knots) {
    throw ContractViolation("inclusion_prob needs one entry per knot");
  }
  for (double p : inclusion_prob) {
    if (!(p > 0.0 && p < 1.0)) throw ContractViolation("inclusion probabilities must lie in (0,1)");
  }
}

double log_prior_raw(double nu, std::span<const double> active_beta, const Indicator& m,
                     const PriorConfig& cfg) {
  double lp = -2.0 * std::log(nu);
  const double log_norm = -0.5 * std::log(2.0 * std::numbers::pi * cfg.sigma2_beta);
  for (double b : active_beta) lp += log_norm - 0.5 * b * b / cfg.sigma2_beta;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double p = cfg.inclusion(i);
    lp += m[i] ? std::log(p) : std::log1p(-p);
  }
  return lp;
}

double log_prior(const ParamVector& theta, const Indicator& m, const PriorConfig& cfg) {
  theta.spline.validate();
  if (theta.spline.indicator != m) {
    throw ContractViolation("parameter vector's knot indicator differs from m");
  }
  std::vector<double> active;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i]) active.push_back(theta.spline.beta[i]);
  }
  return log_prior_raw(theta.nu, active, m, cfg);
}

double log_posterior(const ParamVector& theta, const Indicator& m, const ReturnSeries& r,
                     const PriorConfig& cfg, const CTable& table) {
  const double prior = log_prior(theta, m, cfg);
  const double ll = log_likelihood(theta, r, table);
  if (ll == kNegInf) return kNegInf;
  return ll + prior;
}

}  // namespace spgarch
