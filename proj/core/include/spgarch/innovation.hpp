#pragma once

#include "spgarch/random.hpp"

namespace spgarch {

/// Upper end of the admissible degrees-of-freedom range used by the model.
inline constexpr double kMaxDegreesOfFreedom = 200.0;

/**
 * @brief Standardised Student-t distribution (mean 0, variance 1).
 *
 * z = x * sqrt((nu - 2) / nu) with x ~ t_nu. Any real nu > 2 is accepted;
 * the model's cap nu <= 200 is a parameter-space restriction checked by the
 * volatility model, not here, so the distribution can also be used for
 * large-nu Gaussian-limit work.
 */
class StdTDist {
 public:
  /// Throws DomainError unless nu > 2 and finite.
  explicit StdTDist(double nu);

  double nu() const noexcept { return nu_; }

  /// sqrt((nu - 2) / nu): maps a unit Student-t variate to unit variance.
  double scale() const noexcept { return scale_; }

  double log_density(double z) const noexcept;
  double density(double z) const noexcept;
  double cdf(double z) const;

  /// Inverse CDF; level must lie in (0, 1).
  double quantile(double level) const;

  double sample(RandomStream& rng) const;

  /// log of the normalising constant: lgamma((nu+1)/2) - lgamma(nu/2) - 0.5 log(pi (nu-2)).
  double log_norm() const noexcept { return log_norm_; }

 private:
  double nu_;
  double scale_;
  double log_norm_;
  double inv_nu_minus_2_;
};

double std_t_log_density(const StdTDist& dist, double z) noexcept;
double std_t_sample(const StdTDist& dist, RandomStream& rng);
double std_t_cdf(const StdTDist& dist, double z);
double std_t_quantile(const StdTDist& dist, double level);

/**
 * Log density of an observation r whose conditional distribution is the
 * standardised t shifted by mu and scaled to variance sigma2.
 * Throws DomainError if sigma2 <= 0.
 */
double obs_log_density(const StdTDist& dist, double r, double mu, double sigma2);

}  // namespace spgarch
