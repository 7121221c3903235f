#include "spgarch/innovation.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <numbers>
#include <string>

#include "spgarch/error.hpp"

namespace spgarch {

StdTDist::StdTDist(double nu) : nu_(nu) {
  if (!(nu > 2.0) || !std::isfinite(nu)) {
    throw DomainError("standardised t requires finite nu > 2, got " + std::to_string(nu));
  }
  scale_ = std::sqrt((nu - 2.0) / nu);
  log_norm_ = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
              0.5 * std::log(std::numbers::pi * (nu - 2.0));
  inv_nu_minus_2_ = 1.0 / (nu - 2.0);
}

double StdTDist::log_density(double z) const noexcept {
  return log_norm_ - 0.5 * (nu_ + 1.0) * std::log1p(z * z * inv_nu_minus_2_);
}

double StdTDist::density(double z) const noexcept { return std::exp(log_density(z)); }

double StdTDist::cdf(double z) const {
  // Work with the unit-scale variate x = z / scale and the t_nu cdf.
  const double x = z / scale_;
  const double x2 = x * x;
  if (x2 < nu_) {
    // I_{x^2/(nu+x^2)}(1/2, nu/2) is accurate near the centre.
    const double half_mass = 0.5 * boost::math::ibeta(0.5, 0.5 * nu_, x2 / (nu_ + x2));
    return x < 0.0 ? 0.5 - half_mass : 0.5 + half_mass;
  }
  const double tail = 0.5 * boost::math::ibeta(0.5 * nu_, 0.5, nu_ / (nu_ + x2));
  return x < 0.0 ? tail : 1.0 - tail;
}

double StdTDist::quantile(double level) const {
  if (!(level > 0.0 && level < 1.0)) {
    throw DomainError("quantile level must lie in (0, 1), got " + std::to_string(level));
  }
  if (level == 0.5) return 0.0;
  if (level < 0.5) return -quantile(1.0 - level);

  // Bracket [lo, hi] with cdf(lo) <= level <= cdf(hi), then safeguarded Newton.
  double lo = 0.0;
  double hi = 1.0;
  while (cdf(hi) < level) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw NumericError("std_t quantile: failed to bracket level");
  }
  double z = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = cdf(z) - level;
    if (f == 0.0) return z;
    if (f < 0.0) lo = z; else hi = z;
    double next = z - f / density(z);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - z) <= 1e-15 * std::max(1.0, std::abs(z)) || hi - lo <= 1e-15 * hi) {
      return next;
    }
    z = next;
  }
  return z;
}

double StdTDist::sample(RandomStream& rng) const {
  const double normal = rng.normal();
  const double chi2 = rng.chi_square(nu_);
  return scale_ * normal / std::sqrt(chi2 / nu_);
}

double std_t_log_density(const StdTDist& dist, double z) noexcept { return dist.log_density(z); }

double std_t_sample(const StdTDist& dist, RandomStream& rng) { return dist.sample(rng); }

double std_t_cdf(const StdTDist& dist, double z) { return dist.cdf(z); }

double std_t_quantile(const StdTDist& dist, double level) { return dist.quantile(level); }

double obs_log_density(const StdTDist& dist, double r, double mu, double sigma2) {
  if (!(sigma2 > 0.0)) {
    throw DomainError("obs_log_density requires sigma2 > 0, got " + std::to_string(sigma2));
  }
  return dist.log_density((r - mu) / std::sqrt(sigma2)) - 0.5 * std::log(sigma2);
}

}  // namespace spgarch
