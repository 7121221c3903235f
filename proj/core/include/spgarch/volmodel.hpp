#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spgarch/innovation.hpp"
#include "spgarch/random.hpp"
#include "spgarch/spline.hpp"

namespace spgarch {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Observed returns r_1..r_T (all finite, T >= 2).
class ReturnSeries {
 public:
  explicit ReturnSeries(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t t) const noexcept { return values_[t]; }
  std::span<const double> values() const noexcept { return values_; }

  double mean() const noexcept { return mean_; }
  /// Divisor-T variance of the raw series; seeds sigma^2_1 of every filter.
  double sample_variance() const noexcept { return variance_; }

  /// First n observations (n >= 2).
  ReturnSeries head(std::size_t n) const;

 private:
  std::vector<double> values_;
  double mean_ = 0.0;
  double variance_ = 0.0;
};

/// Full SP-GARCH parameter vector (nu, mu, omega, b0, b1, b2, beta_1..beta_K).
struct ParamVector {
  double nu = 8.0;
  double mu = 0.0;
  double omega = 0.1;
  SplineSpec spline;
};

/**
 * sigma^2_1..sigma^2_{T+1}. `positive` is false when some entry is not a
 * positive finite number; the path is then truncated after that entry.
 */
struct VolatilityPath {
  std::vector<double> sigma2;
  bool positive = true;
};

/**
 * sigma^2_1 = sample variance of r, sigma^2_t = omega + g(eps_{t-1}) sigma^2_{t-1}.
 * Throws DomainError when the sample variance is zero.
 */
VolatilityPath filter_volatility(const ParamVector& theta, const ReturnSeries& r);

/// 2 < nu <= 200, omega > 0, 0 < persistence < 1 and a positive filtered path.
bool in_theta(const ParamVector& theta, const ReturnSeries& r, const CTable& table);

/// Sum of observation log densities, or kNegInf outside the restricted space.
double log_likelihood(const ParamVector& theta, const ReturnSeries& r, const CTable& table);

enum class FamilyKind { Garch, Gjr, Nagarch, BetaT };

std::string to_string(FamilyKind kind);

/**
 * @brief Parametric news-impact families.
 *
 *   GARCH   g = beta + alpha eps^2
 *   GJR     g = beta + (alpha + alpha2 I[eps < 0]) eps^2
 *   NAGARCH g = beta + alpha (eps - shift)^2
 *   Beta-t  g = beta + (alpha + alpha2 I[eps < 0]) u,  u = (nu + 1) eps^2 / (nu - 2 + eps^2)
 */
struct ParametricFamily {
  FamilyKind kind = FamilyKind::Garch;
  double beta = 0.0;
  double alpha = 0.0;   ///< alpha (GARCH, NAGARCH) or alpha_1 (GJR, Beta-t)
  double alpha2 = 0.0;  ///< GJR / Beta-t only
  double shift = 0.0;   ///< NAGARCH c
  double nu = 8.0;      ///< Beta-t only; tied to the innovation nu

  static ParametricFamily garch(double beta, double alpha);
  static ParametricFamily gjr(double beta, double alpha1, double alpha2);
  static ParametricFamily nagarch(double beta, double alpha, double shift);
  static ParametricFamily beta_t(double beta, double alpha1, double alpha2, double nu);
};

/// Exact spline representation, or nullopt for Beta-t.
std::optional<SplineSpec> parametric_to_spline(const ParametricFamily& family);

double eval_parametric_g(const ParametricFamily& family, double eps);

/// Closed-form E[g(eps)] under a standardised symmetric innovation.
double parametric_persistence(const ParametricFamily& family);

/// Parametric model (nu, mu, omega, family); for Beta-t the family's nu is the innovation nu.
struct ParametricParams {
  double nu = 8.0;
  double mu = 0.0;
  double omega = 0.1;
  ParametricFamily family;
};

VolatilityPath filter_volatility(const ParametricParams& theta, const ReturnSeries& r);
bool in_theta(const ParametricParams& theta, const ReturnSeries& r);
double log_likelihood(const ParametricParams& theta, const ReturnSeries& r);

/// Returns with their latent volatilities sigma_1..sigma_T.
struct SimulatedPath {
  std::vector<double> returns;
  std::vector<double> sigma;
};

/**
 * r_t = mu + sigma_t eps_t, sigma^2_t = omega + g(eps_{t-1}) sigma^2_{t-1},
 * started at the unconditional variance omega / (1 - persistence).
 * Throws DomainError if persistence >= 1.
 */
template <class G>
SimulatedPath simulate_recursion(G&& g, double omega, double mu, double persistence, double nu,
                                 std::size_t length, RandomStream& rng);

SimulatedPath simulate_path(const ParamVector& theta, std::size_t length, const CTable& table,
                            RandomStream& rng);
SimulatedPath simulate_path(const ParametricParams& theta, std::size_t length, RandomStream& rng);

}  // namespace spgarch

#include "spgarch/detail/volmodel_impl.hpp"
