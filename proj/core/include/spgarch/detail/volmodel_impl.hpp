#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>

#include "spgarch/error.hpp"

namespace spgarch {

namespace detail {

inline bool usable_variance(double s2) noexcept {
  return s2 > 0.0 && s2 <= std::numeric_limits<double>::max();
}

/**
 * Variance update sigma^2_{t+1} = omega + g(e / sigma_t) sigma^2_t for the
 * spline, written as omega + b0 s2 + b1 e sigma + b2 e^2 + sum_j beta_j (e - k_j sigma)_+^2
 * with e = r_t - mu. The square root is skipped when b1 = 0 and no knot is present.
 */
struct SplineStep {
  double omega, b0, b1, b2;
  const double* beta;
  const double* knots;
  std::size_t n;

  double operator()(double e, double s2) const noexcept {
    double next = omega + b0 * s2 + b2 * e * e;
    if (n == 0 && b1 == 0.0) return next;
    const double sd = std::sqrt(s2);
    next += b1 * e * sd;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = e - knots[j] * sd;
      if (d >= 0.0) next += beta[j] * d * d;
    }
    return next;
  }
};

/// omega + g(e / sigma) sigma^2 for any coefficient function g.
template <class G>
struct GenericStep {
  double omega;
  G g;
  double operator()(double e, double s2) const noexcept { return omega + g(e / std::sqrt(s2)) * s2; }
};

/// Parametric variance updates written in (e, sigma^2); see ParametricFamily for g.
struct GarchStep {
  double omega, beta, alpha;
  double operator()(double e, double s2) const noexcept { return omega + beta * s2 + alpha * e * e; }
};

struct GjrStep {
  double omega, beta, alpha1, alpha2;
  double operator()(double e, double s2) const noexcept {
    return omega + beta * s2 + (e < 0.0 ? alpha1 + alpha2 : alpha1) * e * e;
  }
};

struct NagarchStep {
  double omega, beta, alpha, shift;
  double operator()(double e, double s2) const noexcept {
    const double d = e - shift * std::sqrt(s2);
    return omega + beta * s2 + alpha * d * d;
  }
};

/// u s2 = (nu + 1) e^2 s2 / ((nu - 2) s2 + e^2).
struct BetaTStep {
  double omega, beta, alpha1, alpha2, nu;
  double operator()(double e, double s2) const noexcept {
    const double e2 = e * e;
    const double a = e < 0.0 ? alpha1 + alpha2 : alpha1;
    return omega + beta * s2 + a * (nu + 1.0) * e2 * s2 / ((nu - 2.0) * s2 + e2);
  }
};

/// Calls fn with the step functor matching family.kind.
template <class Fn>
decltype(auto) visit_family_step(const ParametricFamily& f, double omega, Fn&& fn) {
  switch (f.kind) {
    case FamilyKind::Gjr: return fn(GjrStep{omega, f.beta, f.alpha, f.alpha2});
    case FamilyKind::Nagarch: return fn(NagarchStep{omega, f.beta, f.alpha, f.shift});
    case FamilyKind::BetaT: return fn(BetaTStep{omega, f.beta, f.alpha, f.alpha2, f.nu});
    case FamilyKind::Garch: break;
  }
  return fn(GarchStep{omega, f.beta, f.alpha});
}

/**
 * Filters sigma^2 and accumulates the standardised-t log likelihood in one
 * pass. Log terms are taken on short products of factors to avoid two
 * logarithms per observation. Returns -inf if any sigma^2_t, t = 1..T+1, is
 * not a positive finite number.
 */
template <class Step>
double fused_log_likelihood(const Step& step, std::span<const double> r, double sigma2_1,
                            double mu, const StdTDist& dist) {
  const double nu = dist.nu();
  const double inv_nu_m2 = 1.0 / (nu - 2.0);
  double sum_log_q = 0.0;
  double sum_log_s2 = 0.0;
  double prod_q = 1.0;
  double prod_s2 = 1.0;
  int pending = 0;
  double s2 = sigma2_1;
  for (double rt : r) {
    if (!usable_variance(s2)) return -std::numeric_limits<double>::infinity();
    const double e = rt - mu;
    const double q = 1.0 + e * e * inv_nu_m2 / s2;
    if (s2 < 1e-30 || s2 > 1e30 || q > 1e30) {
      sum_log_q += std::log(q);
      sum_log_s2 += std::log(s2);
    } else {
      prod_q *= q;
      prod_s2 *= s2;
      if (++pending == 8) {
        sum_log_q += std::log(prod_q);
        sum_log_s2 += std::log(prod_s2);
        prod_q = 1.0;
        prod_s2 = 1.0;
        pending = 0;
      }
    }
    s2 = step(e, s2);
  }
  if (!usable_variance(s2)) return -std::numeric_limits<double>::infinity();
  sum_log_q += std::log(prod_q);
  sum_log_s2 += std::log(prod_s2);
  return static_cast<double>(r.size()) * dist.log_norm() - 0.5 * (nu + 1.0) * sum_log_q -
         0.5 * sum_log_s2;
}

template <class Step>
VolatilityPath filter_path(const Step& step, std::span<const double> r, double sigma2_1,
                           double mu) {
  VolatilityPath path;
  path.sigma2.reserve(r.size() + 1);
  double s2 = sigma2_1;
  path.sigma2.push_back(s2);
  for (double rt : r) {
    if (!usable_variance(s2)) {
      path.positive = false;
      return path;
    }
    s2 = step(rt - mu, s2);
    path.sigma2.push_back(s2);
  }
  path.positive = usable_variance(s2);
  return path;
}

}  // namespace detail

template <class G>
SimulatedPath simulate_recursion(G&& g, double omega, double mu, double persistence, double nu,
                                 std::size_t length, RandomStream& rng) {
  if (!(persistence < 1.0)) {
    throw DomainError("simulation requires persistence < 1, got " + std::to_string(persistence));
  }
  const StdTDist dist(nu);
  SimulatedPath out;
  out.returns.reserve(length);
  out.sigma.reserve(length);
  double s2 = omega / (1.0 - persistence);
  for (std::size_t t = 0; t < length; ++t) {
    const double sigma = std::sqrt(s2);
    const double eps = dist.sample(rng);
    out.sigma.push_back(sigma);
    out.returns.push_back(mu + sigma * eps);
    s2 = omega + g(eps) * s2;
  }
  return out;
}

}  // namespace spgarch
