#include "spgarch/volmodel.hpp"

#include <cmath>
#include <numeric>

#include "spgarch/error.hpp"

namespace spgarch {

ReturnSeries::ReturnSeries(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) throw DomainError("a return series needs at least 2 observations");
  for (std::size_t t = 0; t < values_.size(); ++t) {
    if (!std::isfinite(values_[t])) {
      throw DomainError("return " + std::to_string(t + 1) + " is not finite");
    }
  }
  const double n = static_cast<double>(values_.size());
  mean_ = std::accumulate(values_.begin(), values_.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values_) ss += (v - mean_) * (v - mean_);
  variance_ = ss / n;
}

ReturnSeries ReturnSeries::head(std::size_t n) const {
  if (n > values_.size()) throw ContractViolation("head longer than the series");
  return ReturnSeries(std::vector<double>(values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(n)));
}

namespace {

double initial_variance(const ReturnSeries& r) {
  const double v = r.sample_variance();
  if (!(v > 0.0)) throw DomainError("sample variance of the returns is zero; sigma^2_1 undefined");
  return v;
}

bool scalar_params_ok(double nu, double omega) {
  return nu > 2.0 && nu <= kMaxDegreesOfFreedom && omega > 0.0 && std::isfinite(omega);
}

struct SplineG {
  const SplineSpec& spec;
  double operator()(double eps) const noexcept {
    return eval_g_raw(spec.b0, spec.b1, spec.b2, spec.beta, spec.pool.knots(), eps);
  }
};

// Step over the spline's active knots; the buffers must outlive the step.
struct ActiveKnots {
  explicit ActiveKnots(const SplineSpec& spec) {
    for (std::size_t i = 0; i < spec.pool.size(); ++i) {
      if (spec.indicator[i]) {
        beta.push_back(spec.beta[i]);
        knots.push_back(spec.pool[i]);
      }
    }
  }
  detail::SplineStep step(const SplineSpec& spec, double omega) const {
    return {omega, spec.b0, spec.b1, spec.b2, beta.data(), knots.data(), beta.size()};
  }
  std::vector<double> beta;
  std::vector<double> knots;
};

struct FamilyG {
  const ParametricFamily& family;
  double operator()(double eps) const noexcept { return eval_parametric_g(family, eps); }
};

}  // namespace

VolatilityPath filter_volatility(const ParamVector& theta, const ReturnSeries& r) {
  theta.spline.validate();
  const ActiveKnots active(theta.spline);
  return detail::filter_path(active.step(theta.spline, theta.omega), r.values(),
                             initial_variance(r), theta.mu);
}

bool in_theta(const ParamVector& theta, const ReturnSeries& r, const CTable& table) {
  if (!scalar_params_ok(theta.nu, theta.omega)) return false;
  const double p = persistence(theta.spline, theta.nu, table);
  if (!(p > 0.0 && p < 1.0)) return false;
  return filter_volatility(theta, r).positive;
}

double log_likelihood(const ParamVector& theta, const ReturnSeries& r, const CTable& table) {
  if (!scalar_params_ok(theta.nu, theta.omega)) return kNegInf;
  const double p = persistence(theta.spline, theta.nu, table);
  if (!(p > 0.0 && p < 1.0)) return kNegInf;
  const StdTDist dist(theta.nu);
  const ActiveKnots active(theta.spline);
  return detail::fused_log_likelihood(active.step(theta.spline, theta.omega), r.values(),
                                      initial_variance(r), theta.mu, dist);
}

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Garch: return "garch";
    case FamilyKind::Gjr: return "gjr";
    case FamilyKind::Nagarch: return "nagarch";
    case FamilyKind::BetaT: return "beta-t";
  }
  return "unknown";
}

ParametricFamily ParametricFamily::garch(double beta, double alpha) {
  ParametricFamily f;
  f.kind = FamilyKind::Garch;
  f.beta = beta;
  f.alpha = alpha;
  return f;
}

ParametricFamily ParametricFamily::gjr(double beta, double alpha1, double alpha2) {
  ParametricFamily f;
  f.kind = FamilyKind::Gjr;
  f.beta = beta;
  f.alpha = alpha1;
  f.alpha2 = alpha2;
  return f;
}

ParametricFamily ParametricFamily::nagarch(double beta, double alpha, double shift) {
  ParametricFamily f;
  f.kind = FamilyKind::Nagarch;
  f.beta = beta;
  f.alpha = alpha;
  f.shift = shift;
  return f;
}

ParametricFamily ParametricFamily::beta_t(double beta, double alpha1, double alpha2, double nu) {
  ParametricFamily f;
  f.kind = FamilyKind::BetaT;
  f.beta = beta;
  f.alpha = alpha1;
  f.alpha2 = alpha2;
  f.nu = nu;
  return f;
}

std::optional<SplineSpec> parametric_to_spline(const ParametricFamily& family) {
  switch (family.kind) {
    case FamilyKind::Garch: {
      SplineSpec s{KnotPool{}};
      s.b0 = family.beta;
      s.b2 = family.alpha;
      return s;
    }
    case FamilyKind::Gjr: {
      SplineSpec s{KnotPool{{0.0}}};
      s.b0 = family.beta;
      s.b2 = family.alpha + family.alpha2;
      s.activate(0, -family.alpha2);
      return s;
    }
    case FamilyKind::Nagarch: {
      SplineSpec s{KnotPool{}};
      s.b0 = family.beta + family.alpha * family.shift * family.shift;
      s.b1 = -2.0 * family.alpha * family.shift;
      s.b2 = family.alpha;
      return s;
    }
    case FamilyKind::BetaT:
      return std::nullopt;
  }
  return std::nullopt;
}

double eval_parametric_g(const ParametricFamily& f, double eps) {
  const double e2 = eps * eps;
  switch (f.kind) {
    case FamilyKind::Garch:
      return f.beta + f.alpha * e2;
    case FamilyKind::Gjr:
      return f.beta + (f.alpha + (eps < 0.0 ? f.alpha2 : 0.0)) * e2;
    case FamilyKind::Nagarch: {
      const double d = eps - f.shift;
      return f.beta + f.alpha * d * d;
    }
    case FamilyKind::BetaT: {
      const double u = (f.nu + 1.0) * e2 / (f.nu - 2.0 + e2);
      return f.beta + (f.alpha + (eps < 0.0 ? f.alpha2 : 0.0)) * u;
    }
  }
  return 0.0;
}

double parametric_persistence(const ParametricFamily& f) {
  // E[eps^2] = 1, E[eps^2 I(eps<0)] = 1/2, E[u] = 1 (u = (nu+1)(1 - W), W ~ Beta(nu/2, 1/2)).
  switch (f.kind) {
    case FamilyKind::Garch: return f.beta + f.alpha;
    case FamilyKind::Gjr: return f.beta + f.alpha + 0.5 * f.alpha2;
    case FamilyKind::Nagarch: return f.beta + f.alpha * (1.0 + f.shift * f.shift);
    case FamilyKind::BetaT: return f.beta + f.alpha + 0.5 * f.alpha2;
  }
  return 0.0;
}

namespace {

ParametricFamily synced(const ParametricParams& theta) {
  ParametricFamily f = theta.family;
  if (f.kind == FamilyKind::BetaT) f.nu = theta.nu;
  return f;
}

}  // namespace

VolatilityPath filter_volatility(const ParametricParams& theta, const ReturnSeries& r) {
  const ParametricFamily f = synced(theta);
  const double s2 = initial_variance(r);
  return detail::visit_family_step(f, theta.omega, [&](const auto& step) {
    return detail::filter_path(step, r.values(), s2, theta.mu);
  });
}

bool in_theta(const ParametricParams& theta, const ReturnSeries& r) {
  if (!scalar_params_ok(theta.nu, theta.omega)) return false;
  const double p = parametric_persistence(theta.family);
  if (!(p > 0.0 && p < 1.0)) return false;
  return filter_volatility(theta, r).positive;
}

double log_likelihood(const ParametricParams& theta, const ReturnSeries& r) {
  if (!scalar_params_ok(theta.nu, theta.omega)) return kNegInf;
  const double p = parametric_persistence(theta.family);
  if (!(p > 0.0 && p < 1.0)) return kNegInf;
  const ParametricFamily f = synced(theta);
  const StdTDist dist(theta.nu);
  const double s2 = initial_variance(r);
  return detail::visit_family_step(f, theta.omega, [&](const auto& step) {
    return detail::fused_log_likelihood(step, r.values(), s2, theta.mu, dist);
  });
}

SimulatedPath simulate_path(const ParamVector& theta, std::size_t length, const CTable& table,
                            RandomStream& rng) {
  const double p = persistence(theta.spline, theta.nu, table);
  return simulate_recursion(SplineG{theta.spline}, theta.omega, theta.mu, p, theta.nu, length, rng);
}

SimulatedPath simulate_path(const ParametricParams& theta, std::size_t length, RandomStream& rng) {
  const ParametricFamily f = synced(theta);
  return simulate_recursion(FamilyG{f}, theta.omega, theta.mu, parametric_persistence(f), theta.nu,
                            length, rng);
}

}  // namespace spgarch
