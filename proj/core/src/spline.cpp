#include "spgarch/spline.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <sstream>

#include "spgarch/error.hpp"
#include "spgarch/innovation.hpp"
#include "spgarch/quadrature.hpp"

namespace spgarch {

KnotPool::KnotPool(std::vector<double> knots) : knots_(std::move(knots)) {
  if (knots_.size() > Indicator::kMaxKnots) {
    throw ContractViolation("knot pool supports at most 32 knots");
  }
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!std::isfinite(knots_[i])) throw ContractViolation("knots must be finite");
    if (i > 0 && !(knots_[i - 1] < knots_[i])) {
      throw ContractViolation("knots must be strictly increasing");
    }
  }
}

KnotPool quantile_knot_pool(double nu, std::size_t count) {
  const StdTDist dist(nu);
  std::vector<double> knots(count);
  for (std::size_t j = 0; j < count; ++j) {
    knots[j] = dist.quantile(static_cast<double>(j + 1) / static_cast<double>(count + 1));
  }
  return KnotPool(std::move(knots));
}

SplineSpec::SplineSpec(KnotPool knots)
    : beta(knots.size(), 0.0), pool(std::move(knots)), indicator(pool.size()) {}

void SplineSpec::activate(std::size_t knot, double value) {
  if (knot >= beta.size()) throw ContractViolation("knot index out of range");
  beta[knot] = value;
  indicator.set(knot, true);
}

void SplineSpec::validate() const {
  if (beta.size() != pool.size() || indicator.size() != pool.size()) {
    throw ContractViolation("spline coefficient, indicator and knot counts differ");
  }
  for (std::size_t i = 0; i < beta.size(); ++i) {
    if (!indicator[i] && beta[i] != 0.0) {
      throw ContractViolation("inactive knot " + std::to_string(i + 1) + " has nonzero beta");
    }
  }
}

double truncated_power(double eps, double knot, int degree) {
  if (degree < 0) throw ContractViolation("truncated_power degree must be >= 0");
  if (eps < knot) return 0.0;
  return std::pow(eps - knot, degree);
}

double eval_g(const SplineSpec& spec, double eps) {
  spec.validate();
  return eval_g_raw(spec.b0, spec.b1, spec.b2, spec.beta, spec.pool.knots(), eps);
}

namespace {

constexpr double kSplitPoint = 50.0;

// Partial moments of the standardised t above L >= 0:
//   integral_L^inf eps^j f(eps) d eps,  j = 0, 1, 2.
struct UpperMoments {
  double m0;
  double m1;
  double m2;
};

UpperMoments upper_moments(double lower, double nu) {
  const double s = std::sqrt((nu - 2.0) / nu);
  const double a = lower / s;
  const double w = nu / (nu + a * a);
  const double log_unit_t = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                            0.5 * std::log(nu * std::numbers::pi) -
                            0.5 * (nu + 1.0) * std::log1p(a * a / nu);
  const double p_tail = 0.5 * boost::math::ibeta(0.5 * nu, 0.5, w);
  const double first = std::exp(log_unit_t) * (nu + a * a) / (nu - 1.0);
  const double second = 0.5 * nu / (nu - 2.0) * boost::math::ibeta(0.5 * nu - 1.0, 1.5, w);
  return {p_tail, s * first, s * s * second};
}

// integral_L^inf (eps - k)^2 f(eps) d eps for L >= max(k, 0).
double closed_form_tail(double lower, double knot, double nu) {
  const UpperMoments m = upper_moments(lower, nu);
  return m.m2 - 2.0 * knot * m.m1 + knot * knot * m.m0;
}

}  // namespace

double compute_c(double knot, double nu, double rel_tol) {
  if (!(rel_tol > 0.0)) throw ContractViolation("compute_c tolerance must be positive");
  const StdTDist dist(nu);
  if (knot >= kSplitPoint) return closed_form_tail(knot, knot, nu);

  auto integrand = [&](double eps) {
    const double d = eps - knot;
    return d * d * dist.density(eps);
  };
  QuadratureOptions opts;
  opts.rel_tol = rel_tol;
  opts.max_intervals = 5000;

  double body = 0.0;
  if (knot < -kSplitPoint) {
    body += integrate_adaptive(integrand, knot, -kSplitPoint, opts).value;
    body += integrate_adaptive(integrand, -kSplitPoint, kSplitPoint, opts).value;
  } else {
    body += integrate_adaptive(integrand, knot, kSplitPoint, opts).value;
  }
  return body + closed_form_tail(kSplitPoint, knot, nu);
}

double compute_c_gaussian(double knot) {
  const double phi = std::exp(-0.5 * knot * knot) / std::sqrt(2.0 * std::numbers::pi);
  return -phi * knot + 0.5 * (1.0 + knot * knot) * std::erfc(knot / std::numbers::sqrt2);
}

std::uint64_t c_table_key(const KnotPool& pool, const CGridSpec& grid) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](std::uint64_t word) {
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (word >> (8 * byte)) & 0xFFU;
      h *= 0x100000001b3ULL;
    }
  };
  auto bits = [](double x) {
    std::uint64_t u = 0;
    std::memcpy(&u, &x, sizeof u);
    return u;
  };
  feed(pool.size());
  for (double k : pool.knots()) feed(bits(k));
  feed(grid.points);
  feed(bits(grid.nu_min));
  feed(bits(grid.nu_max));
  return h;
}

CTable::CTable(KnotPool pool, CGridSpec grid, std::vector<double> values)
    : pool_(std::move(pool)), grid_(grid), values_(std::move(values)) {
  if (grid_.points < 2 || !(grid_.nu_min > 2.0) || !(grid_.nu_max > grid_.nu_min)) {
    throw ContractViolation("c-table grid needs >= 2 points and 2 < nu_min < nu_max");
  }
  if (values_.size() != pool_.size() * grid_.points) {
    throw ContractViolation("c-table value count does not match knots x grid points");
  }
  const double x_max = 1.0 / grid_.nu_min;
  const double x_min = 1.0 / grid_.nu_max;
  step_ = (x_max - x_min) / static_cast<double>(grid_.points - 1);
  inv_nu_.resize(grid_.points);
  nu_grid_.resize(grid_.points);
  for (std::size_t j = 0; j < grid_.points; ++j) {
    inv_nu_[j] = j + 1 == grid_.points ? x_min : x_max - static_cast<double>(j) * step_;
    nu_grid_[j] = j == 0 ? grid_.nu_min : (j + 1 == grid_.points ? grid_.nu_max : 1.0 / inv_nu_[j]);
  }
  key_ = c_table_key(pool_, grid_);
}

double CTable::lookup(std::size_t knot, double nu) const {
  if (knot >= pool_.size()) throw ContractViolation("c-table knot index out of range");
  if (nu > grid_.nu_max) return compute_c_gaussian(pool_[knot]);
  if (nu < grid_.nu_min) return compute_c(pool_[knot], nu);
  const double u = (inv_nu_[0] - 1.0 / nu) / step_;
  std::size_t j = static_cast<std::size_t>(std::max(0.0, std::floor(u)));
  j = std::min(j, grid_.points - 2);
  if (nu == nu_grid_[j]) return value(knot, j);
  if (nu == nu_grid_[j + 1]) return value(knot, j + 1);
  const double t = std::clamp(u - static_cast<double>(j), 0.0, 1.0);
  return (1.0 - t) * value(knot, j) + t * value(knot, j + 1);
}

void CTable::lookup_all(double nu, std::span<double> out) const {
  if (out.size() != pool_.size()) throw ContractViolation("lookup_all output size mismatch");
  if (nu > grid_.nu_max || nu < grid_.nu_min) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = lookup(i, nu);
    return;
  }
  const double u = (inv_nu_[0] - 1.0 / nu) / step_;
  std::size_t j = static_cast<std::size_t>(std::max(0.0, std::floor(u)));
  j = std::min(j, grid_.points - 2);
  double t = std::clamp(u - static_cast<double>(j), 0.0, 1.0);
  if (nu == nu_grid_[j]) t = 0.0;
  if (nu == nu_grid_[j + 1]) t = 1.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (t == 0.0) out[i] = value(i, j);
    else if (t == 1.0) out[i] = value(i, j + 1);
    else out[i] = (1.0 - t) * value(i, j) + t * value(i, j + 1);
  }
}

CTable build_c_table(const KnotPool& pool, const CGridSpec& grid, double rel_tol) {
  // Construct once with zeros to get the exact node placement, then fill.
  CTable shape(pool, grid, std::vector<double>(pool.size() * grid.points, 0.0));
  std::vector<double> values(pool.size() * grid.points);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (std::size_t j = 0; j < grid.points; ++j) {
      values[i * grid.points + j] = compute_c(pool[i], shape.nu_grid()[j], rel_tol);
    }
  }
  return CTable(pool, grid, std::move(values));
}

double persistence(const SplineSpec& spec, double nu, const CTable& table) {
  spec.validate();
  if (!(spec.pool == table.pool())) {
    throw ContractViolation("c-table was built for a different knot pool");
  }
  double p = spec.b0 + spec.b2;
  for (std::size_t i = 0; i < spec.beta.size(); ++i) {
    if (spec.beta[i] != 0.0) p += spec.beta[i] * table.lookup(i, nu);
  }
  return p;
}

}  // namespace spgarch
