#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "spgarch/indicator.hpp"

namespace spgarch {

/// Strictly increasing knot locations k_1 < ... < k_K, in innovation units.
class KnotPool {
 public:
  KnotPool() = default;
  /// Throws ContractViolation unless strictly increasing, finite and K <= 32.
  explicit KnotPool(std::vector<double> knots);

  std::size_t size() const noexcept { return knots_.size(); }
  double operator[](std::size_t i) const noexcept { return knots_[i]; }
  std::span<const double> knots() const noexcept { return knots_; }

  friend bool operator==(const KnotPool&, const KnotPool&) = default;

 private:
  std::vector<double> knots_;
};

/**
 * Knots at the quantile levels 1/(K+1), ..., K/(K+1) of the standardised t
 * with `nu` degrees of freedom. The default (nu = 8, K = 9) gives the deciles.
 */
KnotPool quantile_knot_pool(double nu = 8.0, std::size_t count = 9);

/**
 * @brief Quadratic truncated-power spline
 *   g(eps) = b0 + b1 eps + b2 eps^2 + sum_i beta_i (eps - k_i)_+^2.
 *
 * beta has one entry per knot in the pool; entries whose indicator bit is
 * off must be exactly zero.
 */
struct SplineSpec {
  double b0 = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  std::vector<double> beta;
  KnotPool pool;
  Indicator indicator;

  SplineSpec() = default;
  /// Zero coefficients, all knots inactive.
  explicit SplineSpec(KnotPool knots);

  /// Sets beta_i and switches m_i on (value != 0 is not required).
  void activate(std::size_t knot, double value);

  /// Throws ContractViolation on size mismatch or nonzero inactive beta.
  void validate() const;
};

/// (eps - knot)^degree when eps >= knot, else 0.
double truncated_power(double eps, double knot, int degree);

double eval_g(const SplineSpec& spec, double eps);

/// Same as eval_g on raw arrays (beta.size() == knots.size()); no validation.
inline double eval_g_raw(double b0, double b1, double b2, std::span<const double> beta,
                         std::span<const double> knots, double eps) noexcept {
  double g = b0 + eps * (b1 + b2 * eps);
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const double d = eps - knots[i];
    if (d >= 0.0) g += beta[i] * d * d;
  }
  return g;
}

/**
 * c(k; nu) = integral_k^inf (eps - k)^2 f_nu(eps) d eps for the standardised t.
 *
 * The finite part of the range is integrated by adaptive Gauss-Kronrod with
 * breakpoints at the knot and at +-50; the tail beyond 50 is added in closed
 * form from the incomplete-beta partial moments. `rel_tol` is the relative
 * tolerance passed to the quadrature. Throws NumericError on non-convergence.
 */
double compute_c(double knot, double nu, double rel_tol = 1e-10);

/// Standard-normal counterpart of compute_c in closed form.
double compute_c_gaussian(double knot);

struct CGridSpec {
  std::size_t points = 400;
  double nu_min = 2.02;
  double nu_max = 200.0;

  friend bool operator==(const CGridSpec&, const CGridSpec&) = default;
};

/**
 * @brief Precomputed c_i(nu) for every knot of a pool on a grid uniform in 1/nu.
 *
 * Lookup interpolates linearly in 1/nu. Outside the grid: nu > nu_max uses the
 * Gaussian closed form, nu < nu_min falls back to direct quadrature.
 * Immutable after construction; safe to share between threads.
 */
class CTable {
 public:
  CTable(KnotPool pool, CGridSpec grid, std::vector<double> values);

  const KnotPool& pool() const noexcept { return pool_; }
  const CGridSpec& grid() const noexcept { return grid_; }
  /// Degrees of freedom at the grid nodes, increasing.
  std::span<const double> nu_grid() const noexcept { return nu_grid_; }
  /// Stored entry for knot i at node j.
  double value(std::size_t knot, std::size_t node) const { return values_[knot * grid_.points + node]; }
  std::span<const double> values() const noexcept { return values_; }

  double lookup(std::size_t knot, double nu) const;
  /// Fills out[i] = lookup(i, nu) for all knots.
  void lookup_all(double nu, std::span<double> out) const;

  /// Hash of (knot pool, grid spec) used to key cache files.
  std::uint64_t key() const noexcept { return key_; }

 private:
  KnotPool pool_;
  CGridSpec grid_;
  std::vector<double> nu_grid_;
  std::vector<double> inv_nu_;
  std::vector<double> values_;
  double step_ = 0.0;
  std::uint64_t key_ = 0;
};

std::uint64_t c_table_key(const KnotPool& pool, const CGridSpec& grid) noexcept;

/// Builds the table by quadrature at every (knot, node) pair.
CTable build_c_table(const KnotPool& pool, const CGridSpec& grid = {}, double rel_tol = 1e-10);

/// Writes the table as text with hexadecimal floats (bit-exact reload).
void save_c_table(const CTable& table, const std::filesystem::path& path);
/// Throws ParseError on malformed input.
CTable load_c_table(const std::filesystem::path& path);

/**
 * Loads `<dir>/ctable-<key>.txt` if present and matching, otherwise builds and
 * writes it. An empty dir disables caching.
 */
CTable load_or_build_c_table(const std::filesystem::path& dir, const KnotPool& pool,
                             const CGridSpec& grid = {});

/**
 * Persistence E[g(eps)] = b0 + b2 + sum_i beta_i c_i(nu). The b1 term vanishes
 * because the innovation density is symmetric. The table must have been built
 * for spec.pool.
 */
double persistence(const SplineSpec& spec, double nu, const CTable& table);

}  // namespace spgarch
