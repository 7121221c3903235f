#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "spgarch/error.hpp"
#include "spgarch/model.hpp"
#include "spgarch/posterior.hpp"

namespace spgarch {

/// (1/N) sum_i eta(row_i, m_i). Throws ContractViolation on an empty sample.
template <class Eta>
double bma_estimate(const PosteriorSample& sample, Eta&& eta) {
  if (sample.empty()) throw ContractViolation("BMA estimate of an empty sample");
  double sum = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) sum += eta(sample.row(i), sample.indicator(i));
  return sum / static_cast<double>(sample.size());
}

/// Type-7 (linear interpolation) empirical quantile of `values`, which is sorted in place.
double empirical_quantile(std::vector<double>& values, double prob);

/// Equally spaced grid lo, lo + step, ..., hi.
std::vector<double> make_grid(double lo = -4.0, double hi = 4.0, double step = 0.01);

/// Pointwise posterior mean of g and its equal-tailed credible bounds.
struct FunctionBand {
  std::vector<double> grid;
  std::vector<double> mean;
  std::vector<double> lower;
  std::vector<double> upper;
  double level = 0.95;
};

/// Throws ContractViolation unless 0 < level < 1 and the grid is strictly increasing.
FunctionBand coefficient_band(const PosteriorSample& sample, const std::vector<double>& grid,
                              double level = 0.95);

struct UnconditionalMoments {
  double sigma = 0.0;  ///< posterior mean of sqrt(omega / (1 - persistence))
  double mu = 0.0;     ///< posterior mean of mu
};

/// `table` is required for SP-GARCH samples and ignored otherwise.
UnconditionalMoments unconditional_moments(const PosteriorSample& sample, const CTable* table);

struct DicModelEntry {
  Indicator m;
  std::size_t visits = 0;
  double probability = 0.0;  ///< visits / N
  double dbar = 0.0;         ///< mean deviance over the model's draws
  double d_at_mean = 0.0;    ///< deviance at the model's posterior mean
  double pd = 0.0;
  double dic = 0.0;
  bool mean_in_theta = true;  ///< false: p_D undefined, entry excluded from the average
  bool low_count = false;     ///< fewer than kLowCountVisits draws
};

struct DicReport {
  static constexpr std::size_t kLowCountVisits = 10;

  double dic_ave = 0.0;
  double dbar_ave = 0.0;
  double pd_ave = 0.0;
  /// Same quantities from the ungrouped formulas.
  double dic_ave_direct = 0.0;
  double dbar_ave_direct = 0.0;
  double pd_ave_direct = 0.0;
  std::vector<DicModelEntry> per_model;  ///< ordered by indicator
  std::size_t excluded_draws = 0;
  std::vector<std::string> warnings;
};

/**
 * Averaged DIC. Draws are grouped by indicator; per model
 * p_D = Dbar - D(theta_bar) with theta_bar the model's mean row. Models whose
 * theta_bar leaves the parameter space are flagged and dropped, and the
 * remaining weights N_tau / N are renormalised over the retained draws.
 */
DicReport dic_averaged(const PosteriorSample& sample, const ReturnSeries& r, const CTable* table);

/// Posterior distribution of the number of active knots.
std::map<std::size_t, double> knot_count_probabilities(const PosteriorSample& sample);

/// m read as a K-bit binary number with m_1 the most significant bit.
std::uint64_t indicator_to_decimal(const Indicator& m);

/**
 * Posterior means of sigma_t for t = 1..T+1. Consecutive identical draws
 * (rejected proposals) reuse one filter pass.
 */
std::vector<double> volatility_estimates(const PosteriorSample& sample, const ReturnSeries& r,
                                         const CTable* table);

/// Posterior mean of sigma_{T+1}.
double one_step_forecast(const PosteriorSample& sample, const ReturnSeries& r, const CTable* table);

}  // namespace spgarch
