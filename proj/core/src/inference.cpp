#include "spgarch/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spgarch {

namespace {

bool same_draw(const PosteriorSample& s, std::size_t a, std::size_t b) {
  if (s.indicator(a) != s.indicator(b)) return false;
  const auto ra = s.row(a);
  const auto rb = s.row(b);
  return std::equal(ra.begin(), ra.end(), rb.begin());
}

// Neumaier summation; deviance sums over 1e5 draws otherwise lose ~1e-8 absolute.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

void require_nonempty(const PosteriorSample& sample) {
  if (sample.empty()) throw ContractViolation("posterior sample is empty");
}

}  // namespace

double empirical_quantile(std::vector<double>& values, double prob) {
  if (values.empty()) throw ContractViolation("quantile of an empty set");
  if (!(prob >= 0.0 && prob <= 1.0)) throw ContractViolation("quantile level outside [0,1]");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw ContractViolation("invalid grid specification");
  const auto n = static_cast<std::size_t>(std::llround((hi - lo) / step)) + 1;
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = lo + static_cast<double>(i) * step;
  return grid;
}

FunctionBand coefficient_band(const PosteriorSample& sample, const std::vector<double>& grid,
                              double level) {
  require_nonempty(sample);
  if (!(level > 0.0 && level < 1.0)) throw ContractViolation("band level must lie in (0,1)");
  for (std::size_t j = 1; j < grid.size(); ++j) {
    if (!(grid[j] > grid[j - 1])) throw ContractViolation("band grid must be strictly increasing");
  }
  FunctionBand band;
  band.grid = grid;
  band.level = level;
  band.mean.resize(grid.size());
  band.lower.resize(grid.size());
  band.upper.resize(grid.size());
  const ModelDescriptor& model = sample.model();
  std::vector<double> values(sample.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
      values[i] = row_g(model, sample.row(i), grid[j]);
      sum += values[i];
    }
    band.mean[j] = sum / static_cast<double>(sample.size());
    band.lower[j] = empirical_quantile(values, 0.5 * (1.0 - level));
    band.upper[j] = empirical_quantile(values, 0.5 * (1.0 + level));
  }
  return band;
}

UnconditionalMoments unconditional_moments(const PosteriorSample& sample, const CTable* table) {
  require_nonempty(sample);
  const ModelView view(sample.model(), table);
  UnconditionalMoments out;
  out.sigma = bma_estimate(sample, [&](std::span<const double> row, const Indicator& m) {
    return std::sqrt(row[2] / (1.0 - view.persistence(row, m)));
  });
  out.mu = bma_estimate(sample, [](std::span<const double> row, const Indicator&) { return row[1]; });
  return out;
}

DicReport dic_averaged(const PosteriorSample& sample, const ReturnSeries& r, const CTable* table) {
  require_nonempty(sample);
  const ModelView view(sample.model(), table);
  const std::size_t width = sample.width();

  struct Group {
    std::size_t visits = 0;
    CompensatedSum dev_sum;
    std::vector<double> row_sum;
  };
  std::map<Indicator, Group> groups;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    Group& g = groups[sample.indicator(i)];
    if (g.row_sum.empty()) g.row_sum.assign(width, 0.0);
    ++g.visits;
    g.dev_sum.add(-2.0 * sample.log_likelihood(i));
    const auto row = sample.row(i);
    for (std::size_t j = 0; j < width; ++j) g.row_sum[j] += row[j];
  }

  DicReport rep;
  const double n_total = static_cast<double>(sample.size());
  std::size_t n_kept = 0;
  std::vector<double> mean_row(width);
  for (const auto& [m, g] : groups) {
    DicModelEntry e;
    e.m = m;
    e.visits = g.visits;
    e.probability = static_cast<double>(g.visits) / n_total;
    e.dbar = g.dev_sum.value() / static_cast<double>(g.visits);
    e.low_count = g.visits < DicReport::kLowCountVisits;
    for (std::size_t j = 0; j < width; ++j) mean_row[j] = g.row_sum[j] / static_cast<double>(g.visits);
    const double ll = view.log_likelihood(mean_row, m, r);
    if (ll == -std::numeric_limits<double>::infinity()) {
      e.mean_in_theta = false;
      e.d_at_mean = std::numeric_limits<double>::quiet_NaN();
      e.pd = std::numeric_limits<double>::quiet_NaN();
      e.dic = std::numeric_limits<double>::quiet_NaN();
      rep.excluded_draws += g.visits;
      rep.warnings.push_back("model " + m.bitstring() +
                             ": posterior mean lies outside the parameter space; excluded");
    } else {
      e.d_at_mean = -2.0 * ll;
      e.pd = e.dbar - e.d_at_mean;
      e.dic = e.dbar + e.pd;
      n_kept += g.visits;
    }
    if (e.low_count) {
      rep.warnings.push_back("model " + m.bitstring() + ": only " + std::to_string(g.visits) +
                             " draws; DIC is unreliable");
    }
    rep.per_model.push_back(std::move(e));
  }
  if (n_kept == 0) {
    throw NumericError("averaged DIC undefined: every visited model's posterior mean is outside the parameter space");
  }

  // Grouped route.
  const double nk = static_cast<double>(n_kept);
  CompensatedSum dbar_ave, pd_ave, dic_ave;
  for (const auto& e : rep.per_model) {
    if (!e.mean_in_theta) continue;
    const double w = static_cast<double>(e.visits) / nk;
    dbar_ave.add(w * e.dbar);
    pd_ave.add(w * e.pd);
    dic_ave.add(w * e.dic);
  }
  rep.dbar_ave = dbar_ave.value();
  rep.pd_ave = pd_ave.value();
  rep.dic_ave = dic_ave.value();

  // Direct route: Dbar_ave = N^-1 sum_i D_i, p_D = Dbar_ave - N^-1 sum_i D(theta_bar_{tau_i}).
  std::map<Indicator, double> d_at_mean;
  for (const auto& e : rep.per_model) {
    if (e.mean_in_theta) d_at_mean.emplace(e.m, e.d_at_mean);
  }
  CompensatedSum dev_sum;
  CompensatedSum plug_sum;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const auto it = d_at_mean.find(sample.indicator(i));
    if (it == d_at_mean.end()) continue;
    dev_sum.add(-2.0 * sample.log_likelihood(i));
    plug_sum.add(it->second);
  }
  rep.dbar_ave_direct = dev_sum.value() / nk;
  rep.pd_ave_direct = rep.dbar_ave_direct - plug_sum.value() / nk;
  rep.dic_ave_direct = rep.dbar_ave_direct + rep.pd_ave_direct;
  return rep;
}

std::map<std::size_t, double> knot_count_probabilities(const PosteriorSample& sample) {
  require_nonempty(sample);
  std::map<std::size_t, double> probs;
  for (std::size_t i = 0; i < sample.size(); ++i) probs[sample.indicator(i).count()] += 1.0;
  for (auto& [k, p] : probs) p /= static_cast<double>(sample.size());
  return probs;
}

std::uint64_t indicator_to_decimal(const Indicator& m) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < m.size(); ++i) v = (v << 1) | (m[i] ? 1U : 0U);
  return v;
}

std::vector<double> volatility_estimates(const PosteriorSample& sample, const ReturnSeries& r,
                                         const CTable* table) {
  require_nonempty(sample);
  const ModelView view(sample.model(), table);
  const std::size_t n = r.size() + 1;
  std::vector<double> sum(n, 0.0);
  std::size_t i = 0;
  while (i < sample.size()) {
    std::size_t run = 1;
    while (i + run < sample.size() && same_draw(sample, i, i + run)) ++run;
    const VolatilityPath path = view.filter(sample.row(i), sample.indicator(i), r);
    if (!path.positive) {
      throw NumericError("draw " + std::to_string(sample.iteration(i)) +
                         " yields a non-positive variance path");
    }
    const double w = static_cast<double>(run);
    for (std::size_t t = 0; t < n; ++t) sum[t] += w * std::sqrt(path.sigma2[t]);
    i += run;
  }
  for (double& v : sum) v /= static_cast<double>(sample.size());
  return sum;
}

double one_step_forecast(const PosteriorSample& sample, const ReturnSeries& r, const CTable* table) {
  return volatility_estimates(sample, r, table).back();
}

}  // namespace spgarch
