#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "spgarch/indicator.hpp"
#include "spgarch/model.hpp"

namespace spgarch {

/**
 * @brief Retained MCMC draws: one fixed-width parameter row, indicator and
 * log-likelihood per draw. Inactive knot coefficients are stored as exact zeros.
 */
class PosteriorSample {
 public:
  PosteriorSample() = default;
  PosteriorSample(ModelDescriptor model, std::size_t width);

  void append(std::size_t iteration, const Indicator& m, std::span<const double> row,
              double log_likelihood);
  void reserve(std::size_t n);

  std::size_t size() const noexcept { return loglik_.size(); }
  bool empty() const noexcept { return loglik_.empty(); }
  std::size_t width() const noexcept { return width_; }
  const ModelDescriptor& model() const noexcept { return model_; }

  std::span<const double> row(std::size_t i) const {
    return {rows_.data() + i * width_, width_};
  }
  const Indicator& indicator(std::size_t i) const { return indicators_[i]; }
  double log_likelihood(std::size_t i) const { return loglik_[i]; }
  std::size_t iteration(std::size_t i) const { return iterations_[i]; }

  std::map<Indicator, std::size_t> model_visit_counts() const;

  double acceptance_rate = 0.0;
  std::size_t cache_entries = 0;

 private:
  ModelDescriptor model_;
  std::size_t width_ = 0;
  std::vector<double> rows_;
  std::vector<Indicator> indicators_;
  std::vector<double> loglik_;
  std::vector<std::size_t> iterations_;
};

/// Called once per retained draw with the sample and the new draw's index.
using DrawSink = std::function<void(const PosteriorSample&, std::size_t)>;

}  // namespace spgarch
