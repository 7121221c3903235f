#pragma once

#include <cstddef>

#include "spgarch/bayes.hpp"
#include "spgarch/model.hpp"
#include "spgarch/sampler.hpp"
#include "spgarch/volmodel.hpp"

namespace spgarch {

/**
 * @brief SP-GARCH posterior over (m, theta_m).
 *
 * theta_m = (nu, mu, omega, b0, b1, b2, beta_i for active i in knot order).
 * Holds references to the data and the c-table; both must outlive the target.
 */
class SpGarchTarget final : public ModelSpaceTarget {
 public:
  SpGarchTarget(const ReturnSeries& r, const CTable& table, PriorConfig prior);

  std::size_t num_knots() const override { return table_.pool().size(); }
  std::size_t base_dimension() const override { return 6; }
  Evaluation evaluate(const Indicator& m, std::span<const double> theta_m) const override;
  Eigen::VectorXd initial_point(const Indicator& m) const override;
  Eigen::VectorXd initial_step(const Indicator& m) const override;
  std::size_t row_width() const override { return 6 + num_knots(); }
  void embed(const Indicator& m, std::span<const double> theta_m,
             std::span<double> row) const override;

  ModelDescriptor descriptor() const { return {ModelKind::SpGarch, table_.pool()}; }

 private:
  const ReturnSeries& r_;
  const CTable& table_;
  PriorConfig prior_;
  double sigma2_1_;
};

/**
 * @brief Fixed-dimension parametric posterior (K = 0, single configuration).
 *
 * theta = (nu, mu, omega, beta, alpha[, alpha2 | c]) with prior -2 log nu.
 */
class ParametricTarget final : public ModelSpaceTarget {
 public:
  ParametricTarget(ModelKind kind, const ReturnSeries& r);

  std::size_t num_knots() const override { return 0; }
  std::size_t base_dimension() const override { return descriptor_.row_width(); }
  Evaluation evaluate(const Indicator& m, std::span<const double> theta_m) const override;
  Eigen::VectorXd initial_point(const Indicator& m) const override;
  Eigen::VectorXd initial_step(const Indicator& m) const override;
  std::size_t row_width() const override { return descriptor_.row_width(); }
  void embed(const Indicator& m, std::span<const double> theta_m,
             std::span<double> row) const override;

  const ModelDescriptor& descriptor() const noexcept { return descriptor_; }

 private:
  ModelDescriptor descriptor_;
  const ReturnSeries& r_;
};

PosteriorSample run_spgarch_sampler(const ReturnSeries& r, const SamplerConfig& cfg,
                                    const PriorConfig& prior, const CTable& table,
                                    const DrawSink& sink = {});

/// Independence sampler for a parametric model; `kind` must not be SpGarch.
PosteriorSample run_parametric_sampler(ModelKind kind, const ReturnSeries& r,
                                       const SamplerConfig& cfg, const DrawSink& sink = {});

}  // namespace spgarch
