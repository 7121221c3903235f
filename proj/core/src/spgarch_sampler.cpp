#include "spgarch/spgarch_sampler.hpp"

#include <array>
#include <cmath>

#include "spgarch/error.hpp"

namespace spgarch {

namespace {

bool scalar_ok(double nu, double omega) {
  return nu > 2.0 && nu <= kMaxDegreesOfFreedom && omega > 0.0 && std::isfinite(omega);
}

void check_theta_size(std::size_t got, std::size_t want) {
  if (got != want) {
    throw ContractViolation("theta has " + std::to_string(got) + " coordinates, expected " +
                            std::to_string(want));
  }
}

}  // namespace

// ---------------------------------------------------------------------------

SpGarchTarget::SpGarchTarget(const ReturnSeries& r, const CTable& table, PriorConfig prior)
    : r_(r), table_(table), prior_(std::move(prior)), sigma2_1_(r.sample_variance()) {
  prior_.validate(table_.pool().size());
  if (!(sigma2_1_ > 0.0)) throw DomainError("sample variance of the returns is zero");
}

ModelSpaceTarget::Evaluation SpGarchTarget::evaluate(const Indicator& m,
                                                     std::span<const double> th) const {
  const std::size_t k = num_knots();
  if (m.size() != k) throw ContractViolation("indicator length differs from the knot pool");
  check_theta_size(th.size(), dimension(m));

  const double nu = th[0], mu = th[1], omega = th[2];
  const std::span<const double> active_beta = th.subspan(6);
  if (!scalar_ok(nu, omega)) return {kNegInf, 0.0};

  std::array<double, Indicator::kMaxKnots> knots{};
  std::size_t n = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (m[i]) knots[n++] = table_.pool()[i];
  }
  double p = th[3] + th[5];
  {
    std::size_t j = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (m[i]) {
        p += active_beta[j] * table_.lookup(i, nu);
        ++j;
      }
    }
  }
  const double lprior = log_prior_raw(nu, active_beta, m, prior_);
  if (!(p > 0.0 && p < 1.0)) return {kNegInf, lprior};

  const StdTDist dist(nu);
  const detail::SplineStep step{omega, th[3], th[4], th[5], active_beta.data(), knots.data(), n};
  const double ll = detail::fused_log_likelihood(step, r_.values(), sigma2_1_, mu, dist);
  return {ll, lprior};
}

Eigen::VectorXd SpGarchTarget::initial_point(const Indicator& m) const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dimension(m)));
  x[0] = 8.0;
  x[1] = r_.mean();
  x[2] = 0.05 * sigma2_1_;
  x[3] = 0.9;
  x[4] = 0.0;
  x[5] = 0.05;
  return x;
}

Eigen::VectorXd SpGarchTarget::initial_step(const Indicator& m) const {
  Eigen::VectorXd s = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(dimension(m)), 0.05);
  s[0] = 0.5;
  s[1] = std::sqrt(sigma2_1_ / static_cast<double>(r_.size()));
  s[2] = 0.1 * 0.05 * sigma2_1_;
  s[3] = 0.01;
  s[4] = 0.01;
  s[5] = 0.01;
  return s;
}

void SpGarchTarget::embed(const Indicator& m, std::span<const double> th,
                          std::span<double> row) const {
  check_theta_size(th.size(), dimension(m));
  if (row.size() != row_width()) throw ContractViolation("row width mismatch");
  std::copy(th.begin(), th.begin() + 6, row.begin());
  std::size_t j = 6;
  for (std::size_t i = 0; i < num_knots(); ++i) row[6 + i] = m[i] ? th[j++] : 0.0;
}

// ---------------------------------------------------------------------------

ParametricTarget::ParametricTarget(ModelKind kind, const ReturnSeries& r)
    : descriptor_{kind, {}}, r_(r) {
  (void)family_of(kind);
  if (!(r.sample_variance() > 0.0)) throw DomainError("sample variance of the returns is zero");
}

ModelSpaceTarget::Evaluation ParametricTarget::evaluate(const Indicator& m,
                                                        std::span<const double> th) const {
  if (m.size() != 0) throw ContractViolation("parametric models have no knots");
  check_theta_size(th.size(), row_width());
  const double nu = th[0];
  if (!scalar_ok(nu, th[2])) return {kNegInf, 0.0};
  const double lprior = -2.0 * std::log(nu);
  ParametricFamily f;
  switch (descriptor_.kind) {
    case ModelKind::Garch: f = ParametricFamily::garch(th[3], th[4]); break;
    case ModelKind::Gjr: f = ParametricFamily::gjr(th[3], th[4], th[5]); break;
    case ModelKind::Nagarch: f = ParametricFamily::nagarch(th[3], th[4], th[5]); break;
    case ModelKind::BetaT: f = ParametricFamily::beta_t(th[3], th[4], th[5], nu); break;
    case ModelKind::SpGarch: throw ContractViolation("not a parametric model");
  }
  const double p = parametric_persistence(f);
  if (!(p > 0.0 && p < 1.0)) return {kNegInf, lprior};
  const StdTDist dist(nu);
  const double ll = detail::visit_family_step(f, th[2], [&](const auto& step) {
    return detail::fused_log_likelihood(step, r_.values(), r_.sample_variance(), th[1], dist);
  });
  return {ll, lprior};
}

Eigen::VectorXd ParametricTarget::initial_point(const Indicator&) const {
  Eigen::VectorXd x(static_cast<Eigen::Index>(row_width()));
  x[0] = 8.0;
  x[1] = r_.mean();
  x[2] = 0.05 * r_.sample_variance();
  x[3] = 0.9;
  x[4] = 0.05;
  if (descriptor_.kind == ModelKind::Gjr || descriptor_.kind == ModelKind::BetaT) {
    x[4] = 0.03;
    x[5] = 0.04;
  } else if (descriptor_.kind == ModelKind::Nagarch) {
    x[5] = 0.0;
  }
  return x;
}

Eigen::VectorXd ParametricTarget::initial_step(const Indicator&) const {
  Eigen::VectorXd s = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(row_width()), 0.01);
  s[0] = 0.5;
  s[1] = std::sqrt(r_.sample_variance() / static_cast<double>(r_.size()));
  s[2] = 0.1 * 0.05 * r_.sample_variance();
  if (descriptor_.kind == ModelKind::Nagarch) s[5] = 0.05;
  return s;
}

void ParametricTarget::embed(const Indicator&, std::span<const double> th,
                             std::span<double> row) const {
  check_theta_size(th.size(), row_width());
  std::copy(th.begin(), th.end(), row.begin());
}

// ---------------------------------------------------------------------------

PosteriorSample run_spgarch_sampler(const ReturnSeries& r, const SamplerConfig& cfg,
                                    const PriorConfig& prior, const CTable& table,
                                    const DrawSink& sink) {
  const SpGarchTarget target(r, table, prior);
  return run_trans_model_sampler(target, cfg, target.descriptor(), sink);
}

PosteriorSample run_parametric_sampler(ModelKind kind, const ReturnSeries& r,
                                       const SamplerConfig& cfg, const DrawSink& sink) {
  const ParametricTarget target(kind, r);
  return run_trans_model_sampler(target, cfg, target.descriptor(), sink);
}

}  // namespace spgarch
