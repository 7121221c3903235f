#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "spgarch/indicator.hpp"
#include "spgarch/posterior.hpp"
#include "spgarch/random.hpp"

namespace spgarch {

/// Gaussian scale mixture used as independence proposal: sum_j w_j N(mean, s_j * cov).
struct MixtureConfig {
  std::vector<double> weights{0.85, 0.10, 0.05};
  std::vector<double> scales{1.0, 10.0, 100.0};

  void validate() const;
};

/// Adaptive random-walk Metropolis run that fits proposal moments for one configuration.
struct PilotConfig {
  std::size_t n_iter = 20000;
  std::size_t n_burn = 5000;
  double target_accept = 0.234;
  /// Proposal covariance is refreshed from the chain history this often.
  std::size_t adapt_interval = 100;
  /// Robbins-Monro gain on the log proposal scale.
  double scale_gain = 0.01;
  /// Hill-climbing steps used to pick the starting point.
  std::size_t search_iter = 200;
  /// Start each new configuration from the moments of the chain's current one.
  bool warm_start = false;

  void validate() const;
};

struct SamplerConfig {
  std::size_t n_iter = 550000;
  std::size_t n_burn = 50000;
  /// Per-knot flip probability of the indicator random walk.
  double flip_prob = 0.1;
  PilotConfig pilot;
  MixtureConfig mixture;
  std::uint64_t seed = 1;
  /// When nonzero, recompute the current log posterior this often and throw on mismatch.
  std::size_t coherence_check_interval = 0;

  void validate() const;
};

/**
 * @brief Unnormalised posterior over (m, theta_m).
 *
 * theta_m has base_dimension() + m.count() coordinates: the always-present
 * parameters followed by the coefficients of the active knots in knot order.
 */
class ModelSpaceTarget {
 public:
  struct Evaluation {
    double log_likelihood;
    double log_prior;
    double log_posterior() const noexcept;
  };

  virtual ~ModelSpaceTarget() = default;

  virtual std::size_t num_knots() const = 0;
  virtual std::size_t base_dimension() const = 0;
  std::size_t dimension(const Indicator& m) const { return base_dimension() + m.count(); }

  /// log_likelihood is -inf outside the support.
  virtual Evaluation evaluate(const Indicator& m, std::span<const double> theta_m) const = 0;

  virtual Eigen::VectorXd initial_point(const Indicator& m) const = 0;
  /// Per-coordinate standard deviations for the first pilot proposals.
  virtual Eigen::VectorXd initial_step(const Indicator& m) const = 0;

  /// Width of a stored row; inactive knot coefficients become zeros.
  virtual std::size_t row_width() const = 0;
  virtual void embed(const Indicator& m, std::span<const double> theta_m,
                     std::span<double> row) const = 0;
};

/// Fitted independence-proposal moments for one knot configuration.
struct ProposalCacheEntry {
  Indicator m;
  Eigen::VectorXd mean;
  Eigen::MatrixXd base_cov;
  Eigen::MatrixXd chol;  ///< lower Cholesky factor of base_cov
  double log_det = 0.0;
  double pilot_acceptance = 0.0;
  /// A pilot state with finite target density.
  Eigen::VectorXd anchor;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(mean.size()); }

  /**
   * Adds 1e-8 * mean(diag) to the diagonal and factorises. Throws NumericError
   * if the regularised matrix is not positive definite or its condition number
   * exceeds 1e12.
   */
  static ProposalCacheEntry from_moments(Indicator m, Eigen::VectorXd mean, Eigen::MatrixXd cov);
};

/// Entries keyed by configuration; created once, never modified.
class ProposalCache {
 public:
  bool contains(const Indicator& m) const { return entries_.contains(m); }
  /// Throws ContractViolation if absent.
  const ProposalCacheEntry& get(const Indicator& m) const;
  const ProposalCacheEntry& insert(ProposalCacheEntry entry);
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::unordered_map<Indicator, ProposalCacheEntry> entries_;
};

/// Flips each bit independently with probability flip_prob.
Indicator propose_indicator(const Indicator& m, double flip_prob, RandomStream& rng);

/// q(to | from) = prod_j flip_prob^[to_j != from_j] (1 - flip_prob)^[to_j == from_j].
double indicator_proposal_density(const Indicator& from, const Indicator& to, double flip_prob);

/**
 * Pilot adaptive RWM targeting the posterior of configuration m. The starting
 * point comes from a short hill climb from target.initial_point(m). The proposal
 * covariance is (2.38^2 / d) times the running chain covariance, refreshed every
 * adapt_interval steps, with a log scale tuned toward target_accept. Returns the
 * post-burn-in sample mean and covariance. Throws NumericError if the post-burn
 * chain never moves.
 */
ProposalCacheEntry pilot_rwm(const ModelSpaceTarget& target, const Indicator& m,
                             const PilotConfig& cfg, RandomStream& rng);

/// Initial state and proposal covariance for a warm-started pilot.
struct PilotStart {
  Eigen::VectorXd point;
  Eigen::MatrixXd cov;
};

/**
 * Maps the moments of `from` onto configuration `to`: shared coordinates keep
 * their mean and covariance, newly active coefficients start at 0 with variance
 * step^2 taken from target.initial_step(to) and no correlation.
 */
PilotStart warm_start_from(const ModelSpaceTarget& target, const ProposalCacheEntry& from,
                           const Indicator& to);

/**
 * As above, but starts at start.point with proposal covariance
 * (2.38^2 / d) start.cov, skipping the hill climb. Falls back to the cold start
 * if start.point has zero density or start.cov is not positive definite.
 */
ProposalCacheEntry pilot_rwm(const ModelSpaceTarget& target, const Indicator& m,
                             const PilotConfig& cfg, RandomStream& rng, const PilotStart& start);

Eigen::VectorXd propose_theta(const ProposalCacheEntry& entry, const MixtureConfig& mix,
                              RandomStream& rng);

/// Component index drawn together with the proposal (exposed for frequency tests).
Eigen::VectorXd propose_theta(const ProposalCacheEntry& entry, const MixtureConfig& mix,
                              RandomStream& rng, std::size_t& component);

double mixture_log_density(const Eigen::VectorXd& theta_m, const ProposalCacheEntry& entry,
                           const MixtureConfig& mix);

struct ChainState {
  Indicator m;
  Eigen::VectorXd theta;
  double log_post = 0.0;
  /// Mixture log density of theta under the entry of m.
  double log_q = 0.0;
};

/// min(0, log p* + log q(theta | m) - log p - log q(theta* | m*)).
double acceptance_log_prob(const ChainState& current, const ChainState& proposal);

/// As above, recomputing both log q terms from their own cache entries.
double acceptance_log_prob(const ChainState& current, const ChainState& proposal,
                           const ProposalCache& cache, const MixtureConfig& mix);

/**
 * Trans-model independence sampler: indicator random walk, lazily piloted
 * per-configuration mixture proposals, Metropolis-Hastings acceptance.
 * Starts from the all-zero configuration. Retains draws after n_burn.
 *
 * Seeds: the chain uses derive_seed(seed, 0); the pilot for configuration with
 * mask b uses derive_seed(seed, 1 + b), so cache entries do not depend on the
 * order in which configurations are first proposed.
 */
PosteriorSample run_trans_model_sampler(const ModelSpaceTarget& target, const SamplerConfig& cfg,
                                        ModelDescriptor model = {}, const DrawSink& sink = {});

}  // namespace spgarch
