#include "spgarch/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "spgarch/error.hpp"

namespace spgarch {

// ---------------------------------------------------------------------------
// PosteriorSample

PosteriorSample::PosteriorSample(ModelDescriptor model, std::size_t width)
    : model_(std::move(model)), width_(width) {}

void PosteriorSample::reserve(std::size_t n) {
  rows_.reserve(n * width_);
  indicators_.reserve(n);
  loglik_.reserve(n);
  iterations_.reserve(n);
}

void PosteriorSample::append(std::size_t iteration, const Indicator& m,
                             std::span<const double> row, double log_likelihood) {
  if (row.size() != width_) throw ContractViolation("draw row width mismatch");
  rows_.insert(rows_.end(), row.begin(), row.end());
  indicators_.push_back(m);
  loglik_.push_back(log_likelihood);
  iterations_.push_back(iteration);
}

std::map<Indicator, std::size_t> PosteriorSample::model_visit_counts() const {
  std::map<Indicator, std::size_t> counts;
  for (const auto& m : indicators_) ++counts[m];
  return counts;
}

// ---------------------------------------------------------------------------
// Configuration checks

void MixtureConfig::validate() const {
  if (weights.empty() || weights.size() != scales.size()) {
    throw ContractViolation("mixture weights and scales must be nonempty and equally long");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (!(weights[j] > 0.0)) throw ContractViolation("mixture weights must be positive");
    if (!(scales[j] > 0.0)) throw ContractViolation("mixture scales must be positive");
    total += weights[j];
  }
  if (std::abs(total - 1.0) > 1e-12) throw ContractViolation("mixture weights must sum to 1");
}

void PilotConfig::validate() const {
  if (n_burn >= n_iter) throw ContractViolation("pilot burn-in must be shorter than the pilot run");
  if (!(target_accept > 0.0 && target_accept < 1.0)) {
    throw ContractViolation("pilot target acceptance must lie in (0,1)");
  }
  if (adapt_interval == 0) throw ContractViolation("pilot adapt_interval must be positive");
}

void SamplerConfig::validate() const {
  if (n_burn >= n_iter) throw ContractViolation("n_burn must be smaller than n_iter");
  if (!(flip_prob > 0.0 && flip_prob < 1.0)) throw ContractViolation("flip_prob must lie in (0,1)");
  pilot.validate();
  mixture.validate();
}

double ModelSpaceTarget::Evaluation::log_posterior() const noexcept {
  if (log_likelihood == -std::numeric_limits<double>::infinity()) return log_likelihood;
  return log_likelihood + log_prior;
}

// ---------------------------------------------------------------------------
// Proposal cache

ProposalCacheEntry ProposalCacheEntry::from_moments(Indicator m, Eigen::VectorXd mean,
                                                    Eigen::MatrixXd cov) {
  const auto d = mean.size();
  if (cov.rows() != d || cov.cols() != d) throw ContractViolation("covariance shape mismatch");
  cov = 0.5 * (cov + cov.transpose());
  const double ridge = d > 0 ? 1e-8 * cov.diagonal().mean() : 0.0;
  cov.diagonal().array() += ridge;

  if (d > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo > 1e12) {
      std::ostringstream msg;
      msg << "proposal covariance for configuration " << m.bitstring()
          << " is ill-conditioned (eigenvalues " << lo << " .. " << hi << ")";
      throw NumericError(msg.str());
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw NumericError("proposal covariance for configuration " + m.bitstring() +
                       " is not positive definite");
  }
  ProposalCacheEntry e;
  e.m = std::move(m);
  e.chol = llt.matrixL();
  e.log_det = 2.0 * e.chol.diagonal().array().log().sum();
  e.mean = std::move(mean);
  e.base_cov = std::move(cov);
  e.anchor = e.mean;
  return e;
}

const ProposalCacheEntry& ProposalCache::get(const Indicator& m) const {
  const auto it = entries_.find(m);
  if (it == entries_.end()) {
    throw ContractViolation("no proposal cache entry for configuration " + m.bitstring());
  }
  return it->second;
}

const ProposalCacheEntry& ProposalCache::insert(ProposalCacheEntry entry) {
  const Indicator key = entry.m;
  return entries_.insert_or_assign(key, std::move(entry)).first->second;
}

// ---------------------------------------------------------------------------
// Indicator moves

Indicator propose_indicator(const Indicator& m, double flip_prob, RandomStream& rng) {
  if (!(flip_prob >= 0.0 && flip_prob <= 1.0)) {
    throw ContractViolation("flip probability must lie in [0,1]");
  }
  Indicator out = m;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (rng.uniform() < flip_prob) out.flip(i);
  }
  return out;
}

double indicator_proposal_density(const Indicator& from, const Indicator& to, double flip_prob) {
  if (from.size() != to.size()) throw ContractViolation("indicator lengths differ");
  double q = 1.0;
  for (std::size_t i = 0; i < from.size(); ++i) {
    q *= from[i] != to[i] ? flip_prob : 1.0 - flip_prob;
  }
  return q;
}

// ---------------------------------------------------------------------------
// Pilot adaptive random-walk Metropolis

namespace {

// Running mean and scatter matrix (Welford).
struct RunningMoments {
  explicit RunningMoments(Eigen::Index d) : mean(Eigen::VectorXd::Zero(d)), scatter(Eigen::MatrixXd::Zero(d, d)) {}
  void reset() {
    n = 0;
    mean.setZero();
    scatter.setZero();
  }
  void add(const Eigen::VectorXd& x) {
    ++n;
    const Eigen::VectorXd delta = x - mean;
    mean += delta / static_cast<double>(n);
    scatter.noalias() += delta * (x - mean).transpose();
  }
  Eigen::MatrixXd covariance() const { return scatter / static_cast<double>(n - 1); }

  std::size_t n = 0;
  Eigen::VectorXd mean;
  Eigen::MatrixXd scatter;
};

double evaluate_posterior(const ModelSpaceTarget& target, const Indicator& m,
                          const Eigen::VectorXd& x) {
  return target.evaluate(m, std::span<const double>(x.data(), static_cast<std::size_t>(x.size())))
      .log_posterior();
}

}  // namespace

namespace {

ProposalCacheEntry run_adaptive_chain(const ModelSpaceTarget& target, const Indicator& m,
                                      const PilotConfig& cfg, RandomStream& rng, Eigen::VectorXd x,
                                      double lp, Eigen::MatrixXd factor, bool empirical) {
  const Eigen::Index d = x.size();
  double log_scale = 0.0;
  const double rw_scale = 2.38 * 2.38 / static_cast<double>(d);

  RunningMoments history(d);
  RunningMoments retained(d);
  std::size_t accepted_after_burn = 0;
  std::size_t history_moves = 0;
  Eigen::VectorXd z(d);

  for (std::size_t it = 0; it < cfg.n_iter; ++it) {
    for (Eigen::Index k = 0; k < d; ++k) z[k] = rng.normal();
    const Eigen::VectorXd cand = x + std::exp(log_scale) * (factor * z);
    const double lc = evaluate_posterior(target, m, cand);
    const double alpha = std::isfinite(lc) ? std::min(1.0, std::exp(lc - lp)) : 0.0;
    const bool accept = rng.uniform() < alpha;
    if (accept) {
      x = cand;
      lp = lc;
      ++history_moves;
    }
    log_scale += cfg.scale_gain * (alpha - cfg.target_accept);

    // The first half of the burn-in is treated as transient for the covariance estimate.
    if (it == cfg.n_burn / 2) {
      history.reset();
      history_moves = 0;
    }
    history.add(x);
    // Adapt only once the window holds enough distinct states for a full-rank estimate.
    if ((it + 1) % cfg.adapt_interval == 0 && history_moves >= static_cast<std::size_t>(2 * d)) {
      Eigen::MatrixXd cov = history.covariance();
      cov.diagonal().array() += 1e-10 * std::max(cov.diagonal().mean(), 1e-300);
      Eigen::LLT<Eigen::MatrixXd> llt(rw_scale * cov);
      if (llt.info() == Eigen::Success) {
        factor = llt.matrixL();
        if (!empirical) log_scale = 0.0;
        empirical = true;
      }
    }
    if (it >= cfg.n_burn) {
      retained.add(x);
      if (accept) ++accepted_after_burn;
    }
  }

  if (accepted_after_burn == 0) {
    throw NumericError("pilot chain for configuration " + m.bitstring() +
                       " accepted no moves after burn-in; last log posterior " + std::to_string(lp));
  }
  ProposalCacheEntry entry = ProposalCacheEntry::from_moments(m, retained.mean, retained.covariance());
  entry.pilot_acceptance =
      static_cast<double>(accepted_after_burn) / static_cast<double>(cfg.n_iter - cfg.n_burn);
  entry.anchor = x;
  return entry;
}

}  // namespace

ProposalCacheEntry pilot_rwm(const ModelSpaceTarget& target, const Indicator& m,
                             const PilotConfig& cfg, RandomStream& rng) {
  cfg.validate();
  const Eigen::Index d = static_cast<Eigen::Index>(target.dimension(m));
  Eigen::VectorXd x = target.initial_point(m);
  const Eigen::VectorXd step = target.initial_step(m);
  if (x.size() != d || step.size() != d) {
    throw ContractViolation("initial point/step dimension does not match configuration");
  }
  double lp = evaluate_posterior(target, m, x);
  if (!std::isfinite(lp)) {
    throw NumericError("pilot for configuration " + m.bitstring() +
                       ": initial point has zero posterior density");
  }

  // Short hill climb from the initial point.
  double shrink = 1.0;
  std::size_t failures = 0;
  for (std::size_t it = 0; it < cfg.search_iter; ++it) {
    Eigen::VectorXd cand(d);
    for (Eigen::Index k = 0; k < d; ++k) cand[k] = x[k] + shrink * step[k] * rng.normal();
    const double lc = evaluate_posterior(target, m, cand);
    if (lc > lp) {
      x = cand;
      lp = lc;
      failures = 0;
    } else if (++failures >= 20) {
      shrink *= 0.5;
      failures = 0;
    }
  }
  return run_adaptive_chain(target, m, cfg, rng, std::move(x), lp,
                            Eigen::MatrixXd(step.asDiagonal()), false);
}

PilotStart warm_start_from(const ModelSpaceTarget& target, const ProposalCacheEntry& from,
                           const Indicator& to) {
  const std::size_t base = target.base_dimension();
  const std::size_t k = target.num_knots();
  if (from.m.size() != k || to.size() != k) throw ContractViolation("indicator length mismatch");
  const Eigen::VectorXd step = target.initial_step(to);
  const auto d = static_cast<Eigen::Index>(target.dimension(to));

  // src[j] = coordinate of `from` feeding coordinate j of `to`, or -1 when new.
  std::vector<Eigen::Index> src(static_cast<std::size_t>(d), -1);
  for (std::size_t j = 0; j < base; ++j) src[j] = static_cast<Eigen::Index>(j);
  std::size_t jf = base, jt = base;
  for (std::size_t i = 0; i < k; ++i) {
    if (to[i]) src[jt] = from.m[i] ? static_cast<Eigen::Index>(jf) : -1;
    if (from.m[i]) ++jf;
    if (to[i]) ++jt;
  }

  PilotStart start;
  start.point = Eigen::VectorXd::Zero(d);
  start.cov = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    const Eigen::Index sa = src[static_cast<std::size_t>(a)];
    if (sa < 0) {
      start.cov(a, a) = step[a] * step[a];
      continue;
    }
    start.point[a] = from.mean[sa];
    for (Eigen::Index b = 0; b < d; ++b) {
      const Eigen::Index sb = src[static_cast<std::size_t>(b)];
      if (sb >= 0) start.cov(a, b) = from.base_cov(sa, sb);
    }
  }
  return start;
}

ProposalCacheEntry pilot_rwm(const ModelSpaceTarget& target, const Indicator& m,
                             const PilotConfig& cfg, RandomStream& rng, const PilotStart& start) {
  cfg.validate();
  const Eigen::Index d = static_cast<Eigen::Index>(target.dimension(m));
  if (start.point.size() != d || start.cov.rows() != d || start.cov.cols() != d) {
    throw ContractViolation("warm start dimension does not match configuration");
  }
  const double lp = evaluate_posterior(target, m, start.point);
  Eigen::LLT<Eigen::MatrixXd> llt(2.38 * 2.38 / static_cast<double>(d) * start.cov);
  if (!std::isfinite(lp) || llt.info() != Eigen::Success) return pilot_rwm(target, m, cfg, rng);
  return run_adaptive_chain(target, m, cfg, rng, start.point, lp, llt.matrixL(), true);
}

// ---------------------------------------------------------------------------
// Mixture proposal

Eigen::VectorXd propose_theta(const ProposalCacheEntry& entry, const MixtureConfig& mix,
                              RandomStream& rng, std::size_t& component) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  component = mix.weights.size() - 1;
  for (std::size_t j = 0; j < mix.weights.size(); ++j) {
    cumulative += mix.weights[j];
    if (u < cumulative) {
      component = j;
      break;
    }
  }
  Eigen::VectorXd z(entry.mean.size());
  for (Eigen::Index k = 0; k < z.size(); ++k) z[k] = rng.normal();
  return entry.mean + std::sqrt(mix.scales[component]) * (entry.chol * z);
}

Eigen::VectorXd propose_theta(const ProposalCacheEntry& entry, const MixtureConfig& mix,
                              RandomStream& rng) {
  std::size_t component = 0;
  return propose_theta(entry, mix, rng, component);
}

double mixture_log_density(const Eigen::VectorXd& theta_m, const ProposalCacheEntry& entry,
                           const MixtureConfig& mix) {
  if (theta_m.size() != entry.mean.size()) {
    throw ContractViolation("proposal density: dimension does not match cache entry");
  }
  const double d = static_cast<double>(entry.mean.size());
  const Eigen::VectorXd y =
      entry.chol.triangularView<Eigen::Lower>().solve(theta_m - entry.mean);
  const double q = y.squaredNorm();
  const double base = -0.5 * d * std::log(2.0 * std::numbers::pi) - 0.5 * entry.log_det;

  double top = -std::numeric_limits<double>::infinity();
  std::vector<double> terms(mix.weights.size());
  for (std::size_t j = 0; j < terms.size(); ++j) {
    terms[j] = std::log(mix.weights[j]) + base - 0.5 * d * std::log(mix.scales[j]) -
               0.5 * q / mix.scales[j];
    top = std::max(top, terms[j]);
  }
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - top);
  return top + std::log(sum);
}

// ---------------------------------------------------------------------------
// Acceptance

double acceptance_log_prob(const ChainState& current, const ChainState& proposal) {
  if (proposal.log_post == -std::numeric_limits<double>::infinity()) {
    return -std::numeric_limits<double>::infinity();
  }
  const double log_ratio = proposal.log_post + current.log_q - current.log_post - proposal.log_q;
  return std::min(0.0, log_ratio);
}

double acceptance_log_prob(const ChainState& current, const ChainState& proposal,
                           const ProposalCache& cache, const MixtureConfig& mix) {
  ChainState cur = current;
  ChainState prop = proposal;
  cur.log_q = mixture_log_density(cur.theta, cache.get(cur.m), mix);
  prop.log_q = mixture_log_density(prop.theta, cache.get(prop.m), mix);
  return acceptance_log_prob(cur, prop);
}

// ---------------------------------------------------------------------------
// Trans-model sampler

PosteriorSample run_trans_model_sampler(const ModelSpaceTarget& target, const SamplerConfig& cfg,
                                        ModelDescriptor model, const DrawSink& sink) {
  cfg.validate();
  const std::size_t k = target.num_knots();
  RandomStream rng(derive_seed(cfg.seed, 0));
  ProposalCache cache;

  // `near` is a cached configuration used for warm starts (may be null).
  auto entry_for = [&](const Indicator& m, const ProposalCacheEntry* near) -> const ProposalCacheEntry& {
    if (cache.contains(m)) return cache.get(m);
    RandomStream pilot_rng(derive_seed(cfg.seed, 1 + static_cast<std::uint64_t>(m.mask())));
    if (cfg.pilot.warm_start && near != nullptr) {
      return cache.insert(
          pilot_rwm(target, m, cfg.pilot, pilot_rng, warm_start_from(target, *near, m)));
    }
    return cache.insert(pilot_rwm(target, m, cfg.pilot, pilot_rng));
  };
  auto eval = [&](const Indicator& m, const Eigen::VectorXd& x) {
    return target.evaluate(m, std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
  };

  ChainState current;
  current.m = Indicator(k);
  const ProposalCacheEntry& first = entry_for(current.m, nullptr);
  current.theta = first.mean;
  auto current_eval = eval(current.m, current.theta);
  if (!std::isfinite(current_eval.log_posterior())) {
    current.theta = first.anchor;
    current_eval = eval(current.m, current.theta);
  }
  current.log_post = current_eval.log_posterior();
  current.log_q = mixture_log_density(current.theta, first, cfg.mixture);

  PosteriorSample sample(std::move(model), target.row_width());
  sample.reserve(cfg.n_iter - cfg.n_burn);
  std::vector<double> row(target.row_width());
  std::size_t accepted = 0;

  for (std::size_t it = 0; it < cfg.n_iter; ++it) {
    ChainState proposal;
    proposal.m = propose_indicator(current.m, cfg.flip_prob, rng);
    const ProposalCacheEntry& entry = entry_for(proposal.m, &cache.get(current.m));
    proposal.theta = propose_theta(entry, cfg.mixture, rng);
    const auto proposal_eval = eval(proposal.m, proposal.theta);
    proposal.log_post = proposal_eval.log_posterior();
    proposal.log_q = mixture_log_density(proposal.theta, entry, cfg.mixture);

    const double log_u = acceptance_log_prob(current, proposal);
    if (std::log(rng.uniform_pos()) < log_u) {
      current = std::move(proposal);
      current_eval = proposal_eval;
      if (it >= cfg.n_burn) ++accepted;
    }

    if (cfg.coherence_check_interval != 0 && (it + 1) % cfg.coherence_check_interval == 0) {
      const double fresh = eval(current.m, current.theta).log_posterior();
      if (!(std::abs(fresh - current.log_post) <= 1e-10 * std::max(1.0, std::abs(fresh)))) {
        std::ostringstream msg;
        msg << "cached log posterior " << current.log_post << " differs from recomputed " << fresh
            << " at iteration " << it + 1;
        throw NumericError(msg.str());
      }
    }

    if (it >= cfg.n_burn) {
      target.embed(current.m,
                   std::span<const double>(current.theta.data(),
                                           static_cast<std::size_t>(current.theta.size())),
                   row);
      sample.append(it + 1, current.m, row, current_eval.log_likelihood);
      if (sink) sink(sample, sample.size() - 1);
    }
  }
  sample.acceptance_rate =
      static_cast<double>(accepted) / static_cast<double>(cfg.n_iter - cfg.n_burn);
  sample.cache_entries = cache.size();
  return sample;
}

}  // namespace spgarch
