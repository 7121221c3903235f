#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spgarch/bayes.hpp"
#include "spgarch/sampler.hpp"
#include "spgarch/volmodel.hpp"

namespace spgarch {

/// One of the four simulation designs: r_t = sigma_t eps_t, sigma^2_t = 0.1 + g(eps_{t-1}) sigma^2_{t-1}.
struct DgpSpec {
  int id = 2;
  double nu = 8.0;
  double omega = 0.1;
  double mu = 0.0;
  /// Exact E[g(eps)] under the innovation law.
  double persistence = 0.95;
  std::function<double(double)> g;
};

/// Throws ContractViolation unless 1 <= id <= 4.
DgpSpec dgp_spec(int id);

/// Spline form of g for DGPs 1, 2 and 4; DGP 3 (Beta-t) has none.
std::optional<SplineSpec> dgp_spline(int id);

/// Returns and the latent sigma_t path, started at the unconditional variance.
SimulatedPath simulate_dgp(const DgpSpec& spec, std::size_t length, RandomStream& rng);

/// [(1/n) sum |est_t - truth_t|^p]^(1/p); throws ContractViolation on a length mismatch or p < 1.
double loss_in_sample(std::span<const double> est, std::span<const double> truth, double p);

/// Same formula across replications (one forecast per replication).
double loss_out_of_sample(std::span<const double> forecasts, std::span<const double> truths,
                          double p);

struct StudyConfig {
  std::size_t n_sim = 50;
  /// Simulated length; models are fitted to the first length - 1 observations.
  std::size_t length = 2000;
  std::vector<int> dgps{1, 2, 3, 4};
  /// Model names: spgarch, garch, gjr, nagarch, beta-t, oracle (true sigma path).
  std::vector<std::string> models{"spgarch", "garch", "gjr", "beta-t"};
  std::vector<double> loss_orders{1.0, 2.0};
  SamplerConfig sampler = desk_sampler();
  PriorConfig prior;
  std::uint64_t seed = 20240101;
  std::size_t threads = 1;
  /// Directory for the c-table cache; empty disables caching.
  std::filesystem::path table_dir;

  void validate() const;

  /// 1.1e5 iterations (1e4 burn-in); pilots of 1000 steps (250 burn-in) warm-started
  /// from the chain's current configuration.
  static SamplerConfig desk_sampler();
  /// Full-length cold-started pilots; 500 replications of length 4001 with 5.5e5 iterations (5e4 burn-in).
  static StudyConfig full_scale_preset();
};

struct StudyCell {
  int dgp = 0;
  std::string model;
  double p = 2.0;
  double in_sample_mean = 0.0;  ///< mean over kept replications of L_p^(In)
  double out_of_sample = 0.0;   ///< L_p^(Out) across kept replications
  std::size_t replications = 0;
};

struct StudyRawRow {
  int dgp = 0;
  std::size_t replication = 0;
  std::string model;
  std::vector<double> in_sample;  ///< one per loss order
  double forecast = 0.0;
  double truth = 0.0;
};

struct StudyReport {
  std::vector<double> loss_orders;
  std::vector<StudyCell> cells;
  std::vector<StudyRawRow> raw;
  std::size_t dropped = 0;
  std::vector<std::string> warnings;

  const StudyCell& cell(int dgp, const std::string& model, double p) const;
};

/// Called after each finished replication with (dgp, replication index).
using StudyProgress = std::function<void(int, std::size_t)>;

/**
 * Replication seeds: derive_seed(derive_seed(seed, dgp), rep). Within a
 * replication the simulation uses child 0 and model j uses child 1 + j.
 * A replication in which any model fails is dropped with a warning.
 */
StudyReport run_study(const StudyConfig& cfg, const StudyProgress& progress = {});

/// One line per (dgp, model, loss order): dgp,model,p,in_sample,out_of_sample,replications.
void write_study_csv(const StudyReport& report, const std::filesystem::path& path);
/// One line per (dgp, replication, model).
void write_study_raw_csv(const StudyReport& report, const std::filesystem::path& path);

}  // namespace spgarch
