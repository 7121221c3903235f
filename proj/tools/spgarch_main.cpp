#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli/config.hpp"
#include "cli/jobs.hpp"
#include "spgarch/error.hpp"

namespace {

using spgarch::cli::json;

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

// Flags shared by every subcommand; later layers win: defaults, --config, --set, flags.
struct CommonFlags {
  std::string config;
  std::vector<std::string> overrides;
  std::string output;
  long long seed = -1;
};

void add_common(CLI::App* sub, CommonFlags& f) {
  sub->add_option("-c,--config", f.config, "JSON config file or a previous run's manifest.json");
  sub->add_option("--set", f.overrides, "Override a config key, e.g. --set sampler.n_iter=20000")
      ->take_all();
  sub->add_option("-o,--out", f.output, "Output directory");
  sub->add_option("--seed", f.seed, "Master random seed")->check(CLI::NonNegativeNumber);
}

json resolve(const CommonFlags& f, const json& flag_patch) {
  json cfg = spgarch::cli::default_config();
  if (!f.config.empty()) spgarch::cli::merge_config(cfg, spgarch::cli::load_config_file(f.config));
  for (const auto& o : f.overrides) spgarch::cli::apply_override(cfg, o);
  json patch = flag_patch;
  if (!f.output.empty()) patch["output"] = f.output;
  if (f.seed >= 0) patch["seed"] = f.seed;
  if (!patch.empty()) spgarch::cli::merge_config(cfg, patch);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semiparametric GARCH estimation with spline news-impact curves"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SPGARCH_VERSION);

  CommonFlags common;
  json patch = json::object();

  std::string data, model, kind, column, delimiter, draws;
  long long n_iter = -1, n_burn = -1;
  int dgp = 0;
  long long length = -1, n_sim = -1, threads = -1;
  std::string preset;

  auto data_flags = [&](CLI::App* sub) {
    sub->add_option("-d,--data", data, "Delimited input file with a header row");
    sub->add_option("--kind", kind, "Input column holds 'returns' or 'prices'")
        ->check(CLI::IsMember({"returns", "prices"}));
    sub->add_option("--column", column, "Column header to read (default: last column)");
    sub->add_option("--delimiter", delimiter, "Field delimiter (default ',')");
  };

  CLI::App* fit = app.add_subcommand("fit", "Fit a model by MCMC and write draws and reports");
  add_common(fit, common);
  data_flags(fit);
  fit->add_option("-m,--model", model, "spgarch, garch, gjr, nagarch or beta-t");
  fit->add_option("--n-iter", n_iter, "Sampler iterations")->check(CLI::PositiveNumber);
  fit->add_option("--n-burn", n_burn, "Sampler burn-in")->check(CLI::NonNegativeNumber);

  CLI::App* sim = app.add_subcommand("simulate", "Simulate returns from one of the four study DGPs");
  add_common(sim, common);
  sim->add_option("--dgp", dgp, "DGP number 1-4")->check(CLI::Range(1, 4));
  sim->add_option("-T,--T,--length", length, "Number of returns")->check(CLI::PositiveNumber);

  CLI::App* fc = app.add_subcommand("forecast", "Posterior volatility path and one-step forecast from a draw file");
  add_common(fc, common);
  data_flags(fc);
  fc->add_option("--draws", draws, "Draw file written by fit");

  CLI::App* dic = app.add_subcommand("dic", "Averaged DIC from a draw file");
  add_common(dic, common);
  data_flags(dic);
  dic->add_option("--draws", draws, "Draw file written by fit");

  CLI::App* study = app.add_subcommand("study", "Run the simulation study");
  add_common(study, common);
  study->add_option("--n-sim", n_sim, "Replications per DGP")->check(CLI::PositiveNumber);
  study->add_option("--length", length, "Simulated series length")->check(CLI::PositiveNumber);
  study->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  study->add_option("--preset", preset, "'full' selects 500 replications of length 4001 with 5.5e5 iterations")
      ->check(CLI::IsMember({"desk", "full"}));

  CLI::App* print = app.add_subcommand("print-config", "Print the resolved configuration");
  add_common(print, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (!data.empty()) patch["data"]["path"] = data;
    if (!kind.empty()) patch["data"]["kind"] = kind;
    if (!column.empty()) patch["data"]["column"] = column;
    if (!delimiter.empty()) patch["data"]["delimiter"] = delimiter;
    if (!model.empty()) patch["model"] = model;
    if (!draws.empty()) patch["draws"] = draws;
    if (n_iter >= 0) patch["sampler"]["n_iter"] = n_iter;
    if (n_burn >= 0) patch["sampler"]["n_burn"] = n_burn;
    if (dgp > 0) patch["simulate"]["dgp"] = dgp;
    if (length >= 0) patch[sim->parsed() ? "simulate" : "study"]["length"] = length;
    if (n_sim >= 0) patch["study"]["n_sim"] = n_sim;
    if (threads >= 0) patch["study"]["threads"] = threads;
    if (preset == "full") {
      const auto full = spgarch::StudyConfig::full_scale_preset();
      patch["study"]["n_sim"] = full.n_sim;
      patch["study"]["length"] = full.length;
      patch["study"]["sampler"]["n_iter"] = full.sampler.n_iter;
      patch["study"]["sampler"]["n_burn"] = full.sampler.n_burn;
      patch["study"]["sampler"]["pilot"] = {{"n_iter", full.sampler.pilot.n_iter},
                                            {"n_burn", full.sampler.pilot.n_burn},
                                            {"warm_start", full.sampler.pilot.warm_start}};
    }

    const json cfg = resolve(common, patch);
    CLI::App* chosen = app.get_subcommands().front();
    if (chosen == print) {
      std::cout << cfg.dump(2) << "\n";
      return 0;
    }
    spgarch::cli::run_job(chosen->get_name(), cfg, std::cerr);
    return 0;
  } catch (const spgarch::ParseError& e) {
    std::cerr << "spgarch: " << e.what() << "\n";
    return kExitConfig;
  } catch (const spgarch::ContractViolation& e) {
    std::cerr << "spgarch: invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const spgarch::cli::json::exception& e) {
    std::cerr << "spgarch: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const spgarch::NumericError& e) {
    std::cerr << "spgarch: numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const spgarch::DomainError& e) {
    std::cerr << "spgarch: numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "spgarch: " << e.what() << "\n";
    return 1;
  }
}
