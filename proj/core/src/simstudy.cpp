#include "spgarch/simstudy.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <fstream>
#include <mutex>
#include <optional>
#include <thread>

#include "spgarch/error.hpp"
#include "spgarch/inference.hpp"
#include "spgarch/model.hpp"
#include "spgarch/spgarch_sampler.hpp"

namespace spgarch {

std::optional<SplineSpec> dgp_spline(int id) {
  switch (id) {
    case 1: {
      SplineSpec s{KnotPool{{-0.77, -0.473}}};
      s.b0 = 1.1;
      s.activate(0, -0.48);
      s.activate(1, 0.58);
      return s;
    }
    case 2: return parametric_to_spline(ParametricFamily::garch(0.85, 0.1));
    case 3: return std::nullopt;
    case 4: return parametric_to_spline(ParametricFamily::gjr(0.8, 0.1, 0.15));
    default: throw ContractViolation("DGP id must be 1..4, got " + std::to_string(id));
  }
}

DgpSpec dgp_spec(int id) {
  DgpSpec d;
  d.id = id;
  d.nu = id <= 2 ? 8.0 : 5.0;
  if (id == 3) {
    const ParametricFamily f = ParametricFamily::beta_t(0.82, 0.15, 0.0, 5.0);
    d.persistence = parametric_persistence(f);
    d.g = [f](double e) { return eval_parametric_g(f, e); };
    return d;
  }
  const SplineSpec s = *dgp_spline(id);
  double p = s.b0 + s.b2;
  for (std::size_t i = 0; i < s.pool.size(); ++i) {
    if (s.indicator[i]) p += s.beta[i] * compute_c(s.pool[i], d.nu);
  }
  d.persistence = p;
  d.g = [s](double e) { return eval_g(s, e); };
  return d;
}

SimulatedPath simulate_dgp(const DgpSpec& spec, std::size_t length, RandomStream& rng) {
  if (length < 2) throw ContractViolation("simulated series needs at least 2 observations");
  return simulate_recursion(spec.g, spec.omega, spec.mu, spec.persistence, spec.nu, length, rng);
}

namespace {

double lp_mean(std::span<const double> a, std::span<const double> b, double p) {
  if (a.size() != b.size()) {
    throw ContractViolation("loss inputs differ in length (" + std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()) + ")");
  }
  if (a.empty()) throw ContractViolation("loss of empty sequences");
  if (!(p >= 1.0)) throw ContractViolation("loss order must be >= 1");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::pow(std::abs(a[i] - b[i]), p);
  return std::pow(s / static_cast<double>(a.size()), 1.0 / p);
}

}  // namespace

double loss_in_sample(std::span<const double> est, std::span<const double> truth, double p) {
  return lp_mean(est, truth, p);
}

double loss_out_of_sample(std::span<const double> forecasts, std::span<const double> truths,
                          double p) {
  return lp_mean(forecasts, truths, p);
}

SamplerConfig StudyConfig::desk_sampler() {
  SamplerConfig s;
  s.n_iter = 110000;
  s.n_burn = 10000;
  s.pilot.n_iter = 1000;
  s.pilot.n_burn = 250;
  s.pilot.warm_start = true;
  return s;
}

StudyConfig StudyConfig::full_scale_preset() {
  StudyConfig c;
  c.n_sim = 500;
  c.length = 4001;
  c.sampler.n_iter = 550000;
  c.sampler.n_burn = 50000;
  c.sampler.pilot = PilotConfig{};
  return c;
}

void StudyConfig::validate() const {
  if (n_sim < 1) throw ContractViolation("n_sim must be at least 1");
  if (length < 3) throw ContractViolation("study series length must be at least 3");
  if (dgps.empty() || models.empty() || loss_orders.empty()) {
    throw ContractViolation("study needs at least one DGP, model and loss order");
  }
  for (int d : dgps) {
    if (d < 1 || d > 4) throw ContractViolation("DGP id must be 1..4");
  }
  for (const auto& m : models) {
    if (m != "oracle") (void)model_kind_from_string(m);
  }
  for (double p : loss_orders) {
    if (!(p >= 1.0)) throw ContractViolation("loss orders must be >= 1");
  }
  sampler.validate();
  prior.validate(9);
}

const StudyCell& StudyReport::cell(int dgp, const std::string& model, double p) const {
  for (const auto& c : cells) {
    if (c.dgp == dgp && c.model == model && c.p == p) return c;
  }
  throw ContractViolation("no study cell for dgp " + std::to_string(dgp) + ", model " + model);
}

namespace {

struct ReplicationResult {
  bool ok = false;
  std::string error;
  /// Per model: estimated sigma_1..sigma_{T-1} losses per order, forecast of sigma_T.
  std::vector<std::vector<double>> in_sample;
  std::vector<double> forecast;
  double truth = 0.0;
};

ReplicationResult run_replication(const StudyConfig& cfg, const DgpSpec& dgp, std::size_t rep,
                                  const CTable& table) {
  ReplicationResult out;
  const std::uint64_t rep_seed = derive_seed(derive_seed(cfg.seed, static_cast<std::uint64_t>(dgp.id)), rep);
  RandomStream sim_rng(derive_seed(rep_seed, 0));
  const SimulatedPath path = simulate_dgp(dgp, cfg.length, sim_rng);
  const std::size_t n_fit = cfg.length - 1;
  const ReturnSeries fit(std::vector<double>(path.returns.begin(), path.returns.begin() + static_cast<std::ptrdiff_t>(n_fit)));
  const std::span<const double> truth_in(path.sigma.data(), n_fit);
  out.truth = path.sigma[n_fit];

  try {
    for (std::size_t j = 0; j < cfg.models.size(); ++j) {
      const std::string& name = cfg.models[j];
      std::vector<double> est;
      if (name == "oracle") {
        est = path.sigma;
      } else {
        SamplerConfig sc = cfg.sampler;
        sc.seed = derive_seed(rep_seed, 1 + j);
        const ModelKind kind = model_kind_from_string(name);
        const PosteriorSample sample = kind == ModelKind::SpGarch
                                           ? run_spgarch_sampler(fit, sc, cfg.prior, table)
                                           : run_parametric_sampler(kind, fit, sc);
        est = volatility_estimates(sample, fit, kind == ModelKind::SpGarch ? &table : nullptr);
      }
      std::vector<double> losses;
      for (double p : cfg.loss_orders) {
        losses.push_back(loss_in_sample(std::span<const double>(est.data(), n_fit), truth_in, p));
      }
      out.in_sample.push_back(std::move(losses));
      out.forecast.push_back(est[n_fit]);
    }
    out.ok = true;
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace

StudyReport run_study(const StudyConfig& cfg, const StudyProgress& progress) {
  cfg.validate();
  const CTable table = load_or_build_c_table(cfg.table_dir, quantile_knot_pool());

  struct Task {
    int dgp;
    std::size_t rep;
  };
  std::vector<DgpSpec> specs;
  std::vector<Task> tasks;
  for (int d : cfg.dgps) {
    specs.push_back(dgp_spec(d));
    for (std::size_t rep = 0; rep < cfg.n_sim; ++rep) tasks.push_back({d, rep});
  }
  auto spec_of = [&](int d) -> const DgpSpec& {
    for (const auto& s : specs) {
      if (s.id == d) return s;
    }
    throw ContractViolation("unknown DGP");
  };

  std::vector<ReplicationResult> results(tasks.size());
  std::atomic<std::size_t> next{0};
  std::mutex progress_mutex;
  auto worker = [&]() {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= tasks.size()) return;
      results[k] = run_replication(cfg, spec_of(tasks[k].dgp), tasks[k].rep, table);
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(tasks[k].dgp, tasks[k].rep);
      }
    }
  };
  const std::size_t n_threads = std::max<std::size_t>(1, std::min(cfg.threads, tasks.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  StudyReport rep;
  rep.loss_orders = cfg.loss_orders;
  for (int d : cfg.dgps) {
    std::vector<std::size_t> kept;
    for (std::size_t k = 0; k < tasks.size(); ++k) {
      if (tasks[k].dgp != d) continue;
      if (results[k].ok) {
        kept.push_back(k);
      } else {
        ++rep.dropped;
        rep.warnings.push_back("dgp " + std::to_string(d) + " replication " +
                               std::to_string(tasks[k].rep) + " dropped: " + results[k].error);
      }
    }
    for (std::size_t j = 0; j < cfg.models.size(); ++j) {
      for (std::size_t q = 0; q < cfg.loss_orders.size(); ++q) {
        StudyCell c;
        c.dgp = d;
        c.model = cfg.models[j];
        c.p = cfg.loss_orders[q];
        c.replications = kept.size();
        std::vector<double> fc, tr;
        for (std::size_t k : kept) {
          c.in_sample_mean += results[k].in_sample[j][q];
          fc.push_back(results[k].forecast[j]);
          tr.push_back(results[k].truth);
        }
        if (!kept.empty()) {
          c.in_sample_mean /= static_cast<double>(kept.size());
          c.out_of_sample = loss_out_of_sample(fc, tr, c.p);
        } else {
          c.in_sample_mean = c.out_of_sample = std::numeric_limits<double>::quiet_NaN();
        }
        rep.cells.push_back(c);
      }
    }
    for (std::size_t k : kept) {
      for (std::size_t j = 0; j < cfg.models.size(); ++j) {
        rep.raw.push_back({d, tasks[k].rep, cfg.models[j], results[k].in_sample[j],
                           results[k].forecast[j], results[k].truth});
      }
    }
  }
  return rep;
}

namespace {

std::FILE* open_out(const std::filesystem::path& path) {
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (f == nullptr) throw std::runtime_error("cannot write " + path.string());
  return f;
}

}  // namespace

void write_study_csv(const StudyReport& report, const std::filesystem::path& path) {
  std::FILE* f = open_out(path);
  std::fprintf(f, "dgp,model,p,in_sample,out_of_sample,replications\n");
  for (const auto& c : report.cells) {
    std::fprintf(f, "%d,%s,%g,%.6f,%.6f,%zu\n", c.dgp, c.model.c_str(), c.p, c.in_sample_mean,
                 c.out_of_sample, c.replications);
  }
  std::fclose(f);
}

void write_study_raw_csv(const StudyReport& report, const std::filesystem::path& path) {
  std::FILE* f = open_out(path);
  std::fprintf(f, "dgp,replication,model");
  for (double p : report.loss_orders) std::fprintf(f, ",in_sample_L%g", p);
  std::fprintf(f, ",forecast,truth\n");
  for (const auto& r : report.raw) {
    std::fprintf(f, "%d,%zu,%s", r.dgp, r.replication, r.model.c_str());
    for (double v : r.in_sample) std::fprintf(f, ",%.17g", v);
    std::fprintf(f, ",%.17g,%.17g\n", r.forecast, r.truth);
  }
  std::fclose(f);
}

}  // namespace spgarch
