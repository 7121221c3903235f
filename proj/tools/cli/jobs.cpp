#include "cli/jobs.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <memory>

#include "cli/ingest.hpp"
#include "spgarch/draw_file.hpp"
#include "spgarch/error.hpp"
#include "spgarch/spgarch_sampler.hpp"

#ifndef SPGARCH_VERSION
#define SPGARCH_VERSION "unknown"
#endif

namespace spgarch::cli {

namespace fs = std::filesystem;

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}
std::string g17(double v) { return fmt("%.17g", v); }
std::string f4(double v) { return fmt("%.4f", v); }

// Output file opened in binary mode so line endings match on every platform.
class TextFile {
 public:
  explicit TextFile(const fs::path& path) : out_(path, std::ios::binary) {
    if (!out_) throw ParseError("cannot write " + path.string());
  }
  template <class T>
  TextFile& operator<<(const T& v) {
    out_ << v;
    return *this;
  }

 private:
  std::ofstream out_;
};

class Manifest {
 public:
  Manifest(std::string command, const json& cfg) {
    doc_ = {{"tool", "spgarch"}, {"version", SPGARCH_VERSION}, {"command", std::move(command)},
            {"config", cfg}, {"inputs", json::object()}, {"artifacts", json::array()}};
  }
  void input(const std::string& role, const fs::path& path) {
    doc_["inputs"][role] = {{"path", path.string()}, {"fnv1a64", file_digest(path)}};
  }
  void artifact(const std::string& name) { doc_["artifacts"].push_back(name); }
  void note(const std::string& key, json value) { doc_["results"][key] = std::move(value); }
  void write(const fs::path& dir) const { TextFile(dir / "manifest.json") << doc_.dump(2) << "\n"; }

 private:
  json doc_;
};

fs::path output_dir(const json& cfg) {
  const fs::path dir = cfg.at("output").get<std::string>();
  if (dir.empty()) throw ParseError("config key 'output' must name a directory");
  fs::create_directories(dir);
  return dir;
}

fs::path required_path(const std::string& what, const fs::path& p) {
  if (p.empty()) throw ParseError("no " + what + " given");
  if (!fs::exists(p)) throw ParseError(what + " '" + p.string() + "' does not exist");
  return p;
}

std::unique_ptr<CTable> table_for(const json& cfg, const ModelDescriptor& model) {
  if (model.kind != ModelKind::SpGarch) return nullptr;
  return std::make_unique<CTable>(load_or_build_c_table(table_cache_dir(cfg), model.pool, grid_spec(cfg)));
}

struct Interval {
  double mean, lower, upper;
};

Interval column_interval(const PosteriorSample& s, std::size_t col) {
  std::vector<double> v(s.size());
  double mean = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    v[i] = s.row(i)[col];
    mean += v[i];
  }
  mean /= static_cast<double>(s.size());
  const double lo = empirical_quantile(v, 0.025);
  const double hi = empirical_quantile(v, 0.975);
  return {mean, lo, hi};
}

void write_volatility(const std::vector<double>& sigma, const fs::path& dir) {
  TextFile f(dir / "volatility.csv");
  f << "t,sigma\n";
  for (std::size_t t = 0; t < sigma.size(); ++t) f << t + 1 << "," << g17(sigma[t]) << "\n";
}

void write_band(const FunctionBand& band, const fs::path& dir) {
  TextFile f(dir / "band.csv");
  f << "eps,mean,lower,upper\n";
  for (std::size_t j = 0; j < band.grid.size(); ++j) {
    f << fmt("%.10g", band.grid[j]) << "," << g17(band.mean[j]) << "," << g17(band.lower[j]) << ","
      << g17(band.upper[j]) << "\n";
  }
}

void write_knot_counts(const PosteriorSample& s, const fs::path& dir) {
  const auto probs = knot_count_probabilities(s);
  TextFile f(dir / "knot_counts.csv");
  f << "knots,probability\n";
  for (std::size_t k = 0; k <= s.model().num_knots(); ++k) {
    const auto it = probs.find(k);
    f << k << "," << f4(it == probs.end() ? 0.0 : it->second) << "\n";
  }
}

void write_model_trace(const PosteriorSample& s, const fs::path& dir) {
  TextFile f(dir / "model_trace.csv");
  f << "iteration,indicator,decimal\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    f << s.iteration(i) << "," << s.indicator(i).bitstring() << "," << indicator_to_decimal(s.indicator(i))
      << "\n";
  }
}

void write_summary(const PosteriorSample& s, const ReturnSeries& r, const CTable* table,
                   const std::vector<double>& sigma, const fs::path& dir) {
  const Interval nu = column_interval(s, 0);
  const Interval mu = column_interval(s, 1);
  const UnconditionalMoments um = unconditional_moments(s, table);
  TextFile f(dir / "summary.txt");
  f << "model " << to_string(s.model().kind) << "\n";
  f << "observations " << r.size() << "\n";
  f << "draws " << s.size() << "\n";
  f << "\n";
  f << "parameter mean lower95 upper95\n";
  f << "nu " << f4(nu.mean) << " " << f4(nu.lower) << " " << f4(nu.upper) << "\n";
  f << "mu " << f4(mu.mean) << " " << f4(mu.lower) << " " << f4(mu.upper) << "\n";
  f << "\n";
  f << "unconditional_volatility " << f4(um.sigma) << "\n";
  f << "unconditional_mean " << f4(um.mu) << "\n";
  f << "one_step_forecast " << f4(sigma.back()) << "\n";
  if (s.model().kind == ModelKind::SpGarch) {
    const auto visits = s.model_visit_counts();
    const auto top = std::max_element(visits.begin(), visits.end(),
                                      [](const auto& a, const auto& b) { return a.second < b.second; });
    f << "most_visited_indicator " << top->first.bitstring() << " "
      << f4(static_cast<double>(top->second) / static_cast<double>(s.size())) << "\n";
    f << "distinct_models " << visits.size() << "\n";
  }
}

void fit(const json& cfg, std::ostream& log) {
  const IngestSpec spec = ingest_spec(cfg);
  required_path("data file", spec.path);
  const ReturnSeries r = ingest(spec);
  const fs::path out = output_dir(cfg);
  Manifest manifest("fit", cfg);
  manifest.input("data", spec.path);

  const auto seed = cfg.at("seed").get<std::uint64_t>();
  const SamplerConfig sc = sampler_config(cfg.at("sampler"), seed);
  const ModelKind kind = model_kind_from_string(cfg.at("model").get<std::string>());
  ModelDescriptor model{kind, {}};
  if (kind == ModelKind::SpGarch) model.pool = knot_pool(cfg);
  const auto table = table_for(cfg, model);

  log << "fitting " << to_string(kind) << " to " << r.size() << " returns (" << sc.n_iter
      << " iterations)\n";
  DrawFileWriter writer(out / "draws.tsv", model);
  const PosteriorSample s = kind == ModelKind::SpGarch
                                ? run_spgarch_sampler(r, sc, prior_config(cfg), *table, writer.sink())
                                : run_parametric_sampler(kind, r, sc, writer.sink());
  writer.close();
  manifest.artifact("draws.tsv");
  log << "acceptance rate " << f4(s.acceptance_rate) << ", " << s.cache_entries << " configurations piloted\n";

  const std::vector<double> sigma = volatility_estimates(s, r, table.get());
  write_summary(s, r, table.get(), sigma, out);
  write_volatility(sigma, out);
  const json& b = cfg.at("band");
  write_band(coefficient_band(s, make_grid(b.at("lo"), b.at("hi"), b.at("step")), b.at("level")), out);
  write_dic_report(dic_averaged(s, r, table.get()), out);
  for (const char* a : {"summary.txt", "volatility.csv", "band.csv", "dic.csv", "dic.txt"}) manifest.artifact(a);
  if (kind == ModelKind::SpGarch) {
    write_knot_counts(s, out);
    write_model_trace(s, out);
    manifest.artifact("knot_counts.csv");
    manifest.artifact("model_trace.csv");
  }
  manifest.note("acceptance_rate", s.acceptance_rate);
  manifest.note("configurations_piloted", s.cache_entries);
  manifest.write(out);
}

void simulate(const json& cfg, std::ostream& log) {
  const json& sim = cfg.at("simulate");
  const int id = sim.at("dgp").get<int>();
  const auto length = sim.at("length").get<std::size_t>();
  if (length < 2) throw ParseError("simulate.length must be at least 2");
  const DgpSpec spec = dgp_spec(id);
  RandomStream rng(cfg.at("seed").get<std::uint64_t>());
  const SimulatedPath path = simulate_dgp(spec, length, rng);
  const fs::path out = output_dir(cfg);
  {
    TextFile f(out / "simulated.csv");
    f << "t,return,sigma\n";
    for (std::size_t t = 0; t < length; ++t) {
      f << t + 1 << "," << g17(path.returns[t]) << "," << g17(path.sigma[t]) << "\n";
    }
  }
  log << "simulated " << length << " returns from DGP " << id << "\n";
  Manifest manifest("simulate", cfg);
  manifest.artifact("simulated.csv");
  manifest.write(out);
}

// Draw file + the data it was fitted to.
struct Refit {
  PosteriorSample sample;
  ReturnSeries r;
  std::unique_ptr<CTable> table;
};

Refit load_refit(const json& cfg, Manifest& manifest) {
  const fs::path draws = required_path("draw file", cfg.at("draws").get<std::string>());
  const IngestSpec spec = ingest_spec(cfg);
  required_path("data file", spec.path);
  manifest.input("draws", draws);
  manifest.input("data", spec.path);
  PosteriorSample s = read_draw_file(draws);
  if (s.empty()) throw ParseError("draw file " + draws.string() + " holds no draws");
  ReturnSeries r = ingest(spec);
  auto table = table_for(cfg, s.model());
  return {std::move(s), std::move(r), std::move(table)};
}

void forecast(const json& cfg, std::ostream& log) {
  Manifest manifest("forecast", cfg);
  const Refit fit = load_refit(cfg, manifest);
  const fs::path out = output_dir(cfg);
  const std::vector<double> sigma = volatility_estimates(fit.sample, fit.r, fit.table.get());
  write_volatility(sigma, out);
  TextFile(out / "forecast.txt") << "one_step_forecast " << g17(sigma.back()) << "\n";
  log << "one-step volatility forecast " << f4(sigma.back()) << "\n";
  manifest.artifact("volatility.csv");
  manifest.artifact("forecast.txt");
  manifest.write(out);
}

void dic(const json& cfg, std::ostream& log) {
  Manifest manifest("dic", cfg);
  const Refit fit = load_refit(cfg, manifest);
  const fs::path out = output_dir(cfg);
  const DicReport rep = dic_averaged(fit.sample, fit.r, fit.table.get());
  write_dic_report(rep, out);
  log << "DIC_ave " << f4(rep.dic_ave) << " (pD " << f4(rep.pd_ave) << ")\n";
  manifest.artifact("dic.csv");
  manifest.artifact("dic.txt");
  manifest.write(out);
}

void study(const json& cfg, std::ostream& log) {
  const StudyConfig sc = study_config(cfg);
  const fs::path out = output_dir(cfg);
  const std::size_t total = sc.n_sim * sc.dgps.size();
  std::size_t done = 0;
  const StudyReport rep = run_study(sc, [&](int dgp, std::size_t r) {
    log << "[" << ++done << "/" << total << "] dgp " << dgp << " replication " << r << "\n" << std::flush;
  });
  write_study_csv(rep, out / "study.csv");
  write_study_raw_csv(rep, out / "study_raw.csv");
  {
    TextFile f(out / "study.txt");
    f << "dropped " << rep.dropped << "\n";
    for (const auto& w : rep.warnings) f << "warning " << w << "\n";
  }
  Manifest manifest("study", cfg);
  for (const char* a : {"study.csv", "study_raw.csv", "study.txt"}) manifest.artifact(a);
  manifest.write(out);
}

}  // namespace

void write_dic_report(const DicReport& report, const fs::path& dir) {
  {
    TextFile f(dir / "dic.csv");
    f << "indicator,decimal,visits,probability,dbar,d_at_mean,pd,dic,status\n";
    for (const auto& e : report.per_model) {
      f << e.m.bitstring() << "," << indicator_to_decimal(e.m) << "," << e.visits << ","
        << g17(e.probability) << "," << g17(e.dbar) << ",";
      if (e.mean_in_theta) {
        f << g17(e.d_at_mean) << "," << g17(e.pd) << "," << g17(e.dic);
      } else {
        f << ",,";
      }
      f << "," << (!e.mean_in_theta ? "excluded" : e.low_count ? "low-count" : "ok") << "\n";
    }
  }
  TextFile f(dir / "dic.txt");
  f << "dic_ave " << g17(report.dic_ave) << "\n";
  f << "dbar_ave " << g17(report.dbar_ave) << "\n";
  f << "pd_ave " << g17(report.pd_ave) << "\n";
  f << "dic_ave_direct " << g17(report.dic_ave_direct) << "\n";
  f << "dbar_ave_direct " << g17(report.dbar_ave_direct) << "\n";
  f << "pd_ave_direct " << g17(report.pd_ave_direct) << "\n";
  f << "models " << report.per_model.size() << "\n";
  f << "excluded_draws " << report.excluded_draws << "\n";
  for (const auto& w : report.warnings) f << "warning " << w << "\n";
}

void run_job(const std::string& command, const json& cfg, std::ostream& log) {
  if (command == "fit") return fit(cfg, log);
  if (command == "simulate") return simulate(cfg, log);
  if (command == "forecast") return forecast(cfg, log);
  if (command == "dic") return dic(cfg, log);
  if (command == "study") return study(cfg, log);
  throw ParseError("unknown command '" + command + "'");
}

}  // namespace spgarch::cli
