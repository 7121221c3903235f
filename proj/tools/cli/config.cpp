#include "cli/config.hpp"

#include <fstream>
#include <sstream>

#include "spgarch/error.hpp"

namespace spgarch::cli {

namespace {

json sampler_json(const SamplerConfig& s) {
  return {
      {"n_iter", s.n_iter},
      {"n_burn", s.n_burn},
      {"flip_prob", s.flip_prob},
      {"coherence_check_interval", s.coherence_check_interval},
      {"pilot",
       {{"n_iter", s.pilot.n_iter},
        {"n_burn", s.pilot.n_burn},
        {"target_accept", s.pilot.target_accept},
        {"adapt_interval", s.pilot.adapt_interval},
        {"scale_gain", s.pilot.scale_gain},
        {"search_iter", s.pilot.search_iter},
        {"warm_start", s.pilot.warm_start}}},
      {"mixture", {{"weights", s.mixture.weights}, {"scales", s.mixture.scales}}},
  };
}

// Typed read of cfg[path...] with the dotted path in the error message.
template <class T>
T get(const json& node, const std::string& key, const std::string& where) {
  const std::string path = where.empty() ? key : where + "." + key;
  if (!node.contains(key)) throw ParseError("config key '" + path + "' is missing");
  try {
    return node.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError("config key '" + path + "' has the wrong type: " + e.what());
  }
}

const json& section(const json& node, const std::string& key, const std::string& where = "") {
  const std::string path = where.empty() ? key : where + "." + key;
  if (!node.contains(key) || !node.at(key).is_object()) {
    throw ParseError("config section '" + path + "' is missing");
  }
  return node.at(key);
}

}  // namespace

json default_config() {
  const StudyConfig study;
  const CGridSpec grid;
  const PriorConfig prior;
  json study_models = study.models;
  return {
      {"seed", 1},
      {"model", "spgarch"},
      {"output", "spgarch-out"},
      {"data",
       {{"path", ""}, {"kind", "returns"}, {"column", ""}, {"delimiter", ","}, {"scale", nullptr}}},
      {"knots", {{"nu", 8.0}, {"count", 9}}},
      {"ctable",
       {{"points", grid.points}, {"nu_min", grid.nu_min}, {"nu_max", grid.nu_max}, {"cache_dir", ""}}},
      {"prior", {{"sigma2_beta", prior.sigma2_beta}, {"inclusion_prob", json::array()}}},
      {"sampler", sampler_json(SamplerConfig{})},
      {"band", {{"lo", -4.0}, {"hi", 4.0}, {"step", 0.01}, {"level", 0.95}}},
      {"draws", ""},
      {"simulate", {{"dgp", 2}, {"length", 1000}}},
      {"study",
       {{"n_sim", study.n_sim},
        {"length", study.length},
        {"dgps", study.dgps},
        {"models", study_models},
        {"loss_orders", study.loss_orders},
        {"threads", study.threads},
        {"sampler", sampler_json(StudyConfig::desk_sampler())}}},
  };
}

void merge_config(json& base, const json& patch, const std::string& prefix) {
  if (!patch.is_object()) throw ParseError("config must be a JSON object");
  for (const auto& [key, value] : patch.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (!base.contains(key)) throw ParseError("unknown config key '" + path + "'");
    json& target = base[key];
    if (target.is_object()) {
      if (!value.is_object()) throw ParseError("config key '" + path + "' must be an object");
      merge_config(target, value, path);
    } else {
      target = value;
    }
  }
}

void apply_override(json& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ParseError("override '" + assignment + "' is not of the form key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json patch = value;
  std::string rest = key;
  std::vector<std::string> parts;
  for (std::size_t pos; (pos = rest.find('.')) != std::string::npos; rest = rest.substr(pos + 1)) {
    parts.push_back(rest.substr(0, pos));
  }
  parts.push_back(rest);
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) patch = json{{*it, patch}};
  merge_config(cfg, patch);
}

json load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("config file " + path.string() + ": " + e.what());
  }
  if (j.is_object() && j.contains("tool") && j.contains("config")) return j.at("config");
  return j;
}

IngestSpec ingest_spec(const json& cfg) {
  const json& d = section(cfg, "data");
  IngestSpec s;
  s.path = get<std::string>(d, "path", "data");
  s.kind = get<std::string>(d, "kind", "data");
  if (s.kind != "returns" && s.kind != "prices") {
    throw ParseError("data.kind must be 'returns' or 'prices', got '" + s.kind + "'");
  }
  s.column = get<std::string>(d, "column", "data");
  const auto delim = get<std::string>(d, "delimiter", "data");
  if (delim == "\\t" || delim == "tab") {
    s.delimiter = '\t';
  } else if (delim.size() == 1) {
    s.delimiter = delim[0];
  } else {
    throw ParseError("data.delimiter must be a single character");
  }
  if (!d.at("scale").is_null()) s.scale = get<double>(d, "scale", "data");
  return s;
}

SamplerConfig sampler_config(const json& sec, std::uint64_t seed) {
  SamplerConfig s;
  s.n_iter = get<std::size_t>(sec, "n_iter", "sampler");
  s.n_burn = get<std::size_t>(sec, "n_burn", "sampler");
  s.flip_prob = get<double>(sec, "flip_prob", "sampler");
  s.coherence_check_interval = get<std::size_t>(sec, "coherence_check_interval", "sampler");
  const json& p = section(sec, "pilot", "sampler");
  s.pilot.n_iter = get<std::size_t>(p, "n_iter", "sampler.pilot");
  s.pilot.n_burn = get<std::size_t>(p, "n_burn", "sampler.pilot");
  s.pilot.target_accept = get<double>(p, "target_accept", "sampler.pilot");
  s.pilot.adapt_interval = get<std::size_t>(p, "adapt_interval", "sampler.pilot");
  s.pilot.scale_gain = get<double>(p, "scale_gain", "sampler.pilot");
  s.pilot.search_iter = get<std::size_t>(p, "search_iter", "sampler.pilot");
  s.pilot.warm_start = get<bool>(p, "warm_start", "sampler.pilot");
  const json& m = section(sec, "mixture", "sampler");
  s.mixture.weights = get<std::vector<double>>(m, "weights", "sampler.mixture");
  s.mixture.scales = get<std::vector<double>>(m, "scales", "sampler.mixture");
  s.seed = seed;
  try {
    s.validate();
  } catch (const ContractViolation& e) {
    throw ParseError(std::string("invalid sampler settings: ") + e.what());
  }
  return s;
}

PriorConfig prior_config(const json& cfg) {
  const json& p = section(cfg, "prior");
  PriorConfig prior;
  prior.sigma2_beta = get<double>(p, "sigma2_beta", "prior");
  prior.inclusion_prob = get<std::vector<double>>(p, "inclusion_prob", "prior");
  try {
    prior.validate(knot_pool(cfg).size());
  } catch (const ContractViolation& e) {
    throw ParseError(std::string("invalid prior settings: ") + e.what());
  }
  return prior;
}

KnotPool knot_pool(const json& cfg) {
  const json& k = section(cfg, "knots");
  const double nu = get<double>(k, "nu", "knots");
  const auto count = get<std::size_t>(k, "count", "knots");
  if (!(nu > 2.0) || count > Indicator::kMaxKnots) {
    throw ParseError("knots.nu must exceed 2 and knots.count must not exceed 32");
  }
  return quantile_knot_pool(nu, count);
}

CGridSpec grid_spec(const json& cfg) {
  const json& c = section(cfg, "ctable");
  CGridSpec g;
  g.points = get<std::size_t>(c, "points", "ctable");
  g.nu_min = get<double>(c, "nu_min", "ctable");
  g.nu_max = get<double>(c, "nu_max", "ctable");
  if (g.points < 2 || !(g.nu_min > 2.0) || !(g.nu_max > g.nu_min)) {
    throw ParseError("ctable needs points >= 2 and 2 < nu_min < nu_max");
  }
  return g;
}

std::filesystem::path table_cache_dir(const json& cfg) {
  return get<std::string>(section(cfg, "ctable"), "cache_dir", "ctable");
}

StudyConfig study_config(const json& cfg) {
  const json& s = section(cfg, "study");
  StudyConfig c;
  c.n_sim = get<std::size_t>(s, "n_sim", "study");
  c.length = get<std::size_t>(s, "length", "study");
  c.dgps = get<std::vector<int>>(s, "dgps", "study");
  c.models = get<std::vector<std::string>>(s, "models", "study");
  c.loss_orders = get<std::vector<double>>(s, "loss_orders", "study");
  c.threads = get<std::size_t>(s, "threads", "study");
  c.seed = get<std::uint64_t>(cfg, "seed", "");
  c.sampler = sampler_config(section(s, "sampler", "study"), c.seed);
  c.prior = prior_config(cfg);
  c.table_dir = table_cache_dir(cfg);
  try {
    c.validate();
  } catch (const ContractViolation& e) {
    throw ParseError(std::string("invalid study settings: ") + e.what());
  }
  return c;
}

}  // namespace spgarch::cli
