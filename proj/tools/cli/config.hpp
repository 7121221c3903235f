#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "spgarch/bayes.hpp"
#include "spgarch/sampler.hpp"
#include "spgarch/simstudy.hpp"
#include "spgarch/spline.hpp"

namespace spgarch::cli {

using nlohmann::json;

/// Every tunable with its default; `print-config` emits this after overrides.
json default_config();

/**
 * Recursively copies `patch` over `base`. Keys missing from `base` raise
 * ParseError naming the full key path; objects merge, everything else replaces.
 */
void merge_config(json& base, const json& patch, const std::string& prefix = "");

/// Applies "a.b.c=value"; value is read as JSON when it parses, else as a string.
void apply_override(json& cfg, const std::string& assignment);

/// Reads a config file. A run manifest is accepted and contributes its "config" member.
json load_config_file(const std::filesystem::path& path);

/// Data ingestion settings (`data` section).
struct IngestSpec {
  std::filesystem::path path;
  /// "returns" or "prices".
  std::string kind = "returns";
  /// Column header to read; empty selects the last column.
  std::string column;
  char delimiter = ',';
  /// Multiplier on returns or log price differences; unset means 1 for returns, 100 for prices.
  std::optional<double> scale;
};

IngestSpec ingest_spec(const json& cfg);
SamplerConfig sampler_config(const json& section, std::uint64_t seed);
PriorConfig prior_config(const json& cfg);
KnotPool knot_pool(const json& cfg);
CGridSpec grid_spec(const json& cfg);
std::filesystem::path table_cache_dir(const json& cfg);
StudyConfig study_config(const json& cfg);

}  // namespace spgarch::cli
