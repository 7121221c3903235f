#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "cli/config.hpp"
#include "spgarch/inference.hpp"

namespace spgarch::cli {

/// Commands understood by run_job.
inline constexpr const char* kCommands[] = {"fit", "simulate", "forecast", "dic", "study"};

/**
 * Runs one job with a fully resolved config and writes its artifacts plus
 * manifest.json into cfg["output"]. Progress goes to `log`. Errors propagate
 * as the library's exception types.
 */
void run_job(const std::string& command, const json& cfg, std::ostream& log);

/// dic.csv (one row per visited model) and dic.txt (key-value totals and warnings).
void write_dic_report(const DicReport& report, const std::filesystem::path& dir);

}  // namespace spgarch::cli
