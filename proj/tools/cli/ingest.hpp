#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cli/config.hpp"
#include "spgarch/volmodel.hpp"

namespace spgarch::cli {

/**
 * Reads one numeric column of a delimited text file with a header row.
 * Prices become scale * (log p_t - log p_{t-1}); returns are multiplied by scale.
 * Throws ParseError naming the 1-based file line for a missing column, a
 * non-numeric cell or a non-positive price.
 */
std::vector<double> ingest_values(const IngestSpec& spec);

/// ingest_values wrapped into a validated ReturnSeries.
ReturnSeries ingest(const IngestSpec& spec);

/// FNV-1a 64-bit hash of a file's bytes, as 16 hex digits.
std::string file_digest(const std::filesystem::path& path);

}  // namespace spgarch::cli
