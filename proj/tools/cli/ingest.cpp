#include "cli/ingest.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "spgarch/error.hpp"

namespace spgarch::cli {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\"");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\"");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

}  // namespace

std::vector<double> ingest_values(const IngestSpec& spec) {
  std::ifstream in(spec.path);
  if (!in) throw ParseError("cannot open data file " + spec.path.string());
  const std::string where = spec.path.string() + ":";

  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError(where + "1: missing header row");
  const auto header = split(line, spec.delimiter);
  std::size_t col = header.size() - 1;
  if (!spec.column.empty()) {
    col = header.size();
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (header[j] == spec.column) col = j;
    }
    if (col == header.size()) throw ParseError(where + "1: no column named '" + spec.column + "'");
  }

  std::vector<double> raw;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line, spec.delimiter);
    const std::string row = where + std::to_string(line_no) + ": ";
    if (col >= cells.size()) throw ParseError(row + "row has " + std::to_string(cells.size()) + " fields");
    const std::string& cell = cells[col];
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
      throw ParseError(row + "'" + cell + "' is not a finite number");
    }
    if (spec.kind == "prices" && !(v > 0.0)) throw ParseError(row + "price must be positive");
    raw.push_back(v);
  }

  if (spec.kind == "returns") {
    const double scale = spec.scale.value_or(1.0);
    for (double& v : raw) v *= scale;
    return raw;
  }
  if (raw.size() < 2) throw ParseError(where + " prices need at least 2 rows");
  const double scale = spec.scale.value_or(100.0);
  std::vector<double> r(raw.size() - 1);
  for (std::size_t t = 1; t < raw.size(); ++t) r[t - 1] = scale * (std::log(raw[t]) - std::log(raw[t - 1]));
  return r;
}

ReturnSeries ingest(const IngestSpec& spec) {
  std::vector<double> v = ingest_values(spec);
  if (v.size() < 2) throw ParseError(spec.path.string() + ": need at least 2 returns");
  return ReturnSeries(std::move(v));
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 14];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

}  // namespace spgarch::cli
