#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "spgarch/error.hpp"
#include "spgarch/spline.hpp"

namespace spgarch {
namespace {

constexpr const char* kMagic = "# spgarch c-table v1";

double parse_hex(const std::string& token, const std::filesystem::path& path) {
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0') {
    throw ParseError("c-table " + path.string() + ": bad number '" + token + "'");
  }
  return v;
}

std::string hex_key(std::uint64_t key) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << key;
  return os.str();
}

}  // namespace

void save_c_table(const CTable& table, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write c-table to " + path.string());
  out << kMagic << '\n';
  out << "key " << hex_key(table.key()) << '\n';
  out << std::hexfloat;
  out << "grid " << table.grid().points << ' ' << table.grid().nu_min << ' '
      << table.grid().nu_max << '\n';
  out << "knots " << table.pool().size();
  for (double k : table.pool().knots()) out << ' ' << k;
  out << '\n';
  for (std::size_t i = 0; i < table.pool().size(); ++i) {
    out << "row";
    for (std::size_t j = 0; j < table.grid().points; ++j) out << ' ' << table.value(i, j);
    out << '\n';
  }
  if (!out) throw ParseError("failed writing c-table to " + path.string());
}

CTable load_c_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open c-table " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kMagic) {
    throw ParseError("c-table " + path.string() + ": missing header");
  }
  std::string word;
  std::string key_text;
  in >> word >> key_text;
  if (word != "key") throw ParseError("c-table " + path.string() + ": missing key");

  CGridSpec grid;
  std::string nu_min;
  std::string nu_max;
  in >> word >> grid.points >> nu_min >> nu_max;
  if (word != "grid") throw ParseError("c-table " + path.string() + ": missing grid line");
  grid.nu_min = parse_hex(nu_min, path);
  grid.nu_max = parse_hex(nu_max, path);

  std::size_t k = 0;
  in >> word >> k;
  if (word != "knots") throw ParseError("c-table " + path.string() + ": missing knots line");
  std::vector<double> knots(k);
  for (auto& x : knots) {
    in >> word;
    x = parse_hex(word, path);
  }
  std::vector<double> values(k * grid.points);
  for (std::size_t i = 0; i < k; ++i) {
    in >> word;
    if (word != "row") throw ParseError("c-table " + path.string() + ": missing row");
    for (std::size_t j = 0; j < grid.points; ++j) {
      in >> word;
      values[i * grid.points + j] = parse_hex(word, path);
    }
  }
  if (!in) throw ParseError("c-table " + path.string() + ": truncated file");
  CTable table(KnotPool(std::move(knots)), grid, std::move(values));
  if (hex_key(table.key()) != key_text) {
    throw ParseError("c-table " + path.string() + ": key does not match contents");
  }
  return table;
}

CTable load_or_build_c_table(const std::filesystem::path& dir, const KnotPool& pool,
                             const CGridSpec& grid) {
  if (dir.empty()) return build_c_table(pool, grid);
  const auto path = dir / ("ctable-" + hex_key(c_table_key(pool, grid)) + ".txt");
  if (std::filesystem::exists(path)) {
    CTable table = load_c_table(path);
    if (table.pool() == pool && table.grid() == grid) return table;
  }
  CTable table = build_c_table(pool, grid);
  std::filesystem::create_directories(dir);
  // Write to a temporary name first so concurrent readers never see a partial file.
  const auto tmp = path.string() + ".tmp";
  save_c_table(table, tmp);
  std::filesystem::rename(tmp, path);
  return table;
}

}  // namespace spgarch
