#include "spgarch/draw_file.hpp"

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "spgarch/error.hpp"

namespace spgarch {

namespace {

constexpr const char* kMagic = "# spgarch draws v1";

void put_number(std::FILE* f, double v) { std::fprintf(f, "\t%.17g", v); }

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find('\t', start);
    out.push_back(line.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_number(const std::string& cell, std::size_t line_no) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw ParseError("draw file line " + std::to_string(line_no) + ": '" + cell +
                     "' is not a number");
  }
  return v;
}

}  // namespace

DrawFileWriter::DrawFileWriter(const std::filesystem::path& path, const ModelDescriptor& model)
    : path_(path) {
  file_ = std::fopen(path.string().c_str(), "w");
  if (file_ == nullptr) {
    throw std::runtime_error("cannot open " + path.string() + ": " + std::strerror(errno));
  }
  std::fprintf(file_, "%s\n# model %s\n# knots %zu", kMagic, to_string(model.kind).c_str(),
               model.pool.size());
  for (double k : model.pool.knots()) std::fprintf(file_, " %.17g", k);
  std::fprintf(file_, "\niteration\tm");
  for (const auto& name : model.column_names()) std::fprintf(file_, "\t%s", name.c_str());
  std::fprintf(file_, "\tloglik\n");
}

DrawFileWriter::~DrawFileWriter() {
  if (file_ != nullptr) std::fclose(file_);
}

void DrawFileWriter::write(const PosteriorSample& sample, std::size_t index) {
  if (file_ == nullptr) throw ContractViolation("draw file already closed");
  std::fprintf(file_, "%zu\t%s", sample.iteration(index), sample.indicator(index).bitstring().c_str());
  for (double v : sample.row(index)) put_number(file_, v);
  put_number(file_, sample.log_likelihood(index));
  std::fputc('\n', file_);
}

DrawSink DrawFileWriter::sink() {
  return [this](const PosteriorSample& s, std::size_t i) { write(s, i); };
}

void DrawFileWriter::close() {
  if (file_ == nullptr) return;
  const bool failed = std::ferror(file_) != 0;
  std::fclose(file_);
  file_ = nullptr;
  if (failed) throw std::runtime_error("write error on " + path_.string());
}

void write_draw_file(const std::filesystem::path& path, const PosteriorSample& sample) {
  DrawFileWriter w(path, sample.model());
  for (std::size_t i = 0; i < sample.size(); ++i) w.write(sample, i);
  w.close();
}

PosteriorSample read_draw_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open draw file " + path.string());
  std::string line;
  std::size_t line_no = 0;
  auto next = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    return true;
  };

  if (!next() || line != kMagic) throw ParseError("draw file line 1: missing '" + std::string(kMagic) + "'");
  if (!next() || line.rfind("# model ", 0) != 0) throw ParseError("draw file line 2: expected '# model'");
  ModelDescriptor model;
  model.kind = model_kind_from_string(line.substr(8));
  if (!next() || line.rfind("# knots ", 0) != 0) throw ParseError("draw file line 3: expected '# knots'");
  {
    std::istringstream ks(line.substr(8));
    std::size_t k = 0;
    if (!(ks >> k)) throw ParseError("draw file line 3: bad knot count");
    std::vector<double> knots;
    std::string tok;
    while (ks >> tok) knots.push_back(parse_number(tok, 3));
    if (knots.size() != k) throw ParseError("draw file line 3: knot count does not match list");
    model.pool = KnotPool(std::move(knots));
  }
  if (!next()) throw ParseError("draw file: missing column header");
  const std::size_t width = model.row_width();
  const std::size_t expected_cells = width + 3;
  if (split_tabs(line).size() != expected_cells) {
    throw ParseError("draw file line 4: expected " + std::to_string(expected_cells) + " columns");
  }

  PosteriorSample sample(model, width);
  std::vector<double> row(width);
  while (next()) {
    if (line.empty()) continue;
    const auto cells = split_tabs(line);
    if (cells.size() != expected_cells) {
      throw ParseError("draw file line " + std::to_string(line_no) + ": expected " +
                       std::to_string(expected_cells) + " columns, found " +
                       std::to_string(cells.size()));
    }
    const auto iteration = static_cast<std::size_t>(parse_number(cells[0], line_no));
    Indicator m;
    try {
      m = Indicator::from_bitstring(cells[1]);
    } catch (const std::exception& e) {
      throw ParseError("draw file line " + std::to_string(line_no) + ": " + e.what());
    }
    if (m.size() != model.num_knots()) {
      throw ParseError("draw file line " + std::to_string(line_no) + ": indicator length mismatch");
    }
    for (std::size_t j = 0; j < width; ++j) row[j] = parse_number(cells[2 + j], line_no);
    sample.append(iteration, m, row, parse_number(cells.back(), line_no));
  }
  return sample;
}

}  // namespace spgarch
