#pragma once

#include <cstdio>
#include <filesystem>
#include <memory>

#include "spgarch/posterior.hpp"

namespace spgarch {

/**
 * @brief Append-only tab-separated draw file.
 *
 * Layout:
 *   # spgarch draws v1
 *   # model <name>
 *   # knots <K> <k_1> ... <k_K>
 *   iteration  m  <parameter columns>  loglik
 *   <one row per retained draw>
 *
 * m is the indicator bitstring with m_1 first ("-" when K = 0). Numbers are
 * written with 17 significant digits and therefore reload bit-exactly.
 */
class DrawFileWriter {
 public:
  DrawFileWriter(const std::filesystem::path& path, const ModelDescriptor& model);
  ~DrawFileWriter();
  DrawFileWriter(const DrawFileWriter&) = delete;
  DrawFileWriter& operator=(const DrawFileWriter&) = delete;

  void write(const PosteriorSample& sample, std::size_t index);
  /// Adapter for run_*_sampler's sink argument.
  DrawSink sink();
  void close();

 private:
  std::FILE* file_ = nullptr;
  std::filesystem::path path_;
};

void write_draw_file(const std::filesystem::path& path, const PosteriorSample& sample);

/// Throws ParseError with the offending line number on malformed input.
PosteriorSample read_draw_file(const std::filesystem::path& path);

}  // namespace spgarch
