#pragma once

#include <string>
#include <vector>

#include "filmflow/fd/grid.hpp"

namespace filmflow::harness {

/// Deterministic CSV writer: full double precision (17 significant
/// digits), fixed column and row order, no timestamps.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  ~CsvWriter();
  void header(const std::vector<std::string>& cols);
  void row(const std::vector<double>& vals);
  void raw_row(const std::string& line);

 private:
  void* f_;
};

/// FNV-1a 64-bit content hash of a file, hex encoded.
std::string file_hash(const std::string& path);

/// Write manifest.json listing every produced file with its content
/// hash plus the config hash; byte-stable for identical runs.
void write_manifest(const std::string& dir,
                    const std::string& canonical_config,
                    const std::vector<std::string>& files);

void ensure_dir(const std::string& dir);

std::string format_g17(double v);

}  // namespace filmflow::harness
