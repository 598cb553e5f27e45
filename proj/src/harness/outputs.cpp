#include "filmflow/harness/outputs.hpp"

#include <json.hpp>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "filmflow/errors.hpp"

namespace filmflow::harness {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path) {
  f_ = std::fopen(path.c_str(), "wb");
  if (!f_) throw IoFailure("cannot open '" + path + "' for writing");
}

CsvWriter::~CsvWriter() {
  if (f_) std::fclose(static_cast<std::FILE*>(f_));
}

void CsvWriter::header(const std::vector<std::string>& cols) {
  std::string line;
  for (size_t i = 0; i < cols.size(); ++i) {
    if (i) line += ',';
    line += cols[i];
  }
  line += '\n';
  std::fwrite(line.data(), 1, line.size(), static_cast<std::FILE*>(f_));
}

void CsvWriter::row(const std::vector<double>& vals) {
  std::string line;
  for (size_t i = 0; i < vals.size(); ++i) {
    if (i) line += ',';
    line += format_g17(vals[i]);
  }
  line += '\n';
  std::fwrite(line.data(), 1, line.size(), static_cast<std::FILE*>(f_));
}

void CsvWriter::raw_row(const std::string& line) {
  std::fwrite(line.data(), 1, line.size(), static_cast<std::FILE*>(f_));
  std::fputc('\n', static_cast<std::FILE*>(f_));
}

std::string file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot hash missing file '" + path + "'");
  unsigned long long h = 1469598103934665603ull;
  char buf[1 << 14];
  while (in) {
    in.read(buf, sizeof(buf));
    const std::streamsize n = in.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
  }
  char out[20];
  std::snprintf(out, sizeof(out), "%016llx", h);
  return out;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoFailure("cannot create output dir '" + dir + "'");
}

void write_manifest(const std::string& dir, const std::string& canonical,
                    const std::vector<std::string>& files) {
  unsigned long long h = 1469598103934665603ull;
  for (char ch : canonical) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ull;
  }
  char cfg_hash[20];
  std::snprintf(cfg_hash, sizeof(cfg_hash), "%016llx", h);

  nlohmann::json j;
  j["config_hash"] = cfg_hash;
  for (const auto& f : files)
    j["files"][f] = file_hash(dir + "/" + f);

  std::ofstream out(dir + "/manifest.json", std::ios::binary);
  if (!out) throw IoFailure("cannot write manifest in '" + dir + "'");
  out << j.dump(2) << "\n";
}

}  // namespace filmflow::harness
