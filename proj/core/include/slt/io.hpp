#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include "slt/grid.hpp"

namespace slt {

/// Decimal formatting used in every CSV artifact: 17 significant digits,
/// enough to round-trip any double bit-exactly.
std::string format_double(double v);

using CsvCell = std::variant<double, std::int64_t, std::uint64_t, std::string>;

// CSV contract: comma separators, one header row, LF line endings.
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& file);
  void header(const std::vector<std::string>& names);
  void row(const std::vector<CsvCell>& cells);
  void close();

 private:
  std::ofstream out_;
  std::size_t columns_ = 0;
};

/// One row per node: index coordinates, x-coordinates, value(s).
void write_field_csv(const ScalarField& f, const std::filesystem::path& file);
void write_field_csv(const VectorField& f, const std::filesystem::path& file);

/// Binary P5 heatmap with a `# scale min=<v> max=<v>` comment line.
/// Only defined for dim == 2; rows are written in increasing j.
void write_pgm(const ScalarField& f, const std::filesystem::path& file);

/// Writes <dir>/manifest.jsonl (one line describing the run; wallclock and
/// thread count live here, never in the CSV artifacts).
struct ManifestEntry {
  std::string scenario;
  std::string experiment;
  std::uint64_t config_hash = 0;
  std::uint64_t master_seed = 0;
  std::string version;
  std::int64_t wallclock_ms = 0;
  int threads = 0;
  std::string status;  // "pass" | "fail" | "error"
};
void write_manifest(const std::filesystem::path& dir, const ManifestEntry& e);

/// Library version (git-describe style, baked at build time).
std::string version_string();

}  // namespace slt
