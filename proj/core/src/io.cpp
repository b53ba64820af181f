#include "slt/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "slt/errors.hpp"

#ifndef SLT_GIT_DESCRIBE
#define SLT_GIT_DESCRIBE "v0.1.0"
#endif

namespace slt {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& file)
    : out_(file, std::ios::binary) {
  if (!out_) throw Error("cannot open CSV for writing: " + file.string());
}

void CsvWriter::header(const std::vector<std::string>& names) {
  columns_ = names.size();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out_ << ',';
    out_ << names[i];
  }
  out_ << '\n';
}

void CsvWriter::row(const std::vector<CsvCell>& cells) {
  if (columns_ != 0 && cells.size() != columns_)
    throw Error("CSV row width does not match header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    const CsvCell& c = cells[i];
    if (std::holds_alternative<double>(c))
      out_ << format_double(std::get<double>(c));
    else if (std::holds_alternative<std::int64_t>(c))
      out_ << std::get<std::int64_t>(c);
    else if (std::holds_alternative<std::uint64_t>(c))
      out_ << std::get<std::uint64_t>(c);
    else
      out_ << std::get<std::string>(c);
  }
  out_ << '\n';
}

void CsvWriter::close() { out_.close(); }

namespace {

void field_header(CsvWriter& csv, const GridSpec& g, int value_cols) {
  std::vector<std::string> names;
  const char* idx[3] = {"i", "j", "k"};
  const char* pos[3] = {"x", "y", "z"};
  for (int a = 0; a < g.dim; ++a) names.push_back(idx[a]);
  for (int a = 0; a < g.dim; ++a) names.push_back(pos[a]);
  if (value_cols == 1) {
    names.push_back("value");
  } else {
    const char* comp[3] = {"vx", "vy", "vz"};
    for (int a = 0; a < value_cols; ++a) names.push_back(comp[a]);
  }
  csv.header(names);
}

}  // namespace

void write_field_csv(const ScalarField& f, const std::filesystem::path& file) {
  CsvWriter csv(file);
  field_header(csv, f.grid, 1);
  const GridSpec& g = f.grid;
  double x[3];
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    g.node_position(i, x);
    std::vector<CsvCell> cells;
    std::size_t rest = i;
    for (int a = 0; a < g.dim; ++a) {
      cells.emplace_back(static_cast<std::int64_t>(rest % g.n));
      rest /= g.n;
    }
    for (int a = 0; a < g.dim; ++a) cells.emplace_back(x[a]);
    cells.emplace_back(f.values[i]);
    csv.row(cells);
  }
}

void write_field_csv(const VectorField& f, const std::filesystem::path& file) {
  CsvWriter csv(file);
  field_header(csv, f.grid, f.grid.dim);
  const GridSpec& g = f.grid;
  double x[3];
  const std::size_t total = g.node_count();
  for (std::size_t i = 0; i < total; ++i) {
    g.node_position(i, x);
    std::vector<CsvCell> cells;
    std::size_t rest = i;
    for (int a = 0; a < g.dim; ++a) {
      cells.emplace_back(static_cast<std::int64_t>(rest % g.n));
      rest /= g.n;
    }
    for (int a = 0; a < g.dim; ++a) cells.emplace_back(x[a]);
    for (int a = 0; a < g.dim; ++a) cells.emplace_back(f.comps[a][i]);
    csv.row(cells);
  }
}

void write_pgm(const ScalarField& f, const std::filesystem::path& file) {
  if (f.grid.dim != 2) throw DomainError("PGM output is only defined for dim == 2");
  double lo = f.values.empty() ? 0.0 : f.values[0];
  double hi = lo;
  for (double v : f.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot open PGM for writing: " + file.string());
  out << "P5\n"
      << "# scale min=" << format_double(lo) << " max=" << format_double(hi)
      << "\n"
      << f.grid.n << ' ' << f.grid.n << "\n255\n";
  const double span = hi - lo;
  std::vector<unsigned char> row(f.grid.n);
  for (int j = 0; j < f.grid.n; ++j) {
    for (int i = 0; i < f.grid.n; ++i) {
      const double v = f.values[static_cast<std::size_t>(j) * f.grid.n + i];
      const double s = span > 0.0 ? (v - lo) / span : 0.0;
      row[i] = static_cast<unsigned char>(std::lround(s * 255.0));
    }
    out.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
}

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out.push_back('\\');
      out.push_back(c);
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace

void write_manifest(const std::filesystem::path& dir, const ManifestEntry& e) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / "manifest.jsonl", std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open manifest for writing in " + dir.string());
  out << "{\"scenario\":\"" << json_escape(e.scenario) << "\""
      << ",\"experiment\":\"" << json_escape(e.experiment) << "\""
      << ",\"config_hash\":\"" << std::hex << e.config_hash << std::dec << "\""
      << ",\"master_seed\":" << e.master_seed << ",\"version\":\""
      << json_escape(e.version) << "\""
      << ",\"threads\":" << e.threads << ",\"wallclock_ms\":" << e.wallclock_ms
      << ",\"status\":\"" << json_escape(e.status) << "\"}\n";
}

std::string version_string() { return SLT_GIT_DESCRIBE; }

}  // namespace slt
