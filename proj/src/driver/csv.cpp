#include "sumprod/driver/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "sumprod/error.hpp"

namespace sumprod::driver {

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {
      "schema", "family", "kind",    "n",       "size_sum", "size_prod",       "size_ratio",   "size_aa_plus_a",
      "e_plus", "e_mult", "y",       "q",       "m",        "size_aa_plus_ma", "residues_hit", "wall_ms"};
  return cols;
}

std::string csv_header_line() {
  std::string s;
  for (const auto& c : csv_columns()) s += (s.empty() ? "" : ",") + c;
  return s;
}

std::size_t column_index(std::string_view column) {
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i)
    if (cols[i] == column) return i;
  throw Error(ErrorKind::InputFormat, "unknown column '" + std::string(column) + "'");
}

SweepRecord::SweepRecord() : cells(csv_columns().size(), std::string(kNotApplicable)) {
  cells[0] = std::to_string(kSchemaVersion);
}

const std::string& SweepRecord::at(std::string_view column) const { return cells[column_index(column)]; }
std::string& SweepRecord::at(std::string_view column) { return cells[column_index(column)]; }

std::optional<double> SweepRecord::number(std::string_view column) const {
  const auto& s = at(column);
  if (s == kNotApplicable || s == kLimit) return std::nullopt;
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v))
    throw Error(ErrorKind::InputFormat, "column " + std::string(column) + ": not a number '" + s + "'");
  return v;
}

std::string to_csv_line(const SweepRecord& r) {
  std::string s;
  for (std::size_t i = 0; i < r.cells.size(); ++i) {
    if (i) s += ',';
    s += r.cells[i];
  }
  return s;
}

SweepRecord parse_csv_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  SweepRecord r;
  std::size_t i = 0;
  while (true) {
    auto pos = line.find(',');
    if (i >= r.cells.size()) throw Error(ErrorKind::InputFormat, "too many cells");
    r.cells[i++] = std::string(line.substr(0, pos));
    if (pos == std::string_view::npos) break;
    line.remove_prefix(pos + 1);
  }
  if (i != r.cells.size()) throw Error(ErrorKind::InputFormat, "too few cells");
  return r;
}

std::vector<SweepRecord> read_csv(std::istream& in, const std::string& source_name) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::InputFormat, source_name + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != csv_header_line())
    throw Error(ErrorKind::InputFormat, source_name + ":1: header does not match schema " + std::to_string(kSchemaVersion));
  std::vector<SweepRecord> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    SweepRecord r;
    try {
      r = parse_csv_line(line);
    } catch (const Error& e) {
      throw Error(ErrorKind::InputFormat, source_name + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (r.cells[0] != std::to_string(kSchemaVersion))
      throw Error(ErrorKind::InputFormat,
                  source_name + ":" + std::to_string(lineno) + ": schema version " + r.cells[0] + " is not supported");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<SweepRecord> read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InputFormat, "cannot open " + path.string());
  return read_csv(in, path.string());
}

void write_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
  out << csv_header_line() << '\n';
  for (const auto& r : records) out << to_csv_line(r) << '\n';
}

void write_csv_file(const std::filesystem::path& path, const std::vector<SweepRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  write_csv(out, records);
  if (!out.flush()) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace sumprod::driver
