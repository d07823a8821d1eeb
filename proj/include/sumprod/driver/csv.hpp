#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sumprod::driver {

inline constexpr int kSchemaVersion = 1;
/// Cell value for a measurement that does not apply to the row.
inline constexpr std::string_view kNotApplicable = "NA";
/// Cell value for a measurement that hit the memory budget.
inline constexpr std::string_view kLimit = "LIMIT";

/// Fixed column order; the first column holds kSchemaVersion in every row.
const std::vector<std::string>& csv_columns();
std::string csv_header_line();

struct SweepRecord {
  std::vector<std::string> cells;  // aligned with csv_columns()

  SweepRecord();
  const std::string& at(std::string_view column) const;
  std::string& at(std::string_view column);
  /// Numeric value of a cell, or nothing for a sentinel.
  std::optional<double> number(std::string_view column) const;
};

/// Index of a column; throws Error(InputFormat) for unknown names.
std::size_t column_index(std::string_view column);

std::string to_csv_line(const SweepRecord& r);
/// Inverse of to_csv_line; throws Error(InputFormat) on a wrong cell count.
SweepRecord parse_csv_line(std::string_view line);

/// Requires the exact header and schema 1 in every row.
std::vector<SweepRecord> read_csv(std::istream& in, const std::string& source_name);
std::vector<SweepRecord> read_csv_file(const std::filesystem::path& path);
void write_csv(std::ostream& out, const std::vector<SweepRecord>& records);
void write_csv_file(const std::filesystem::path& path, const std::vector<SweepRecord>& records);

}  // namespace sumprod::driver
