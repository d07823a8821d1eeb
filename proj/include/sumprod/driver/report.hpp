#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sumprod/driver/csv.hpp"

namespace sumprod::driver {

enum class ReportFormat { csv, svg, text };

ReportFormat report_format_from_string(std::string_view s);

struct ReportOptions {
  std::string x_column = "n";               // svg axes
  std::string y_column = "size_aa_plus_a";
};

/// Throws Error(InsufficientData) when records is empty.
void emit_report(std::ostream& out, const std::vector<SweepRecord>& records, ReportFormat format,
                 const ReportOptions& opt = {});
/// Throws Error(Io) when the path cannot be written.
void emit_report_file(const std::filesystem::path& path, const std::vector<SweepRecord>& records, ReportFormat format,
                      const ReportOptions& opt = {});

}  // namespace sumprod::driver
