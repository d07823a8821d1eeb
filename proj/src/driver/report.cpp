#include "sumprod/driver/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>

#include "sumprod/error.hpp"

namespace sumprod::driver {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

void emit_svg(std::ostream& out, const std::vector<SweepRecord>& records, const ReportOptions& opt) {
  constexpr double width = 640, height = 480, margin = 60;
  auto logv = [](std::optional<double> v) -> std::optional<double> {
    if (!v || !(*v > 0)) return std::nullopt;
    return std::log10(*v);
  };
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool any_x = false, any_y = false;
  for (const auto& r : records) {
    if (auto x = logv(r.number(opt.x_column))) {
      x0 = any_x ? std::min(x0, *x) : *x;
      x1 = any_x ? std::max(x1, *x) : *x;
      any_x = true;
    }
    if (auto y = logv(r.number(opt.y_column))) {
      y0 = any_y ? std::min(y0, *y) : *y;
      y1 = any_y ? std::max(y1, *y) : *y;
      any_y = true;
    }
  }
  if (x1 - x0 < 1e-9) x1 = x0 + 1;
  if (y1 - y0 < 1e-9) y1 = y0 + 1;
  const double pw = width - 2 * margin, ph = height - 2 * margin;

  std::map<std::string, std::size_t> colour;
  for (const auto& r : records) colour.emplace(r.at("family"), 0);
  std::size_t k = 0;
  for (auto& [id, c] : colour) c = k++ % std::size(kPalette);

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin << "\" y2=\""
      << height - margin << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\"" << height - margin
      << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\">log10 " << opt.x_column
      << "</text>\n";
  out << "<text x=\"15\" y=\"" << height / 2 << "\" transform=\"rotate(-90 15 " << height / 2
      << ")\" text-anchor=\"middle\">log10 " << opt.y_column << "</text>\n";
  for (const auto& r : records) {
    auto x = logv(r.number(opt.x_column));
    auto y = logv(r.number(opt.y_column));
    const double cx = margin + (x ? (*x - x0) / (x1 - x0) : 0.0) * pw;
    const double cy = height - margin - (y ? (*y - y0) / (y1 - y0) : 0.0) * ph;
    out << "<circle class=\"marker\" cx=\"" << fixed(cx) << "\" cy=\"" << fixed(cy) << "\" r=\"3\" fill=\""
        << kPalette[colour[r.at("family")]] << "\"><title>" << r.at("family") << " n=" << r.at("n") << "</title></circle>\n";
  }
  double ly = margin;
  for (const auto& [id, c] : colour) {
    out << "<text x=\"" << width - margin << "\" y=\"" << fixed(ly) << "\" text-anchor=\"end\" fill=\"" << kPalette[c]
        << "\">" << id << "</text>\n";
    ly += 16;
  }
  out << "</svg>\n";
}

void emit_text(std::ostream& out, const std::vector<SweepRecord>& records) {
  const auto& cols = csv_columns();
  std::vector<std::size_t> shown;
  for (std::size_t i = 1; i < cols.size(); ++i) {
    bool used = false;
    for (const auto& r : records) used |= r.cells[i] != kNotApplicable;
    if (used) shown.push_back(i);
  }
  std::vector<std::size_t> w(cols.size(), 0);
  for (auto i : shown) {
    w[i] = cols[i].size();
    for (const auto& r : records) w[i] = std::max(w[i], r.cells[i].size());
  }
  auto row = [&](auto cell) {
    std::string line;
    for (auto i : shown) {
      std::string s = cell(i);
      if (!line.empty()) line += "  ";
      line += std::string(w[i] - s.size(), ' ') + s;
    }
    out << line << '\n';
  };
  row([&](std::size_t i) { return cols[i]; });
  std::string rule;
  for (auto i : shown) rule += std::string(w[i], '-') + (i == shown.back() ? "" : "  ");
  out << rule << '\n';
  for (const auto& r : records) row([&](std::size_t i) { return r.cells[i]; });
  out << records.size() << " records\n";
}

}  // namespace

ReportFormat report_format_from_string(std::string_view s) {
  if (s == "csv") return ReportFormat::csv;
  if (s == "svg" || s == "svg_scatter") return ReportFormat::svg;
  if (s == "text") return ReportFormat::text;
  throw Error(ErrorKind::InputFormat, "unknown report format '" + std::string(s) + "'");
}

void emit_report(std::ostream& out, const std::vector<SweepRecord>& records, ReportFormat format,
                 const ReportOptions& opt) {
  if (records.empty()) throw Error(ErrorKind::InsufficientData, "no records to report");
  column_index(opt.x_column);
  column_index(opt.y_column);
  switch (format) {
    case ReportFormat::csv: write_csv(out, records); break;
    case ReportFormat::svg: emit_svg(out, records, opt); break;
    case ReportFormat::text: emit_text(out, records); break;
  }
}

void emit_report_file(const std::filesystem::path& path, const std::vector<SweepRecord>& records, ReportFormat format,
                      const ReportOptions& opt) {
  if (records.empty()) throw Error(ErrorKind::InsufficientData, "no records to report");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  emit_report(out, records, format, opt);
  if (!out.flush()) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace sumprod::driver
