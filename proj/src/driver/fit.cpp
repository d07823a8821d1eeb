#include "sumprod/driver/fit.hpp"

#include <cmath>

#include "sumprod/error.hpp"

namespace sumprod::driver {

FitResult fit_points(const std::vector<std::pair<double, double>>& xy) {
  if (xy.size() < 3)
    throw Error(ErrorKind::InsufficientData, "need at least 3 points, have " + std::to_string(xy.size()));
  const double n = static_cast<double>(xy.size());
  double sx = 0, sy = 0;
  std::vector<std::pair<double, double>> logs;
  logs.reserve(xy.size());
  for (auto [x, y] : xy) {
    if (!(x > 0) || !(y > 0)) throw Error(ErrorKind::InputFormat, "fit needs positive values");
    logs.emplace_back(std::log(x), std::log(y));
    sx += logs.back().first;
    sy += logs.back().second;
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (auto [lx, ly] : logs) {
    sxx += (lx - mx) * (lx - mx);
    sxy += (lx - mx) * (ly - my);
  }
  if (sxx == 0) throw Error(ErrorKind::InsufficientData, "all x values are equal");
  FitResult r;
  r.points = xy.size();
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  double ss = 0;
  for (auto [lx, ly] : logs) {
    const double e = ly - (r.intercept + r.slope * lx);
    ss += e * e;
  }
  r.residual = std::sqrt(ss / n);
  return r;
}

FitResult fit_exponent(const std::vector<SweepRecord>& records, const std::string& x_column,
                       const std::string& y_column, const FitOptions& opt) {
  column_index(x_column);
  column_index(y_column);
  std::vector<std::pair<double, double>> xy;
  for (const auto& r : records) {
    if (opt.family && r.at("family") != *opt.family) continue;
    auto x = r.number(x_column);
    auto y = r.number(y_column);
    if (!x || !y) continue;
    if ((opt.x_min && *x < *opt.x_min) || (opt.x_max && *x > *opt.x_max)) continue;
    xy.emplace_back(*x, *y);
  }
  return fit_points(xy);
}

}  // namespace sumprod::driver
