#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sumprod/driver/csv.hpp"

namespace sumprod::driver {

struct FitResult {
  double slope = 0;
  double intercept = 0;
  double residual = 0;  // root mean square of the log residuals
  std::size_t points = 0;
};

/// Least squares of ln y against ln x. Throws Error(InsufficientData) for
/// fewer than 3 points and Error(InputFormat) for nonpositive values.
FitResult fit_points(const std::vector<std::pair<double, double>>& xy);

struct FitOptions {
  std::optional<std::string> family;
  std::optional<double> x_min;
  std::optional<double> x_max;
};

/// Rows with a sentinel in either column are skipped.
FitResult fit_exponent(const std::vector<SweepRecord>& records, const std::string& x_column,
                       const std::string& y_column, const FitOptions& opt = {});

}  // namespace sumprod::driver
