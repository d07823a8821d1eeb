#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sumprod/driver/family.hpp"

namespace sumprod::driver {

enum class Measure { sum, product, ratio, aa_plus_a, e_plus, e_mult, construction };

std::string_view to_string(Measure m);
Measure measure_from_string(std::string_view s);

// Sweep configuration, read from sectioned "key = value" text:
//
//   [sweep]
//   sizes = 16, 32, 64
//   measurements = sum, product, aa_plus_a
//   budget_mib = 1024
//   workers = 1
//   timing = false
//
//   [family gp]
//   kind = geometric
//   ratio = 2
//
// '#' starts a comment line. Family ids may not contain ',' or whitespace.
struct SweepConfig {
  std::vector<std::uint64_t> sizes;
  std::vector<Measure> measurements;
  std::uint64_t budget_mib = 8192;
  unsigned workers = 1;
  bool timing = false;
  std::vector<FamilySpec> families;

  bool measures(Measure m) const;
  /// Sizes used for one family: its own list if given, else the sweep grid.
  const std::vector<std::uint64_t>& sizes_for(const FamilySpec& f) const;
};

SweepConfig parse_config(std::istream& in, const std::string& source_name);
SweepConfig load_config(const std::filesystem::path& path);

/// Everything that influences sweep output, in a fixed textual form
/// (worker count excluded).
std::string canonical_text(const SweepConfig& cfg);

}  // namespace sumprod::driver
