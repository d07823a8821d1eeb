#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sumprod/driver/config.hpp"
#include "sumprod/driver/csv.hpp"

namespace sumprod::driver {

/// One (family, n) cell. ResourceLimit in a measurement becomes "LIMIT" in
/// its column; other errors propagate.
SweepRecord measure_cell(const SweepConfig& cfg, const FamilySpec& family, std::uint64_t n);

struct SweepOptions {
  unsigned workers = 0;  // 0: use the config value
  /// Append-only log of completed cells; an existing log with the same
  /// config fingerprint is replayed instead of recomputing its cells.
  std::optional<std::filesystem::path> run_log;
  /// Stop after this many newly computed cells (simulated interruption).
  std::optional<std::uint64_t> max_cells;
};

struct SweepResult {
  std::vector<SweepRecord> records;  // sorted by family id, then n
  std::uint64_t computed = 0;
  std::uint64_t replayed = 0;
  bool complete = false;
};

SweepResult run_sweep(const SweepConfig& cfg, const SweepOptions& opt = {});

/// FNV-1a of canonical_text(cfg), 16 hex digits.
std::string config_fingerprint(const SweepConfig& cfg);

}  // namespace sumprod::driver
