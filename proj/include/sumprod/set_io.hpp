#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "sumprod/finite_set.hpp"

namespace sumprod {

// Set file format: one element per line, an optionally signed integer or
// "p/q" with q > 0. Lines starting with '#' and blank lines are skipped.

/// Throws Error(InputFormat) naming the offending line, Error(EmptySet) when
/// no element is present.
FiniteSet read_set(std::istream& in, const std::string& source_name = "<stream>");
FiniteSet read_set_file(const std::filesystem::path& path);

void write_set(std::ostream& out, const FiniteSet& set);
void write_set_file(const std::filesystem::path& path, const FiniteSet& set);

}  // namespace sumprod
