#include "sumprod/set_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "sumprod/error.hpp"

namespace sumprod {

FiniteSet read_set(std::istream& in, const std::string& source_name) {
  std::vector<ExactScalar> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      values.push_back(ExactScalar::parse(line));
    } catch (const Error& e) {
      throw Error(ErrorKind::InputFormat,
                  source_name + ":" + std::to_string(line_no) + ": malformed element '" + line + "'");
    }
  }
  if (values.empty()) throw Error(ErrorKind::EmptySet, source_name + ": no elements");
  return FiniteSet::make(std::move(values));
}

FiniteSet read_set_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InputFormat, "cannot open set file " + path.string());
  return read_set(in, path.string());
}

void write_set(std::ostream& out, const FiniteSet& set) {
  for (const auto& x : set) out << x.to_string() << '\n';
}

void write_set_file(const std::filesystem::path& path, const FiniteSet& set) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  write_set(out, set);
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace sumprod
