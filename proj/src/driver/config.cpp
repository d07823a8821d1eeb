#include "sumprod/driver/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "sumprod/error.hpp"

namespace sumprod::driver {

namespace {

constexpr std::string_view kMeasures[] = {"sum", "product", "ratio", "aa_plus_a", "e_plus", "e_mult", "construction"};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    auto pos = s.find(',');
    auto item = trim(s.substr(0, pos));
    if (!item.empty()) out.push_back(item);
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return out;
}

struct Parser {
  std::string source;
  int line = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::InputFormat, source + ":" + std::to_string(line) + ": " + msg);
  }

  std::uint64_t u64(std::string_view v) const {
    std::uint64_t x = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size()) fail("expected a nonnegative integer, got '" + std::string(v) + "'");
    return x;
  }

  bool boolean(std::string_view v) const {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    fail("expected true or false, got '" + std::string(v) + "'");
  }

  ExactScalar scalar(std::string_view v) const {
    try {
      return ExactScalar::parse(v);
    } catch (const Error&) {
      fail("expected a rational, got '" + std::string(v) + "'");
    }
  }

  std::vector<std::uint64_t> sizes(std::string_view v) const {
    std::vector<std::uint64_t> out;
    for (auto item : split_list(v)) {
      auto n = u64(item);
      if (n == 0) fail("sizes must be positive");
      out.push_back(n);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
};

}  // namespace

std::string_view to_string(Measure m) { return kMeasures[static_cast<int>(m)]; }

Measure measure_from_string(std::string_view s) {
  for (int i = 0; i < 7; ++i)
    if (kMeasures[i] == s) return static_cast<Measure>(i);
  throw Error(ErrorKind::InputFormat, "unknown measurement '" + std::string(s) + "'");
}

bool SweepConfig::measures(Measure m) const {
  return std::find(measurements.begin(), measurements.end(), m) != measurements.end();
}

const std::vector<std::uint64_t>& SweepConfig::sizes_for(const FamilySpec& f) const {
  return f.sizes.empty() ? sizes : f.sizes;
}

SweepConfig parse_config(std::istream& in, const std::string& source_name) {
  Parser p{source_name};
  SweepConfig cfg;
  enum class Section { none, sweep, family } section = Section::none;
  std::vector<std::string> seeded;
  std::string raw;
  while (std::getline(in, raw)) {
    ++p.line;
    auto text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    if (text.front() == '[') {
      if (text.back() != ']') p.fail("unterminated section header");
      auto name = trim(text.substr(1, text.size() - 2));
      if (name == "sweep") {
        section = Section::sweep;
      } else if (name.substr(0, 7) == "family ") {
        auto id = trim(name.substr(7));
        if (id.empty() || id.find_first_of(", \t\"") != std::string_view::npos) p.fail("invalid family id");
        for (const auto& f : cfg.families)
          if (f.id == id) p.fail("duplicate family '" + std::string(id) + "'");
        cfg.families.push_back(FamilySpec{});
        cfg.families.back().id = std::string(id);
        section = Section::family;
      } else {
        p.fail("unknown section '" + std::string(name) + "'");
      }
      continue;
    }
    auto eq = text.find('=');
    if (eq == std::string_view::npos) p.fail("expected key = value");
    auto key = trim(text.substr(0, eq));
    auto value = trim(text.substr(eq + 1));
    if (section == Section::none) p.fail("key outside of a section");
    if (section == Section::sweep) {
      if (key == "sizes") {
        cfg.sizes = p.sizes(value);
      } else if (key == "measurements") {
        cfg.measurements.clear();
        for (auto item : split_list(value)) {
          try {
            auto m = measure_from_string(item);
            if (!cfg.measures(m)) cfg.measurements.push_back(m);
          } catch (const Error& e) {
            p.fail(e.what());
          }
        }
      } else if (key == "budget_mib") {
        cfg.budget_mib = p.u64(value);
        if (cfg.budget_mib == 0) p.fail("budget_mib must be positive");
      } else if (key == "workers") {
        cfg.workers = static_cast<unsigned>(std::max<std::uint64_t>(1, p.u64(value)));
      } else if (key == "timing") {
        cfg.timing = p.boolean(value);
      } else {
        p.fail("unknown key '" + std::string(key) + "' in [sweep]");
      }
      continue;
    }
    auto& f = cfg.families.back();
    if (key == "kind") {
      try {
        f.kind = family_kind_from_string(value);
      } catch (const Error& e) {
        p.fail(e.what());
      }
    } else if (key == "start") {
      f.start = p.scalar(value);
    } else if (key == "step") {
      f.step = p.scalar(value);
    } else if (key == "ratio") {
      f.ratio = p.scalar(value);
    } else if (key == "range") {
      f.range = p.u64(value);
    } else if (key == "seed") {
      f.seed = p.u64(value);
      seeded.push_back(f.id);
    } else if (key == "path") {
      f.path = std::string(value);
    } else if (key == "sizes") {
      f.sizes = p.sizes(value);
    } else {
      p.fail("unknown key '" + std::string(key) + "' in family section");
    }
  }
  if (cfg.families.empty()) throw Error(ErrorKind::InputFormat, source_name + ": no [family ...] sections");
  for (const auto& f : cfg.families) {
    if (cfg.sizes_for(f).empty())
      throw Error(ErrorKind::InputFormat, source_name + ": no sizes for family '" + f.id + "'");
    if (f.kind == FamilyKind::random_subset && std::find(seeded.begin(), seeded.end(), f.id) == seeded.end())
      throw Error(ErrorKind::InputFormat, source_name + ": random_subset family '" + f.id + "' needs a seed");
  }
  if (cfg.measurements.empty())
    cfg.measurements = {Measure::sum, Measure::product, Measure::ratio, Measure::aa_plus_a, Measure::e_plus,
                        Measure::e_mult};
  std::sort(cfg.families.begin(), cfg.families.end(),
            [](const FamilySpec& a, const FamilySpec& b) { return a.id < b.id; });
  return cfg;
}

SweepConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InputFormat, "cannot open config " + path.string());
  return parse_config(in, path.string());
}

std::string canonical_text(const SweepConfig& cfg) {
  std::ostringstream os;
  auto list = [&](const std::vector<std::uint64_t>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  };
  os << "sizes=";
  list(cfg.sizes);
  os << "\nmeasurements=";
  for (std::size_t i = 0; i < cfg.measurements.size(); ++i) os << (i ? "," : "") << to_string(cfg.measurements[i]);
  os << "\nbudget_mib=" << cfg.budget_mib << "\ntiming=" << cfg.timing << '\n';
  for (const auto& f : cfg.families) {
    os << "family=" << f.id << " kind=" << to_string(f.kind) << " start=" << f.start << " step=" << f.step
       << " ratio=" << f.ratio << " range=" << f.range << " seed=" << f.seed << " path=" << f.path << " sizes=";
    list(f.sizes);
    os << '\n';
  }
  return os.str();
}

}  // namespace sumprod::driver
