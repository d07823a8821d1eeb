#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sumprod/driver/config.hpp"
#include "sumprod/driver/csv.hpp"
#include "sumprod/driver/family.hpp"
#include "sumprod/driver/fit.hpp"
#include "sumprod/driver/report.hpp"
#include "sumprod/driver/rng.hpp"
#include "sumprod/driver/sweep.hpp"
#include "sumprod/error.hpp"
#include "sumprod/set_io.hpp"

using namespace sumprod;
using namespace sumprod::driver;
namespace fs = std::filesystem;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Io;
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "sumprod_driver_tests";
  fs::create_directories(dir);
  auto p = dir / name;
  fs::remove(p);
  return p;
}

SweepConfig config_from(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test.cfg");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

const char* kSmallSweep = R"(
[sweep]
sizes = 4, 8, 16
measurements = sum, product, ratio, aa_plus_a, e_plus, e_mult

[family ap]
kind = interval

[family rnd]
kind = random_subset
range = 100
seed = 42
)";

}  // namespace

TEST(SplitMix, ReferenceOutputs) {
  SplitMix64 r(0);
  EXPECT_EQ(r.next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(r.next(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(r.next(), 0x06c45d188009454fULL);
  SplitMix64 u(7);
  for (int i = 0; i < 1000; ++i) ASSERT_LT(u.uniform(13), 13u);
  EXPECT_EQ(SplitMix64(3).uniform(1), 0u);
}

TEST(Family, Examples) {
  FamilySpec s;
  s.kind = FamilyKind::interval;
  EXPECT_EQ(generate_family(s, 5), FiniteSet::interval(1, 5));
  s.kind = FamilyKind::geometric;
  s.ratio = 2;
  EXPECT_EQ(generate_family(s, 4), FiniteSet::make({1, 2, 4, 8}));
  s.kind = FamilyKind::convex_squares;
  EXPECT_EQ(generate_family(s, 4), FiniteSet::make({1, 4, 9, 16}));
  s.kind = FamilyKind::arithmetic;
  s.start = ExactScalar(1, 2);
  s.step = 3;
  EXPECT_EQ(generate_family(s, 3), FiniteSet::make({ExactScalar(1, 2), ExactScalar(7, 2), ExactScalar(13, 2)}));
  s.kind = FamilyKind::balog_construction;
  EXPECT_EQ(generate_family(s, 10), FiniteSet::interval(1, 10));
  EXPECT_EQ(kind_of([&] { generate_family(s, 0); }), ErrorKind::InputFormat);
  EXPECT_EQ(kind_of([] { family_kind_from_string("spiral"); }), ErrorKind::InputFormat);
}

TEST(Family, RandomSubsetIsDeterministic) {
  FamilySpec s;
  s.kind = FamilyKind::random_subset;
  s.range = 1000;
  s.seed = 99;
  auto a = generate_family(s, 50);
  EXPECT_EQ(a.size(), 50u);
  EXPECT_EQ(a, generate_family(s, 50));
  EXPECT_GE(a.min(), ExactScalar(1));
  EXPECT_LE(a.max(), ExactScalar(1000));
  s.seed = 100;
  EXPECT_NE(a, generate_family(s, 50));
  s.range = 10;
  EXPECT_EQ(generate_family(s, 10), FiniteSet::interval(1, 10));
  EXPECT_EQ(kind_of([&] { generate_family(s, 11); }), ErrorKind::InputFormat);
}

TEST(Family, FileTakesSmallestElements) {
  auto p = scratch("family.txt");
  std::ofstream(p) << "# a set\n9\n1/2\n4\n7\n";
  FamilySpec s;
  s.kind = FamilyKind::file;
  s.path = p.string();
  EXPECT_EQ(generate_family(s, 2), FiniteSet::make({ExactScalar(1, 2), ExactScalar(4)}));
  EXPECT_EQ(kind_of([&] { generate_family(s, 5); }), ErrorKind::InputFormat);
  std::ofstream(p) << "1\nx\n";
  try {
    generate_family(s, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InputFormat);
    EXPECT_NE(std::string(e.what()).find(":2"), std::string::npos);
  }
  s.path = "/nonexistent/file.txt";
  EXPECT_EQ(kind_of([&] { generate_family(s, 1); }), ErrorKind::InputFormat);
}

TEST(Config, ParsesSectionsAndDefaults) {
  auto cfg = config_from(R"(
# comment
[sweep]
sizes = 8, 16

[family z]
kind = geometric
ratio = 3/2
sizes = 4

[family a]
kind = arithmetic
start = 2
step = 1/3
)");
  EXPECT_EQ(cfg.sizes, (std::vector<std::uint64_t>{8, 16}));
  ASSERT_EQ(cfg.families.size(), 2u);
  EXPECT_EQ(cfg.families[0].id, "a");
  EXPECT_EQ(cfg.families[0].step, ExactScalar(1, 3));
  EXPECT_EQ(cfg.families[1].ratio, ExactScalar(3, 2));
  EXPECT_EQ(cfg.sizes_for(cfg.families[1]), (std::vector<std::uint64_t>{4}));
  EXPECT_TRUE(cfg.measures(Measure::aa_plus_a));
  EXPECT_FALSE(cfg.measures(Measure::construction));
  EXPECT_EQ(cfg.budget_mib, 8192u);
}

TEST(Config, ErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) {
    try {
      config_from(text);
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InputFormat);
      return std::string(e.what());
    }
    ADD_FAILURE() << "accepted: " << text;
    return std::string();
  };
  EXPECT_NE(line_of("[sweep]\nsizes = 4\n[family a]\nkind = spiral\n").find("test.cfg:4"), std::string::npos);
  EXPECT_NE(line_of("[sweep]\nsizes = 4, x\n").find("test.cfg:2"), std::string::npos);
  EXPECT_NE(line_of("[sweep]\nbogus = 1\n").find("test.cfg:2"), std::string::npos);
  EXPECT_NE(line_of("sizes = 4\n").find("test.cfg:1"), std::string::npos);
  EXPECT_NE(line_of("[sweep]\nsizes = 4\n[family a]\n[family a]\n").find("test.cfg:4"), std::string::npos);
  EXPECT_NE(line_of("[sweep]\nmeasurements = volume\n").find("test.cfg:2"), std::string::npos);
  line_of("[sweep]\nsizes = 4\n");
  line_of("[family a]\nkind = interval\n");
  line_of("[sweep]\nsizes = 4\n[family r]\nkind = random_subset\nrange = 10\n");
}

TEST(Csv, SchemaAndRoundTrip) {
  SweepRecord r;
  r.at("family") = "ap";
  r.at("kind") = "interval";
  r.at("n") = "4";
  r.at("size_sum") = "7";
  r.at("size_prod") = std::string(kLimit);
  EXPECT_EQ(r.at("schema"), "1");
  EXPECT_EQ(r.at("e_mult"), "NA");
  EXPECT_EQ(*r.number("size_sum"), 7.0);
  EXPECT_FALSE(r.number("size_prod"));
  EXPECT_EQ(kind_of([] { column_index("nope"); }), ErrorKind::InputFormat);

  std::stringstream ss;
  write_csv(ss, {r, r});
  auto back = read_csv(ss, "mem");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].cells, r.cells);

  std::string text = csv_header_line() + "\n" + to_csv_line(r) + "\n";
  auto pos = text.rfind("\n1,");
  text.replace(pos + 1, 1, "2");
  std::istringstream wrong(text);
  EXPECT_EQ(kind_of([&] { read_csv(wrong, "mem"); }), ErrorKind::InputFormat);
  std::istringstream bad_header("schema,family\n1,a\n");
  EXPECT_EQ(kind_of([&] { read_csv(bad_header, "mem"); }), ErrorKind::InputFormat);
  EXPECT_EQ(kind_of([] { write_csv_file("/nonexistent/dir/out.csv", {}); }), ErrorKind::Io);
}

TEST(Sweep, OneRowPerCellInCanonicalOrder) {
  auto cfg = config_from(kSmallSweep);
  auto res = run_sweep(cfg);
  ASSERT_TRUE(res.complete);
  ASSERT_EQ(res.records.size(), 6u);
  EXPECT_EQ(res.records[0].at("family"), "ap");
  EXPECT_EQ(res.records[2].at("n"), "16");
  EXPECT_EQ(res.records[3].at("family"), "rnd");
  EXPECT_EQ(res.records[0].at("size_sum"), "7");
  EXPECT_EQ(res.records[0].at("e_plus"), "44");
  EXPECT_EQ(res.records[0].at("wall_ms"), "NA");
  EXPECT_EQ(res.records[0].at("y"), "NA");
}

TEST(Sweep, LimitSentinelInsteadOfCrash) {
  auto cfg = config_from(R"(
[sweep]
sizes = 4, 2000
budget_mib = 1
measurements = sum, construction

[family bc]
kind = balog_construction
sizes = 2000

[family rnd]
kind = random_subset
range = 1000000
seed = 5

[family gp]
kind = geometric
ratio = 1/2
sizes = 8
)");
  auto res = run_sweep(cfg);
  ASSERT_EQ(res.records.size(), 4u);
  const auto& bc = res.records[0];
  EXPECT_EQ(bc.at("q"), "30");
  EXPECT_NE(bc.at("size_aa_plus_ma"), "LIMIT");
  EXPECT_NE(bc.at("residues_hit"), "NA");
  const auto& gp = res.records[1];
  EXPECT_EQ(gp.at("size_aa_plus_ma"), "NA");
  EXPECT_EQ(res.records[2].at("size_aa_plus_ma"), "NA");  // n = 4 admits no primorial
  const auto& big = res.records[3];
  EXPECT_EQ(big.at("n"), "2000");
  EXPECT_EQ(big.at("size_aa_plus_ma"), "LIMIT");
  EXPECT_TRUE(big.number("size_sum"));
}

TEST(Sweep, ByteIdenticalAcrossWorkerCounts) {
  auto cfg = config_from(kSmallSweep);
  std::string first;
  for (unsigned w : {1U, 4U, 16U}) {
    SweepOptions opt;
    opt.workers = w;
    std::ostringstream os;
    write_csv(os, run_sweep(cfg, opt).records);
    if (first.empty()) first = os.str();
    EXPECT_EQ(os.str(), first) << w;
  }
}

TEST(Sweep, ResumeFromRunLogMatchesUninterrupted) {
  auto cfg = config_from(kSmallSweep);
  std::ostringstream full;
  write_csv(full, run_sweep(cfg).records);

  auto log = scratch("run.log");
  SweepOptions opt;
  opt.run_log = log;
  opt.max_cells = 2;
  auto part = run_sweep(cfg, opt);
  EXPECT_FALSE(part.complete);
  EXPECT_EQ(part.computed, 2u);
  // a torn final line is discarded on replay
  std::ofstream(log, std::ios::app) << "cell\tap\t";
  opt.max_cells.reset();
  opt.workers = 4;
  auto rest = run_sweep(cfg, opt);
  ASSERT_TRUE(rest.complete);
  EXPECT_EQ(rest.replayed, 2u);
  EXPECT_EQ(rest.computed, 4u);
  std::ostringstream resumed;
  write_csv(resumed, rest.records);
  EXPECT_EQ(resumed.str(), full.str());

  auto other = config_from(std::string(kSmallSweep) + "\n[family gp]\nkind = geometric\n");
  EXPECT_EQ(kind_of([&] { run_sweep(other, opt); }), ErrorKind::InputFormat);
}

TEST(Fit, Examples) {
  auto exact = fit_points({{10, 100}, {100, 10000}, {1000, 1e6}});
  EXPECT_NEAR(exact.slope, 2.0, 1e-12);
  EXPECT_NEAR(exact.residual, 0.0, 1e-12);
  auto flat = fit_points({{2, 5}, {4, 5}, {8, 5}});
  EXPECT_NEAR(flat.slope, 0.0, 1e-12);
  EXPECT_NEAR(flat.intercept, std::log(5.0), 1e-12);
  EXPECT_EQ(kind_of([] { fit_points({{1, 1}, {2, 2}}); }), ErrorKind::InsufficientData);
  EXPECT_EQ(kind_of([] { fit_points({{1, 1}, {2, 0}, {3, 3}}); }), ErrorKind::InputFormat);
}

TEST(Fit, FromSweepRecords) {
  auto res = run_sweep(config_from(kSmallSweep));
  auto f = fit_exponent(res.records, "n", "size_sum", {.family = "ap"});
  EXPECT_EQ(f.points, 3u);
  EXPECT_GT(f.slope, 0.9);
  EXPECT_LT(f.slope, 1.1);
  EXPECT_EQ(kind_of([&] { fit_exponent(res.records, "n", "size_sum", {.family = "ap", .x_min = 8.0}); }),
            ErrorKind::InsufficientData);
  EXPECT_EQ(kind_of([&] { fit_exponent(res.records, "n", "y"); }), ErrorKind::InsufficientData);
}

TEST(Report, Formats) {
  auto records = run_sweep(config_from(kSmallSweep)).records;
  std::ostringstream csv, svg, text;
  emit_report(csv, records, ReportFormat::csv);
  std::size_t lines = 0;
  for (char c : csv.str()) lines += c == '\n';
  EXPECT_EQ(lines, 7u);
  emit_report(svg, records, report_format_from_string("svg_scatter"));
  std::size_t markers = 0;
  for (auto pos = svg.str().find("class=\"marker\""); pos != std::string::npos;
       pos = svg.str().find("class=\"marker\"", pos + 1))
    ++markers;
  EXPECT_EQ(markers, 6u);
  emit_report(text, records, ReportFormat::text);
  EXPECT_NE(text.str().find("6 records"), std::string::npos);
  EXPECT_EQ(kind_of([] {
              std::ostringstream os;
              emit_report(os, {}, ReportFormat::csv);
            }),
            ErrorKind::InsufficientData);
  EXPECT_EQ(kind_of([&] { emit_report_file("/nonexistent/dir/r.svg", records, ReportFormat::svg); }), ErrorKind::Io);
  auto p = scratch("report.csv");
  emit_report_file(p, records, ReportFormat::csv);
  EXPECT_EQ(slurp(p), csv.str());
}
