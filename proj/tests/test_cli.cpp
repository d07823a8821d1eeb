#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(SUMPROD_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path write_file(const std::string& name, const std::string& body) {
  auto dir = fs::temp_directory_path() / "sumprod_cli_tests";
  fs::create_directories(dir);
  auto p = dir / name;
  std::ofstream(p) << body;
  return p;
}

}  // namespace

TEST(Cli, MeasureAndEnergy) {
  auto s = write_file("a.txt", "1\n2\n4\n");
  auto r = run("measure --set " + s.string() + " --op ratio --print");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("size=5\n"), std::string::npos);
  EXPECT_NE(r.out.find("1/4\n"), std::string::npos);
  EXPECT_NE(run("measure --set " + s.string() + " --op aa+a").out.find("size=12\n"), std::string::npos);
  auto e = run("energy --set " + s.string() + " --kind multiplicative");
  EXPECT_EQ(e.code, 0);
  EXPECT_NE(e.out.find("energy=19\n"), std::string::npos);
}

TEST(Cli, SlopesAndCluster) {
  auto s = write_file("b.txt", "1\n2\n4\n");
  EXPECT_EQ(run("slopes --set " + s.string()).out, "1/4 1\n1/2 2\n1 3\n2 2\n4 1\n");
  EXPECT_NE(run("slopes --dyadic --set " + s.string()).out.find("tau=2\nmass=7\n"), std::string::npos);
  auto c = run("cluster --set " + s.string() + " --m 1");
  EXPECT_EQ(c.code, 0);
  EXPECT_NE(c.out.find(",26,6,"), std::string::npos);
  auto bad = run("cluster --set " + s.string() + " --m 2");
  EXPECT_EQ(bad.code, 1);
  EXPECT_TRUE(bad.out.empty());
}

TEST(Cli, Construct) {
  auto r = run("construct --n 100");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("q=6\n"), std::string::npos);
  EXPECT_NE(r.out.find("m=36\n"), std::string::npos);
  auto t = run("construct --n 5 --y 5 --theta 0.5 --no-measure --set-out " +
               (fs::temp_directory_path() / "sumprod_cli_tests" / "c.txt").string());
  EXPECT_EQ(t.code, 0);
  std::ifstream in(fs::temp_directory_path() / "sumprod_cli_tests" / "c.txt");
  std::string body((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(body, "2\n3\n4\n6\n8\n");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("construct --n 4").code, 1);
  EXPECT_EQ(run("measure --set /nonexistent.txt --op sum").code, 1);
  EXPECT_EQ(run("measure --op sum").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
  auto z = write_file("z.txt", "0\n1\n");
  EXPECT_EQ(run("measure --set " + z.string() + " --op ratio").code, 1);
  EXPECT_EQ(run("energy --set " + z.string() + " --kind multiplicative").code, 1);
  auto big = write_file("big.txt", [] {
    std::string s;
    for (int i = 1; i <= 3000; ++i) s += std::to_string(i * 7919) + "\n";
    return s;
  }());
  auto r = run("--budget-mib 1 measure --set " + big.string() + " --op prod --print");
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, SweepFitReport) {
  auto cfg = write_file("s.cfg", "[sweep]\nsizes = 4, 8, 16\nmeasurements = sum, aa_plus_a\n\n[family gp]\nkind = geometric\n");
  auto csv = fs::temp_directory_path() / "sumprod_cli_tests" / "s.csv";
  fs::remove(csv);
  EXPECT_EQ(run("sweep --config " + cfg.string() + " --out " + csv.string()).code, 0);
  auto f = run("fit --csv " + csv.string() + " --x n --y size_aa_plus_a");
  EXPECT_EQ(f.code, 0);
  EXPECT_NE(f.out.find("slope=2.0"), std::string::npos);
  auto svg = run("report --csv " + csv.string() + " --format svg");
  EXPECT_EQ(svg.code, 0);
  EXPECT_NE(svg.out.find("<svg"), std::string::npos);
  EXPECT_EQ(run("fit --csv " + csv.string() + " --x n --y size_sum --min 8").code, 1);
  EXPECT_EQ(run("report --csv " + csv.string() + " --format svg --out /nonexistent/dir/x.svg").code, 1);
}
