#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sumprod/construction.hpp"
#include "sumprod/driver/csv.hpp"
#include "sumprod/driver/fit.hpp"
#include "sumprod/driver/report.hpp"
#include "sumprod/driver/sweep.hpp"
#include "sumprod/error.hpp"
#include "sumprod/set_io.hpp"
#include "sumprod/set_ops.hpp"
#include "sumprod/slopes.hpp"

namespace {

using namespace sumprod;

constexpr int kExitInput = 1;
constexpr int kExitResource = 2;

std::uint64_t budget_bytes(std::uint64_t mib) { return mib << 20; }

OpConfig ops_from(std::uint64_t mib, unsigned workers) {
  OpConfig cfg;
  cfg.memory_budget_bytes = budget_bytes(mib);
  cfg.workers = std::max(1U, workers);
  return cfg;
}

void print_set(const FiniteSet& s) { write_set(std::cout, s); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact sum-product workbench"};
  app.require_subcommand(1);
  std::uint64_t budget_mib = 8192;
  unsigned workers = 1;
  app.add_option("--budget-mib", budget_mib, "Memory budget per operation in MiB")->capture_default_str();
  app.add_option("--workers", workers, "Worker threads")->capture_default_str();

  // construct
  auto* construct = app.add_subcommand("construct", "Build the primorial construction and measure |AA+mA|");
  std::uint64_t c_n = 0;
  std::optional<double> c_theta;
  std::optional<std::uint64_t> c_y;
  std::string c_log = "e";
  bool c_skip_measure = false;
  std::string c_set_out;
  construct->add_option("--n", c_n, "Number of elements")->required();
  construct->add_option("--theta", c_theta, "Override the selection threshold");
  construct->add_option("--y", c_y, "Explicit prime bound (skips the q^2 < n rule)");
  construct->add_option("--log-base", c_log, "Base of log log y in the threshold")->check(CLI::IsMember({"e", "2"}));
  construct->add_flag("--no-measure", c_skip_measure, "Skip |AA| and |AA+mA|");
  construct->add_option("--set-out", c_set_out, "Write A to this file");

  // measure
  auto* measure = app.add_subcommand("measure", "Size of a sumset, product set or composite");
  std::string m_set, m_b, m_c, m_op;
  bool m_print = false;
  measure->add_option("--set", m_set, "Set file A")->required();
  measure->add_option("--op", m_op, "Operation")->required()->check(
      CLI::IsMember({"sum", "prod", "ratio", "diff", "aa+a", "ab+c"}));
  measure->add_option("--b", m_b, "Set file B (defaults to A)");
  measure->add_option("--c", m_c, "Set file C (defaults to A)");
  measure->add_flag("--print", m_print, "Also print the elements");

  // energy
  auto* energy_cmd = app.add_subcommand("energy", "Additive or multiplicative energy");
  std::string e_set, e_b, e_kind = "additive";
  energy_cmd->add_option("--set", e_set, "Set file A")->required();
  energy_cmd->add_option("--b", e_b, "Set file B (defaults to A, and then the lower bounds are printed)");
  energy_cmd->add_option("--kind", e_kind, "Energy kind")->check(CLI::IsMember({"additive", "multiplicative"}));

  // slopes
  auto* slopes = app.add_subcommand("slopes", "Slopes of A x A with the number of points on each line");
  std::string s_set;
  bool s_dyadic = false;
  slopes->add_option("--set", s_set, "Set file A")->required();
  slopes->add_flag("--dyadic", s_dyadic, "Print the selected dyadic level instead");

  // cluster
  auto* cluster = app.add_subcommand("cluster", "Point counts for every full cluster of 2M slopes");
  std::string k_set;
  std::uint64_t k_m = 0;
  bool k_refined = false;
  cluster->add_option("--set", k_set, "Set file A")->required();
  cluster->add_option("--m", k_m, "Cluster half-width M")->required();
  cluster->add_flag("--refined", k_refined, "Cluster the refined slope set");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Measure every (family, n) cell of a config");
  std::string w_config, w_out, w_log;
  std::optional<std::uint64_t> w_max;
  sweep->add_option("--config", w_config, "Sweep config")->required();
  sweep->add_option("--out", w_out, "Output CSV")->required();
  sweep->add_option("--run-log", w_log, "Append-only log for resuming");
  sweep->add_option("--max-cells", w_max, "Stop after this many new cells");

  // fit
  auto* fit = app.add_subcommand("fit", "Least-squares exponent of y against x on log scales");
  std::string f_csv, f_x, f_y;
  driver::FitOptions f_opt;
  fit->add_option("--csv", f_csv, "Sweep CSV")->required();
  fit->add_option("--x", f_x, "x column")->required();
  fit->add_option("--y", f_y, "y column")->required();
  fit->add_option("--family", f_opt.family, "Only rows of this family");
  fit->add_option("--min", f_opt.x_min, "Smallest x used");
  fit->add_option("--max", f_opt.x_max, "Largest x used");

  // report
  auto* report = app.add_subcommand("report", "Render a sweep CSV");
  std::string r_csv, r_format, r_out;
  driver::ReportOptions r_opt;
  report->add_option("--csv", r_csv, "Sweep CSV")->required();
  report->add_option("--format", r_format, "Output format")->required()->check(
      CLI::IsMember({"csv", "svg", "svg_scatter", "text"}));
  report->add_option("--out", r_out, "Output file (stdout when absent)");
  report->add_option("--x", r_opt.x_column, "x column of the scatter plot")->capture_default_str();
  report->add_option("--y", r_opt.y_column, "y column of the scatter plot")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    const OpConfig ops = ops_from(budget_mib, workers);

    if (*construct) {
      const LogBase base = c_log == "2" ? LogBase::two : LogBase::natural;
      auto params = c_y ? params_for_bound(c_n, *c_y, base) : choose_parameters(c_n, base);
      auto rep = construct_set(params, c_theta);
      if (!c_skip_measure) {
        MeasureConfig mc;
        mc.memory_budget_bytes = ops.memory_budget_bytes;
        measure_construction(rep, mc);
      }
      if (!c_set_out.empty()) write_set_file(c_set_out, *rep.a);
      std::cout << to_key_value(rep);
    } else if (*measure) {
      const FiniteSet a = read_set_file(m_set);
      const FiniteSet b = m_b.empty() ? a : read_set_file(m_b);
      const FiniteSet c = m_c.empty() ? a : read_set_file(m_c);
      std::optional<FiniteSet> result;
      std::uint64_t size = 0;
      if (m_op == "aa+a" || m_op == "ab+c") {
        const bool self = m_op == "aa+a";
        auto res = combine(a, self ? a : b, self ? a : c, ops);
        size = res.size;
        result = std::move(res.set);
      } else {
        const BinaryOp op = m_op == "sum"    ? BinaryOp::sum
                            : m_op == "diff" ? BinaryOp::difference
                            : m_op == "prod" ? BinaryOp::product
                                             : BinaryOp::ratio;
        if (m_print) {
          result = binary_op(op, a, b, ops);
          size = result->size();
        } else {
          size = binary_op_size(op, a, b, ops);
        }
      }
      std::cout << "op=" << m_op << "\nsize=" << size << '\n';
      if (m_print && result) print_set(*result);
      if (m_print && !result) std::cerr << "result exceeds the memory budget; only its size was computed\n";
    } else if (*energy_cmd) {
      const FiniteSet a = read_set_file(e_set);
      const EnergyKind kind = e_kind == "additive" ? EnergyKind::additive : EnergyKind::multiplicative;
      if (!e_b.empty()) {
        std::cout << "energy=" << energy(kind, a, read_set_file(e_b), ops) << '\n';
      } else {
        std::cout << "energy=" << energy(kind, a, a, ops) << '\n';
        auto rep = energy_bounds_report(a, ops);
        std::cout << "size_a=" << rep.size_a << "\ne_plus=" << rep.e_plus << '\n';
        if (rep.e_mult) std::cout << "e_mult=" << *rep.e_mult << '\n';
        std::cout << "k=" << rep.k << "\nsum_bound=" << rep.sum_bound << "\ndifference_bound=" << rep.difference_bound
                  << '\n';
        if (rep.product_bound) std::cout << "product_bound=" << *rep.product_bound << '\n';
        if (rep.ratio_bound) std::cout << "ratio_bound=" << *rep.ratio_bound << '\n';
        std::cout << "bounds_hold=" << (rep.bounds_hold() ? "true" : "false") << '\n';
      }
    } else if (*slopes) {
      const auto d = slope_decomposition(read_set_file(s_set));
      if (!s_dyadic) {
        write_decomposition(std::cout, d);
      } else {
        DyadicOptions dopt;
        dopt.ops = ops;
        const auto lvl = dyadic_select(d, dopt);
        std::cout << "tau=" << lvl.tau << "\nmass=" << lvl.mass << "\nslopes=" << lvl.slopes.size()
                  << "\nguarantee_holds=" << (lvl.guarantee_holds ? "true" : "false") << '\n';
        for (auto [tau, mass] : lvl.level_masses) std::cout << "level " << tau << ' ' << mass << '\n';
        if (lvl.refined) std::cout << "t0=" << lvl.refined->t0 << "\nrefined_slopes=" << lvl.refined->slopes.size() << '\n';
      }
    } else if (*cluster) {
      const auto d = slope_decomposition(read_set_file(k_set));
      ClusterOptions copt;
      copt.use_refined = k_refined;
      copt.ops = ops;
      const auto diags = cluster_mu(d, k_m, copt);
      std::cout << "cluster,m,lambda_low,lambda_high,tau,mu_actual,main_term,collision_sum,holds\n";
      for (const auto& c : diags)
        std::cout << c.cluster_index << ',' << c.m << ',' << c.lambda_low << ',' << c.lambda_high << ',' << c.tau << ','
                  << c.mu_actual << ',' << c.main_term << ',' << c.collision_sum << ',' << (c.holds ? "true" : "false")
                  << '\n';
    } else if (*sweep) {
      const auto cfg = driver::load_config(w_config);
      driver::SweepOptions opt;
      opt.workers = app.count("--workers") ? workers : 0;
      if (!w_log.empty()) opt.run_log = w_log;
      opt.max_cells = w_max;
      const auto res = driver::run_sweep(cfg, opt);
      if (!res.complete) {
        std::cerr << "stopped after " << res.computed << " new cells; " << w_out << " not written\n";
        return 0;
      }
      driver::write_csv_file(w_out, res.records);
      std::cerr << res.records.size() << " rows (" << res.computed << " computed, " << res.replayed << " replayed)\n";
    } else if (*fit) {
      const auto r = driver::fit_exponent(driver::read_csv_file(f_csv), f_x, f_y, f_opt);
      std::printf("slope=%.6f\nintercept=%.6f\nresidual=%.6g\npoints=%zu\n", r.slope, r.intercept, r.residual, r.points);
    } else if (*report) {
      const auto records = driver::read_csv_file(r_csv);
      const auto format = driver::report_format_from_string(r_format);
      if (r_out.empty())
        driver::emit_report(std::cout, records, format, r_opt);
      else
        driver::emit_report_file(r_out, records, format, r_opt);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::ResourceLimit ? kExitResource : kExitInput;
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory\n";
    return kExitResource;
  }
  return 0;
}
