#include "sumprod/driver/sweep.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "sumprod/construction.hpp"
#include "sumprod/error.hpp"
#include "sumprod/set_ops.hpp"

namespace sumprod::driver {

namespace {

constexpr std::string_view kLogMagic = "sweep-log v1 ";

template <class F>
std::string guarded(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ResourceLimit) return std::string(kLimit);
    throw;
  }
}

struct Cell {
  const FamilySpec* family;
  std::uint64_t n;
};

class RunLog {
 public:
  RunLog(const std::filesystem::path& path, const std::string& fingerprint) : path_(path) {
    const std::string header = std::string(kLogMagic) + fingerprint;
    bool fresh = true;
    {
      std::ifstream in(path);
      std::string line;
      if (in && std::getline(in, line)) {
        if (line != header)
          throw Error(ErrorKind::InputFormat, path.string() + ": run log belongs to a different configuration");
        fresh = false;
        while (std::getline(in, line)) {
          if (in.eof()) break;  // no trailing newline: partial record
          replay(line);
        }
      }
    }
    fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | (fresh ? O_TRUNC : O_APPEND), 0644);
    if (fd_ < 0) throw Error(ErrorKind::Io, "cannot open run log " + path.string());
    if (fresh) {
      append_raw(header + "\n");
    } else {
      truncate_partial();
    }
  }
  ~RunLog() {
    if (fd_ >= 0) ::close(fd_);
  }
  RunLog(const RunLog&) = delete;
  RunLog& operator=(const RunLog&) = delete;

  const std::map<std::pair<std::string, std::uint64_t>, SweepRecord>& done() const { return done_; }

  void append(const SweepRecord& r) {
    std::lock_guard lock(mu_);
    append_raw("cell\t" + r.at("family") + "\t" + r.at("n") + "\t" + to_csv_line(r) + "\n");
  }

 private:
  void replay(const std::string& line) {
    // cell <family> <n> <csv>
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (int i = 0; i < 3; ++i) {
      auto tab = line.find('\t', start);
      if (tab == std::string::npos) return;
      parts.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    if (parts[0] != "cell") return;
    SweepRecord r;
    try {
      r = parse_csv_line(line.substr(start));
    } catch (const Error&) {
      return;
    }
    if (r.at("family") != parts[1] || r.at("n") != parts[2]) return;
    done_[{parts[1], std::stoull(parts[2])}] = std::move(r);
  }

  // Drop an unterminated final line so that appends start on a fresh line.
  void truncate_partial() {
    std::ifstream in(path_, std::ios::binary);
    std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (!all.empty() && all.back() != '\n') {
      auto keep = all.rfind('\n');
      if (::ftruncate(fd_, static_cast<off_t>(keep == std::string::npos ? 0 : keep + 1)) != 0)
        throw Error(ErrorKind::Io, "cannot repair run log " + path_.string());
    }
  }

  void append_raw(const std::string& s) {
    const char* p = s.data();
    std::size_t left = s.size();
    while (left > 0) {
      auto w = ::write(fd_, p, left);
      if (w <= 0) throw Error(ErrorKind::Io, "cannot append to run log " + path_.string());
      p += w;
      left -= static_cast<std::size_t>(w);
    }
    if (::fsync(fd_) != 0) throw Error(ErrorKind::Io, "fsync failed for run log " + path_.string());
  }

  std::filesystem::path path_;
  int fd_ = -1;
  std::mutex mu_;
  std::map<std::pair<std::string, std::uint64_t>, SweepRecord> done_;
};

}  // namespace

std::string config_fingerprint(const SweepConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_text(cfg)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

SweepRecord measure_cell(const SweepConfig& cfg, const FamilySpec& family, std::uint64_t n) {
  const auto t0 = std::chrono::steady_clock::now();
  SweepRecord r;
  r.at("family") = family.id;
  r.at("kind") = std::string(to_string(family.kind));
  r.at("n") = std::to_string(n);

  OpConfig ops;
  ops.memory_budget_bytes = cfg.budget_mib << 20;
  const FiniteSet a = generate_family(family, n);
  auto num = [](std::uint64_t v) { return std::to_string(v); };

  if (cfg.measures(Measure::sum)) r.at("size_sum") = guarded([&] { return num(binary_op_size(BinaryOp::sum, a, a, ops)); });
  if (cfg.measures(Measure::product))
    r.at("size_prod") = guarded([&] { return num(binary_op_size(BinaryOp::product, a, a, ops)); });
  if (cfg.measures(Measure::ratio) && !a.contains_zero())
    r.at("size_ratio") = guarded([&] { return num(binary_op_size(BinaryOp::ratio, a, a, ops)); });
  if (cfg.measures(Measure::aa_plus_a))
    r.at("size_aa_plus_a") = guarded([&] { return num(combine_size(a, a, a, ops)); });
  if (cfg.measures(Measure::e_plus))
    r.at("e_plus") = guarded([&] { return num(energy(EnergyKind::additive, a, a, ops)); });
  if (cfg.measures(Measure::e_mult) && !a.contains_zero())
    r.at("e_mult") = guarded([&] { return num(energy(EnergyKind::multiplicative, a, a, ops)); });
  const bool positive_integers = a.is_positive() && a.small_integers();
  if (cfg.measures(Measure::construction) && positive_integers && n >= 5) {
    const auto params = choose_parameters(n);
    r.at("y") = num(params.y);
    r.at("q") = num(params.q);
    r.at("m") = num(params.m);
    MeasureConfig mc;
    mc.memory_budget_bytes = ops.memory_budget_bytes;
    r.at("size_aa_plus_ma") = guarded([&] { return num(exact_measure(a, params.m, mc).size_aa_plus_ma); });
    r.at("residues_hit") = num(residue_profile(a, params.m).residues_hit);
  }
  if (cfg.timing) {
    const auto dt = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", dt);
    r.at("wall_ms") = buf;
  }
  return r;
}

SweepResult run_sweep(const SweepConfig& cfg, const SweepOptions& opt) {
  std::vector<Cell> cells;
  for (const auto& f : cfg.families)
    for (auto n : cfg.sizes_for(f)) cells.push_back({&f, n});

  std::optional<RunLog> log;
  if (opt.run_log) log.emplace(*opt.run_log, config_fingerprint(cfg));

  SweepResult res;
  std::vector<std::optional<SweepRecord>> rows(cells.size());
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (log) {
      auto it = log->done().find({cells[i].family->id, cells[i].n});
      if (it != log->done().end()) {
        rows[i] = it->second;
        ++res.replayed;
        continue;
      }
    }
    todo.push_back(i);
  }

  const std::uint64_t cap = opt.max_cells ? *opt.max_cells : todo.size();
  std::atomic<std::size_t> next{0};
  std::atomic<std::uint64_t> claimed{0};
  std::mutex err_mu;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= todo.size()) return;
      if (claimed.fetch_add(1) >= cap) return;
      {
        std::lock_guard lock(err_mu);
        if (first_error) return;
      }
      const auto& c = cells[todo[k]];
      try {
        rows[todo[k]] = measure_cell(cfg, *c.family, c.n);
        if (log) log->append(*rows[todo[k]]);
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  const unsigned workers = std::max(1U, opt.workers ? opt.workers : cfg.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  res.complete = true;
  for (auto& r : rows) {
    if (!r) {
      res.complete = false;
      continue;
    }
    res.records.push_back(std::move(*r));
  }
  res.computed = res.records.size() - res.replayed;
  return res;
}

}  // namespace sumprod::driver
