#include "sumprod/construction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sumprod/bitset.hpp"
#include "sumprod/error.hpp"
#include "sumprod/primes.hpp"

namespace sumprod {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

const std::vector<u64>& small_primes() {
  static const std::vector<u64> primes = primes_below(1000);
  return primes;
}

std::vector<u64> primes_for(u64 y) {
  if (y <= 1000) {
    const auto& all = small_primes();
    return {all.begin(), std::lower_bound(all.begin(), all.end(), y)};
  }
  return primes_below(y);
}

u64 primorial(const std::vector<u64>& primes) {
  u128 q = 1;
  for (auto p : primes) {
    q *= p;
    if (q * q > std::numeric_limits<u64>::max())
      throw Error(ErrorKind::ResourceLimit, "primorial squared exceeds 64 bits");
  }
  return static_cast<u64>(q);
}

u64 to_u64(const ExactScalar& x) { return static_cast<u64>(x.small_num()); }

void require_positive_integers(const FiniteSet& a, const char* what) {
  if (!a.is_positive() || !a.small_integers())
    throw Error(ErrorKind::InputFormat, std::string(what) + " needs a set of positive integers");
}

// f and g over one block x = 1..len (index x-1), by sieving each prime.
struct BlockValues {
  std::vector<std::uint8_t> f;
  std::vector<std::uint8_t> g;
};

BlockValues sieve_block(u64 len, const std::vector<u64>& primes) {
  BlockValues v{std::vector<std::uint8_t>(len, 0), std::vector<std::uint8_t>(len, 0)};
  for (auto p : primes) {
    for (u64 x = p; x <= len; x += p) {
      ++v.f[x - 1];
      ++v.g[x - 1];
    }
    if (p > len / p) continue;
    for (u64 x = p * p; x <= len; x += p * p) ++v.g[x - 1];
  }
  return v;
}

ExactScalar moment_product(const std::vector<u64>& primes) {
  ExactScalar prod(1);
  for (auto p : primes) {
    auto pp = static_cast<std::int64_t>(p * p);
    prod *= ExactScalar(pp + static_cast<std::int64_t>(p) + 2, pp);
  }
  return prod;
}

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// Maximal runs of consecutive integers, as (first, last).
std::vector<std::pair<u64, u64>> integer_runs(const FiniteSet& a) {
  std::vector<std::pair<u64, u64>> runs;
  for (const auto& x : a) {
    u64 v = to_u64(x);
    if (!runs.empty() && runs.back().second + 1 == v)
      runs.back().second = v;
    else
      runs.emplace_back(v, v);
  }
  return runs;
}

}  // namespace

double iterated_log(std::uint64_t y, LogBase base) {
  double v = static_cast<double>(y);
  return base == LogBase::natural ? std::log(std::log(v)) : std::log2(std::log2(v));
}

double selection_threshold(std::uint64_t y, LogBase base) {
  if (y < 3) return -std::numeric_limits<double>::infinity();
  double l = iterated_log(y, base);
  if (!(l > 0)) return -std::numeric_limits<double>::infinity();
  return l - 2.0 * std::sqrt(l);
}

double product_threshold(std::uint64_t y, LogBase base) { return 2.0 * selection_threshold(y, base); }

ConstructionParams params_for_bound(std::uint64_t n, std::uint64_t y, LogBase base) {
  ConstructionParams p;
  p.n = n;
  p.y = y;
  p.primes = primes_for(y);
  p.q = primorial(p.primes);
  p.m = p.q * p.q;
  p.log_base = base;
  p.theta = selection_threshold(y, base);
  return p;
}

ConstructionParams choose_parameters(std::uint64_t n, LogBase base) {
  u128 q = 1;
  u64 largest = 0;
  for (u64 p = 2;; p = next_prime(p)) {
    u128 next = q * p;
    if (next * next >= n) break;
    q = next;
    largest = p;
  }
  if (largest == 0)
    throw Error(ErrorKind::NoValidPrimorial, "no primorial q with q^2 < " + std::to_string(n));
  return params_for_bound(n, next_prime(largest), base);
}

unsigned f_value(std::uint64_t x, std::uint64_t y) { return count_prime_divisors(x, primes_for(y)); }

unsigned g_value(std::uint64_t x, std::uint64_t y) { return capped_valuation_sum(x, primes_for(y)); }

ConstructionReport construct_set(const ConstructionParams& params, std::optional<double> theta_override) {
  ConstructionReport rep;
  rep.params = params;
  if (theta_override) {
    rep.params.theta = *theta_override;
    rep.params.theta_overridden = true;
  }
  const double theta = rep.params.theta;
  const u64 n = params.n;
  const u64 limit = 3 * n;
  const auto& primes = rep.params.primes;

  std::vector<ExactScalar> elems;
  elems.reserve(n);
  for (u64 x = 1; x <= limit && elems.size() < n; ++x)
    if (static_cast<double>(count_prime_divisors(x, primes)) > theta) elems.push_back(static_cast<std::int64_t>(x));
  if (elems.size() < n)
    throw Error(ErrorKind::DensityFailure, "only " + std::to_string(elems.size()) + " qualifying integers in [1, " +
                                               std::to_string(limit) + "], need " + std::to_string(n));
  rep.within_3n = to_u64(elems.back()) <= limit;
  rep.a = FiniteSet::from_sorted_unique(std::move(elems));

  const u64 q = rep.params.q;
  bool ok = true;
  for (u64 start = 0; start + q <= limit; start += q) {
    u64 count = 0;
    for (u64 x = start + 1; x <= start + q; ++x) count += static_cast<double>(count_prime_divisors(x, primes)) > theta;
    if (2 * count < q) {
      ok = false;
      break;
    }
  }
  rep.block_density_ok = ok;
  return rep;
}

Measurement exact_measure(const FiniteSet& a, std::uint64_t m, const MeasureConfig& cfg) {
  require_positive_integers(a, "exact_measure");
  if (m == 0) throw Error(ErrorKind::InputFormat, "modulus must be positive");
  const u64 amax = to_u64(a.max());
  const u128 hi128 = static_cast<u128>(amax) * amax;
  const auto runs = integer_runs(a);
  const u128 bitset_bytes = (hi128 + 64) / 8;
  if (bitset_bytes > cfg.memory_budget_bytes)
    throw Error(ErrorKind::ResourceLimit, "indicator of AA needs " + std::to_string(static_cast<u64>(bitset_bytes)) +
                                              " bytes; use residue_profile instead");
  const u64 hi = static_cast<u64>(hi128);

  Bitset aa(hi + 1);
  std::vector<u64> vals;
  vals.reserve(a.size());
  for (const auto& x : a) vals.push_back(to_u64(x));
  for (std::size_t i = 0; i < vals.size(); ++i)
    for (std::size_t j = i; j < vals.size(); ++j) aa.set(vals[i] * vals[j]);

  Measurement out;
  out.size_aa = aa.count();

  // AA + mA splits by residue r of AA mod m: the class r contributes
  // |K_r + A| where K_r = {(x - r) / m : x in AA, x = r mod m}.
  const u64 classes = std::min<u64>(m, hi + 1);
  if (runs.size() == 1) {
    const u64 len = vals.size();
    std::vector<std::int64_t> last(classes, -1);
    u64 total = 0;
    aa.for_each_set([&](u64 x) {
      const u64 r = x % m;
      const auto k = static_cast<std::int64_t>(x / m);
      total += last[r] < 0 ? len : std::min<u64>(static_cast<u64>(k - last[r]), len);
      last[r] = k;
    });
    out.size_aa_plus_ma = total;
    return out;
  }

  const u128 extra = static_cast<u128>(out.size_aa) * 8 + static_cast<u128>(classes) * 8;
  if (bitset_bytes + extra > cfg.memory_budget_bytes)
    throw Error(ErrorKind::ResourceLimit, "residue buckets of AA exceed the memory budget");
  std::vector<u64> offset(classes + 1, 0);
  aa.for_each_set([&](u64 x) { ++offset[x % m + 1]; });
  for (u64 r = 0; r < classes; ++r) offset[r + 1] += offset[r];
  std::vector<u64> ks(out.size_aa);
  {
    std::vector<u64> fill(offset.begin(), offset.end() - 1);
    aa.for_each_set([&](u64 x) { ks[fill[x % m]++] = x / m; });
  }
  aa = Bitset();

  Bitset abits(amax + 1);
  for (auto v : vals) abits.set(v);
  u64 total = 0;
  for (u64 r = 0; r < classes; ++r) {
    const u64 b = offset[r];
    const u64 e = offset[r + 1];
    if (b == e) continue;
    const u64 kmax = ks[e - 1];
    Bitset sum(kmax + amax + 1);
    const u64 k_cost = (e - b) * ((amax + 64) / 64);
    const u64 a_cost = vals.size() * ((kmax + 64) / 64);
    if (k_cost <= a_cost) {
      for (u64 i = b; i < e; ++i) sum.or_shifted(abits, ks[i]);
    } else {
      Bitset kbits(kmax + 1);
      for (u64 i = b; i < e; ++i) kbits.set(ks[i]);
      for (auto v : vals) sum.or_shifted(kbits, v);
    }
    total += sum.count();
  }
  out.size_aa_plus_ma = total;
  return out;
}

ResidueProfile residue_profile(const FiniteSet& a, std::uint64_t modulus) {
  require_positive_integers(a, "residue_profile");
  if (modulus == 0) throw Error(ErrorKind::InputFormat, "modulus must be positive");
  Bitset seen(modulus);
  std::vector<u64> res;
  for (const auto& x : a) {
    u64 r = to_u64(x) % modulus;
    if (!seen.test(r)) {
      seen.set(r);
      res.push_back(r);
    }
  }
  Bitset hit(modulus);
  for (std::size_t i = 0; i < res.size(); ++i)
    for (std::size_t j = i; j < res.size(); ++j) hit.set(static_cast<u64>(static_cast<u128>(res[i]) * res[j] % modulus));
  ResidueProfile out;
  out.residues_hit = hit.count();
  out.proportion = ExactScalar(static_cast<std::int64_t>(out.residues_hit), static_cast<std::int64_t>(modulus));
  return out;
}

void measure_construction(ConstructionReport& report, const MeasureConfig& cfg) {
  if (!report.a) throw Error(ErrorKind::InputFormat, "report has no set to measure");
  const auto& a = *report.a;
  const u64 m = report.params.m;
  const u64 n = report.params.n;
  auto meas = exact_measure(a, m, cfg);
  auto prof = residue_profile(a, m);
  report.size_aa = meas.size_aa;
  report.size_aa_plus_ma = meas.size_aa_plus_ma;
  report.residues_hit = prof.residues_hit;
  report.normalized = ExactScalar(static_cast<std::int64_t>(meas.size_aa_plus_ma), static_cast<std::int64_t>(n * n));

  const u128 amax = to_u64(a.max());
  const u128 top = amax * amax + static_cast<u128>(m) * amax;
  const u128 ten_n2 = static_cast<u128>(10) * n * n;
  report.within_10n2 = top <= ten_n2;
  const u128 per_class = (ten_n2 + m - 1) / m;
  report.residue_bound_ok = static_cast<u128>(meas.size_aa_plus_ma) <= per_class * prof.residues_hit;
}

std::string to_key_value(const ConstructionReport& r) {
  std::ostringstream os;
  auto flag = [](bool b) { return b ? "true" : "false"; };
  const auto& p = r.params;
  os << "n=" << p.n << '\n';
  os << "y=" << p.y << '\n';
  os << "q=" << p.q << '\n';
  os << "m=" << p.m << '\n';
  os << "primes=";
  for (std::size_t i = 0; i < p.primes.size(); ++i) os << (i ? "," : "") << p.primes[i];
  os << '\n';
  os << "theta=" << fmt_double(p.theta) << '\n';
  os << "theta_overridden=" << flag(p.theta_overridden) << '\n';
  os << "log_base=" << (p.log_base == LogBase::natural ? "e" : "2") << '\n';
  if (r.a) {
    os << "size_a=" << r.a->size() << '\n';
    os << "min_a=" << r.a->min() << '\n';
    os << "max_a=" << r.a->max() << '\n';
  }
  os << "within_3n=" << flag(r.within_3n) << '\n';
  os << "block_density_ok=" << flag(r.block_density_ok) << '\n';
  if (r.size_aa) os << "size_aa=" << *r.size_aa << '\n';
  if (r.size_aa_plus_ma) os << "size_aa_plus_ma=" << *r.size_aa_plus_ma << '\n';
  if (r.residues_hit) os << "residues_hit=" << *r.residues_hit << '\n';
  if (r.normalized) {
    os << "normalized=" << *r.normalized << '\n';
    os << "normalized_approx=" << fmt_double(r.normalized->to_double()) << '\n';
  }
  if (r.within_10n2) os << "within_10n2=" << flag(*r.within_10n2) << '\n';
  if (r.residue_bound_ok) os << "residue_bound_ok=" << flag(*r.residue_bound_ok) << '\n';
  os << "decay_exponent_label_a=2ln2-1\n";
  os << "decay_exponent_label_b=1-2log2\n";
  return os.str();
}

MomentCheck exponential_moment_check(std::uint64_t y, std::uint64_t max_block) {
  const auto primes = primes_for(y);
  const u64 q = primorial(primes);
  const u64 len = q * q;
  if (len > max_block)
    throw Error(ErrorKind::ResourceLimit, "block of length " + std::to_string(len) + " exceeds the enumeration budget");
  const auto block = sieve_block(len, primes);
  u64 sum = 0;
  for (auto g : block.g) sum += u64{1} << g;

  MomentCheck out;
  out.product_formula = moment_product(primes);
  out.block_average = ExactScalar(static_cast<std::int64_t>(sum), static_cast<std::int64_t>(len));
  out.equal = out.product_formula == out.block_average;
  return out;
}

MarkovCheck markov_residue_bound(std::uint64_t y, const MarkovOptions& opt) {
  const auto primes = primes_for(y);
  const u64 q = primorial(primes);
  const u64 len = q * q;
  if (len > opt.max_block)
    throw Error(ErrorKind::ResourceLimit, "block of length " + std::to_string(len) + " exceeds the enumeration budget");
  const auto block = sieve_block(len, primes);

  MarkovCheck out;
  out.y = y;
  out.modulus = len;
  out.theta = opt.theta_override ? *opt.theta_override : selection_threshold(y, opt.log_base);
  out.threshold = 2.0 * out.theta;
  for (auto g : block.g) out.classes_above += static_cast<double>(g) > out.threshold;

  // g takes integer values >= 0, so g > T means g >= min_exceeding.
  const double t = out.threshold;
  out.min_exceeding = std::isfinite(t) ? std::max<std::int64_t>(static_cast<std::int64_t>(std::floor(t)) + 1, 0) : 0;
  out.markov_bound = ExactScalar(static_cast<std::int64_t>(len)) * moment_product(primes) /
                     ExactScalar(std::int64_t{1} << out.min_exceeding);
  out.markov_holds = ExactScalar(static_cast<std::int64_t>(out.classes_above)) <= out.markov_bound;

  std::vector<u64> qualifying;
  for (u64 x = 1; x <= len; ++x)
    if (static_cast<double>(block.f[x - 1]) > out.theta) qualifying.push_back(x);
  out.qualifying_residues = qualifying.size();
  if (qualifying.empty()) {
    out.residues_hit = 0;
    out.inclusion_holds = true;
    return out;
  }

  unsigned min_g = std::numeric_limits<unsigned>::max();
  if (len <= opt.residue_enumeration_limit) {
    Bitset hit(len);
    for (std::size_t i = 0; i < qualifying.size(); ++i)
      for (std::size_t j = i; j < qualifying.size(); ++j)
        hit.set(static_cast<u64>(static_cast<u128>(qualifying[i]) * qualifying[j] % len));
    out.residues_hit = hit.count();
    hit.for_each_set([&](u64 r) { min_g = std::min<unsigned>(min_g, block.g[(r == 0 ? len : r) - 1]); });
  } else {
    // Capped valuation profiles in {0,1,2}^k, encoded base 3.
    const std::size_t k = primes.size();
    u64 states = 1;
    for (std::size_t i = 0; i < k; ++i) states *= 3;
    std::vector<bool> present(states, false);
    for (auto x : qualifying) {
      u64 code = 0;
      for (std::size_t i = k; i-- > 0;) {
        const u64 p = primes[i];
        const u64 v = x % p != 0 ? 0 : (x % (p * p) != 0 ? 1 : 2);
        code = code * 3 + v;
      }
      present[code] = true;
    }
    std::vector<u64> codes;
    for (u64 c = 0; c < states; ++c)
      if (present[c]) codes.push_back(c);
    for (std::size_t i = 0; i < codes.size(); ++i) {
      for (std::size_t j = i; j < codes.size(); ++j) {
        u64 u = codes[i], w = codes[j];
        unsigned g = 0;
        for (std::size_t d = 0; d < k; ++d, u /= 3, w /= 3) g += static_cast<unsigned>(std::min<u64>(u % 3 + w % 3, 2));
        min_g = std::min(min_g, g);
      }
    }
  }
  out.min_g_on_aa = min_g;
  out.inclusion_holds = static_cast<double>(min_g) > out.threshold;
  return out;
}

}  // namespace sumprod
