#include "bv/arith_tables.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bv/kahan.hpp"
#include "bv/parallel.hpp"

namespace bv {

namespace {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

std::vector<std::uint32_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint32_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t p = 2; p <= limit; ++p) {
    if (composite[p]) continue;
    primes.push_back(static_cast<std::uint32_t>(p));
    for (std::uint64_t m = p * p; m <= limit; m += p) composite[m] = true;
  }
  return primes;
}

double LambdaTable::lambda(std::uint64_t n) const {
  check_range(n);
  return prime_[n] ? std::log(static_cast<double>(prime_[n])) : 0.0;
}

double LambdaTable::psi(double y) const {
  if (y < 0.0 || y > static_cast<double>(x_max_))
    throw std::out_of_range("psi: y outside table range");
  const auto n = static_cast<std::uint64_t>(std::floor(y));
  return n < 2 ? 0.0 : psi_[n];
}

std::span<const PrimePower> LambdaTable::prime_powers_up_to(double bound) const {
  if (bound < 2.0) return {};
  auto end = std::upper_bound(powers_.begin(), powers_.end(), bound,
                              [](double b, const PrimePower& pp) {
                                return b < static_cast<double>(pp.n);
                              });
  return {powers_.data(), static_cast<std::size_t>(end - powers_.begin())};
}

double LambdaTable::psi_progression(double y, std::uint64_t q, std::int64_t a) const {
  if (q == 0) throw std::invalid_argument("psi_progression: q must be positive");
  if (y < 0.0 || y > static_cast<double>(x_max_))
    throw std::out_of_range("psi_progression: y outside table range");
  const std::uint64_t r = static_cast<std::uint64_t>(((a % static_cast<std::int64_t>(q)) +
                                                      static_cast<std::int64_t>(q)) %
                                                     static_cast<std::int64_t>(q));
  KahanSum acc;
  for (const PrimePower& pp : prime_powers_up_to(y))
    if (pp.n % q == r) acc.add(pp.log_p);
  return acc.value();
}

PiCounts LambdaTable::pi_counts(double y, std::uint64_t q, std::int64_t a) const {
  if (y < 2.0) throw std::invalid_argument("pi_counts: requires y >= 2");
  if (q == 0) throw std::invalid_argument("pi_counts: q must be positive");
  if (y > static_cast<double>(x_max_))
    throw std::out_of_range("pi_counts: y outside table range");
  const std::uint64_t r = static_cast<std::uint64_t>(((a % static_cast<std::int64_t>(q)) +
                                                      static_cast<std::int64_t>(q)) %
                                                     static_cast<std::int64_t>(q));
  double pi = 0.0, pi_prog = 0.0;
  KahanSum pi1, pi1_prog;
  for (const PrimePower& pp : prime_powers_up_to(y)) {
    const double w = 1.0 / pp.k;
    pi1.add(w);
    if (pp.k == 1) pi += 1.0;
    if (pp.n % q == r) {
      pi1_prog.add(w);
      if (pp.k == 1) pi_prog += 1.0;
    }
  }
  return {pi, pi_prog, pi1.value(), pi1_prog.value()};
}

LambdaTable build_lambda_table(std::uint64_t x_max, const SieveOptions& options) {
  if (x_max < 2) throw std::invalid_argument("build_lambda_table: x_max must be >= 2");
  if (x_max >= std::numeric_limits<std::uint32_t>::max())
    throw BudgetError("build_lambda_table: x_max beyond 32-bit sieve range");

  // Rough upper bound on the table footprint; the prime-power list is below
  // 1.3 x / log x entries for x >= 17.
  const double lx = std::log(static_cast<double>(x_max));
  const auto pp_estimate =
      static_cast<std::uint64_t>(1.3 * static_cast<double>(x_max) / std::max(1.0, lx)) + 64;
  const std::uint64_t bytes = (x_max + 1) * (sizeof(std::uint32_t) + sizeof(std::uint8_t) +
                                             sizeof(double)) +
                              pp_estimate * sizeof(PrimePower) + options.segment_length;
  if (bytes > options.memory_budget_bytes)
    throw BudgetError("build_lambda_table: memory budget exceeded");

  LambdaTable table;
  table.x_max_ = x_max;
  table.prime_.assign(x_max + 1, 0);
  table.exponent_.assign(x_max + 1, 0);
  table.psi_.assign(x_max + 1, 0.0);

  const std::vector<std::uint32_t> base = primes_up_to(isqrt(x_max));

  // Segmented primality sieve; segments write disjoint index ranges, so they
  // can run in parallel and the result is independent of scheduling.
  const std::uint64_t seg_len = std::max<std::uint64_t>(options.segment_length, 64);
  const std::int64_t seg_count =
      static_cast<std::int64_t>((x_max - 1) / seg_len) + 1;  // covers [2, x_max]
  std::uint32_t* prime_ptr = table.prime_.data();
  std::uint8_t* exp_ptr = table.exponent_.data();
  parallel_for(options.threads, seg_count, [&](std::int64_t si) {
    const std::uint64_t lo = 2 + static_cast<std::uint64_t>(si) * seg_len;
    const std::uint64_t hi = std::min(x_max, lo + seg_len - 1);
    std::vector<bool> composite(hi - lo + 1, false);
    for (std::uint32_t p : base) {
      const std::uint64_t p64 = p;
      std::uint64_t start = std::max(p64 * p64, ((lo + p64 - 1) / p64) * p64);
      for (std::uint64_t m = start; m <= hi; m += p64) composite[m - lo] = true;
    }
    for (std::uint64_t n = lo; n <= hi; ++n) {
      if (!composite[n - lo]) {
        prime_ptr[n] = static_cast<std::uint32_t>(n);
        exp_ptr[n] = 1;
      }
    }
  });

  // Proper prime powers p^k, k >= 2: only p <= sqrt(x_max) can occur.
  for (std::uint32_t p : base) {
    std::uint64_t pk = static_cast<std::uint64_t>(p) * p;
    std::uint8_t k = 2;
    while (pk <= x_max) {
      table.prime_[pk] = p;
      table.exponent_[pk] = k;
      if (pk > x_max / p) break;
      pk *= p;
      ++k;
    }
  }

  // Cumulative psi and the flattened prime-power list, in index order.
  table.powers_.reserve(pp_estimate);
  KahanSum acc;
  for (std::uint64_t n = 2; n <= x_max; ++n) {
    if (table.prime_[n]) {
      const double lp = std::log(static_cast<double>(table.prime_[n]));
      acc.add(lp);
      table.powers_.push_back({n, lp, table.prime_[n], table.exponent_[n]});
    }
    table.psi_[n] = acc.value();
  }
  return table;
}

MoebiusTable::MoebiusTable(std::uint64_t limit) : limit_(limit) {
  if (limit < 1) throw std::invalid_argument("MoebiusTable: limit must be >= 1");
  mu_.assign(limit + 1, 1);
  mu_[0] = 0;
  // Linear sieve over smallest prime factors.
  std::vector<std::uint32_t> spf(limit + 1, 0);
  std::vector<std::uint32_t> primes;
  for (std::uint64_t n = 2; n <= limit; ++n) {
    if (spf[n] == 0) {
      spf[n] = static_cast<std::uint32_t>(n);
      primes.push_back(static_cast<std::uint32_t>(n));
      mu_[n] = -1;
    }
    for (std::uint32_t p : primes) {
      if (p > spf[n]) break;
      const std::uint64_t np = n * p;
      if (np > limit) break;
      spf[np] = p;
      mu_[np] = (p == spf[n]) ? 0 : static_cast<std::int8_t>(-mu_[n]);
    }
  }
}

int b_coefficient(std::uint64_t k, double V, const MoebiusTable& mobius) {
  if (k == 0) throw std::invalid_argument("b_coefficient: k must be positive");
  if (V < 1.0) throw std::invalid_argument("b_coefficient: V must be >= 1");
  const auto vcap = static_cast<std::uint64_t>(std::floor(V));
  if (mobius.limit() < std::min(k, vcap))
    throw std::invalid_argument("b_coefficient: Moebius table too small");
  int sum = 0;
  for (std::uint64_t d = 1; d * d <= k; ++d) {
    if (k % d != 0) continue;
    const std::uint64_t e = k / d;
    if (static_cast<double>(d) <= V) sum += mobius.mu(d);
    if (e != d && static_cast<double>(e) <= V) sum += mobius.mu(e);
  }
  return sum;
}

BkSeries bk_second_moment(std::uint64_t Y, double V, const SieveOptions& options) {
  if (Y < 1) throw std::invalid_argument("bk_second_moment: Y must be >= 1");
  if (V < 1.0) throw std::invalid_argument("bk_second_moment: V must be >= 1");
  const std::uint64_t bytes = (Y + 1) * sizeof(std::int32_t);
  if (bytes > options.memory_budget_bytes)
    throw BudgetError("bk_second_moment: memory budget exceeded");

  BkSeries series;
  series.Y = Y;
  series.V = V;
  series.values.assign(Y + 1, 0);

  const std::uint64_t dmax = std::min<std::uint64_t>(static_cast<std::uint64_t>(std::floor(V)), Y);
  MoebiusTable mobius(std::max<std::uint64_t>(dmax, 1));

  const std::uint64_t chunk = std::max<std::uint64_t>(options.segment_length, 1024);
  const std::int64_t chunks = static_cast<std::int64_t>((Y - 1) / chunk) + 1;  // covers [1, Y]
  std::int32_t* b = series.values.data();
  parallel_for(options.threads, chunks, [&](std::int64_t ci) {
    const std::uint64_t lo = 1 + static_cast<std::uint64_t>(ci) * chunk;
    const std::uint64_t hi = std::min(Y, lo + chunk - 1);
    for (std::uint64_t d = 1; d <= dmax; ++d) {
      const int m = mobius.mu(d);
      if (m == 0) continue;
      for (std::uint64_t k = ((lo + d - 1) / d) * d; k <= hi; k += d)
        b[k] += m;
    }
  });

  std::int64_t moment = 0;
  for (std::uint64_t k = 1; k <= Y; ++k)
    moment += static_cast<std::int64_t>(series.values[k]) * series.values[k];
  series.second_moment = moment;
  return series;
}

std::uint64_t least_prime_divisor(std::uint64_t q) {
  if (q == 0) throw std::invalid_argument("least_prime_divisor: q must be positive");
  if (q == 1) return kLeastPrimeInfinity;
  if (q % 2 == 0) return 2;
  for (std::uint64_t d = 3; d * d <= q; d += 2)
    if (q % d == 0) return d;
  return q;
}

std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, int>> factors;
  if (n == 0) throw std::invalid_argument("factorize: n must be positive");
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    factors.emplace_back(p, e);
  }
  if (n > 1) factors.emplace_back(n, 1);
  return factors;
}

std::uint64_t euler_phi(std::uint64_t n) {
  std::uint64_t phi = 1;
  for (const auto& [p, e] : factorize(n)) {
    std::uint64_t pe = 1;
    for (int i = 1; i < e; ++i) pe *= p;
    phi *= pe * (p - 1);
  }
  return phi;
}

std::vector<std::uint32_t> totient_table(std::uint64_t limit) {
  std::vector<std::uint32_t> phi(limit + 1);
  std::iota(phi.begin(), phi.end(), 0u);
  for (std::uint64_t p = 2; p <= limit; ++p) {
    if (phi[p] != p) continue;  // p composite already adjusted
    for (std::uint64_t m = p; m <= limit; m += p) phi[m] -= phi[m] / p;
  }
  return phi;
}

}  // namespace bv
