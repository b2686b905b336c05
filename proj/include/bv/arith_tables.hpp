#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace bv {

// Thrown when a requested computation would exceed the configured memory
// budget (or a hard sieve range limit).
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SieveOptions {
  std::uint64_t segment_length = std::uint64_t{1} << 20;
  std::uint64_t memory_budget_bytes = std::uint64_t{4} << 30;
  int threads = 1;
};

// n = p^k with k >= 1.  log p is cached; every consumer multiplies by it.
struct PrimePower {
  std::uint64_t n;
  double log_p;
  std::uint32_t p;
  std::uint32_t k;
};

struct PiCounts {
  double pi;
  double pi_progression;
  double pi1;
  double pi1_progression;
};

// Prime-power structure of every n <= x_max plus the cumulative Chebyshev
// function psi(n) = sum_{m<=n} Lambda(m).  psi is accumulated with
// compensated summation so its absolute error stays well below 1e-6 even at
// x_max = 1e7.  Immutable after construction, safe to share across threads.
class LambdaTable {
 public:
  std::uint64_t x_max() const { return x_max_; }

  bool is_prime_power(std::uint64_t n) const {
    return n >= 2 && n <= x_max_ && prime_[n] != 0;
  }
  std::uint32_t prime_of(std::uint64_t n) const {
    check_range(n);
    return prime_[n];
  }
  std::uint32_t exponent_of(std::uint64_t n) const {
    check_range(n);
    return exponent_[n];
  }

  // Lambda(n): log p when n = p^k, else 0.
  double lambda(std::uint64_t n) const;

  double psi_cumulative(std::uint64_t n) const {
    check_range(n);
    return psi_[n];
  }

  // psi(y) for real 0 <= y <= x_max (step function, constant on [n, n+1)).
  double psi(double y) const;

  // psi(y; q, a) = sum of Lambda(n) over n <= y with n = a (mod q).
  double psi_progression(double y, std::uint64_t q, std::int64_t a) const;

  // pi(y), pi(y;q,a), pi_1(y), pi_1(y;q,a) in one pass; requires y >= 2.
  PiCounts pi_counts(double y, std::uint64_t q, std::int64_t a) const;

  std::span<const PrimePower> prime_powers() const { return powers_; }
  std::span<const PrimePower> prime_powers_up_to(double bound) const;

 private:
  friend LambdaTable build_lambda_table(std::uint64_t, const SieveOptions&);
  void check_range(std::uint64_t n) const {
    if (n > x_max_) throw std::out_of_range("LambdaTable: index beyond x_max");
  }

  std::uint64_t x_max_ = 0;
  std::vector<std::uint32_t> prime_;    // p if n = p^k, else 0
  std::vector<std::uint8_t> exponent_;  // k if n = p^k, else 0
  std::vector<double> psi_;
  std::vector<PrimePower> powers_;  // ascending n
};

LambdaTable build_lambda_table(std::uint64_t x_max, const SieveOptions& options = {});

class MoebiusTable {
 public:
  explicit MoebiusTable(std::uint64_t limit);

  std::uint64_t limit() const { return limit_; }
  int mu(std::uint64_t n) const {
    if (n == 0 || n > limit_) throw std::out_of_range("MoebiusTable: n out of range");
    return mu_[n];
  }

 private:
  std::uint64_t limit_;
  std::vector<std::int8_t> mu_;
};

// b_k = sum of mu(d) over divisors d <= V of k (exact integer arithmetic).
// Requires the Moebius table to cover min(k, floor(V)).
int b_coefficient(std::uint64_t k, double V, const MoebiusTable& mobius);

struct BkSeries {
  std::uint64_t Y = 0;
  double V = 0;
  std::vector<std::int32_t> values;  // values[k] = b_k for k = 1..Y; [0] unused
  std::int64_t second_moment = 0;    // sum over k <= Y of b_k^2, exact
};

// Divisor-sieve pass: for each d <= V adds mu(d) to every multiple <= Y.
BkSeries bk_second_moment(std::uint64_t Y, double V, const SieveOptions& options = {});

inline constexpr std::uint64_t kLeastPrimeInfinity =
    std::numeric_limits<std::uint64_t>::max();

// Least prime divisor of q; q = 1 yields the infinity sentinel so the filter
// l(q) > Q1 always admits q = 1.
std::uint64_t least_prime_divisor(std::uint64_t q);

std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n);
std::uint64_t euler_phi(std::uint64_t n);
std::vector<std::uint32_t> primes_up_to(std::uint64_t limit);
std::vector<std::uint32_t> totient_table(std::uint64_t limit);

}  // namespace bv
