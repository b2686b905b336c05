#include "bv/oracles.hpp"

#include <cmath>
#include <numeric>
#include <vector>

namespace bv::oracles {

double lambda_naive(std::uint64_t n) {
  if (n < 2) return 0.0;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    std::uint64_t m = n;
    while (m % p == 0) m /= p;
    return m == 1 ? std::log(static_cast<double>(p)) : 0.0;
  }
  return std::log(static_cast<double>(n));  // n prime
}

int mu_naive(std::uint64_t n) {
  if (n == 1) return 1;
  int omega = 0;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    ++omega;
  }
  if (n > 1) ++omega;
  return omega % 2 == 0 ? 1 : -1;
}

double psi_naive(double y) {
  double sum = 0.0;
  for (std::uint64_t n = 2; static_cast<double>(n) <= y; ++n) sum += lambda_naive(n);
  return sum;
}

double psi_progression_naive(double y, std::uint64_t q, std::int64_t a) {
  const std::uint64_t r = static_cast<std::uint64_t>(((a % static_cast<std::int64_t>(q)) +
                                                      static_cast<std::int64_t>(q)) %
                                                     static_cast<std::int64_t>(q));
  double sum = 0.0;
  for (std::uint64_t n = 2; static_cast<double>(n) <= y; ++n)
    if (n % q == r) sum += lambda_naive(n);
  return sum;
}

std::complex<double> psi_twisted_naive(const DirichletCharacter& chi, double y) {
  std::complex<double> sum{0.0, 0.0};
  for (std::uint64_t n = 2; static_cast<double>(n) <= y; ++n)
    sum += lambda_naive(n) * chi(static_cast<std::int64_t>(n));
  return sum;
}

double psi_twisted_max_naive(const DirichletCharacter& chi, double x) {
  double best = 0.0;
  std::complex<double> sum{0.0, 0.0};
  for (std::uint64_t n = 1; static_cast<double>(n) <= x; ++n) {
    sum += lambda_naive(n) * chi(static_cast<std::int64_t>(n));
    best = std::max(best, std::abs(sum));
  }
  return best;
}

int b_coefficient_naive(std::uint64_t k, double V) {
  int sum = 0;
  for (std::uint64_t d = 1; d <= k; ++d)
    if (k % d == 0 && static_cast<double>(d) <= V) sum += mu_naive(d);
  return sum;
}

double lambda_component_naive(int i, std::uint64_t n, double U, double V) {
  switch (i) {
    case 1:
      return static_cast<double>(n) <= U ? lambda_naive(n) : 0.0;
    case 2: {
      double sum = 0.0;
      for (std::uint64_t d = 1; d <= n; ++d)
        if (n % d == 0 && static_cast<double>(d) <= V)
          sum += mu_naive(d) * std::log(static_cast<double>(n / d));
      return sum;
    }
    case 3: {
      double sum = 0.0;
      for (std::uint64_t m = 1; m <= n; ++m) {
        if (n % m != 0 || static_cast<double>(m) > U) continue;
        const double lam = lambda_naive(m);
        if (lam == 0.0) continue;
        const std::uint64_t rest = n / m;
        for (std::uint64_t d = 1; d <= rest; ++d)
          if (rest % d == 0 && static_cast<double>(d) <= V) sum -= lam * mu_naive(d);
      }
      return sum;
    }
    case 4: {
      double sum = 0.0;
      for (std::uint64_t m = 1; m <= n; ++m) {
        if (n % m != 0 || static_cast<double>(m) <= U) continue;
        const double lam = lambda_naive(m);
        if (lam == 0.0) continue;
        const std::uint64_t k = n / m;
        if (static_cast<double>(k) > V) sum -= lam * b_coefficient_naive(k, V);
      }
      return sum;
    }
    default:
      return 0.0;
  }
}

std::complex<double> s_component_naive(int i, const DirichletCharacter& chi, double y,
                                       double U, double V) {
  std::complex<double> sum{0.0, 0.0};
  for (std::uint64_t n = 1; static_cast<double>(n) <= y; ++n) {
    const double lam_i = lambda_component_naive(i, n, U, V);
    if (lam_i != 0.0) sum += lam_i * chi(static_cast<std::int64_t>(n));
  }
  return sum;
}

double progression_deviation_naive(double x, std::uint64_t q) {
  const double phi = static_cast<double>(euler_phi(q));
  double best = 0.0;
  for (std::uint64_t y = 2; static_cast<double>(y) <= x; ++y) {
    const double psi_y = psi_naive(static_cast<double>(y));
    for (std::uint64_t a = 0; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      const double d = psi_progression_naive(static_cast<double>(y), q,
                                             static_cast<std::int64_t>(a)) -
                       psi_y / phi;
      best = std::max(best, std::abs(d));
    }
  }
  return best;
}

double pi_progression_deviation_naive(double x, std::uint64_t q) {
  const double phi = static_cast<double>(euler_phi(q));
  const auto is_prime = [](std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
      if (n % d == 0) return false;
    return true;
  };
  double best = 0.0;
  for (std::uint64_t y = 2; static_cast<double>(y) <= x; ++y) {
    double pi = 0.0;
    std::vector<double> counts(q, 0.0);
    for (std::uint64_t n = 2; n <= y; ++n) {
      if (!is_prime(n)) continue;
      pi += 1.0;
      counts[n % q] += 1.0;
    }
    for (std::uint64_t a = 0; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      best = std::max(best, std::abs(counts[a] - pi / phi));
    }
  }
  return best;
}

}  // namespace bv::oracles
