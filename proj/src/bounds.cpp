#include "bv/bounds.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bv {

namespace {

constexpr double kLn2 = std::numbers::ln2;

void check_domain(double x, double Q, double Q1) {
  if (x < 4.0) throw std::invalid_argument("bound formula: requires x >= 4");
  if (Q1 < 1.0 || Q1 > Q) throw std::invalid_argument("bound formula: requires 1 <= Q1 <= Q");
  if (Q * Q > x * (1.0 + 1e-9))
    throw std::invalid_argument("bound formula: requires Q <= sqrt(x)");
}

double simpson(double (*g)(double, double), double x, double a, double b) {
  const double m = 0.5 * (a + b);
  return (b - a) / 6.0 * (g(x, a) + 4.0 * g(x, m) + g(x, b));
}

double integrand(double x, double t) { return f_vaughan(x, t) / (t * t); }

double adaptive(double x, double a, double b, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double left = simpson(integrand, x, a, m);
  const double right = simpson(integrand, x, m, b);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive(x, a, m, left, 0.5 * tol, depth - 1) +
         adaptive(x, m, b, right, 0.5 * tol, depth - 1);
}

}  // namespace

ExplicitConstants compute_constants(const LambdaTable& table, const ConstantsOptions& options) {
  if (options.a0_scan_limit < 113)
    throw std::invalid_argument("compute_constants: scan limit cannot certify the psi(x)/x maximum");
  if (options.a0_scan_limit > table.x_max())
    throw std::out_of_range("compute_constants: scan limit beyond table");
  if (options.e0_prime_limit < 1000)
    throw std::invalid_argument("compute_constants: prime limit too small for E0");

  ExplicitConstants consts{};

  double a0 = 0.0;
  std::uint64_t argmax = 0;
  for (std::uint64_t n = 2; n <= options.a0_scan_limit; ++n) {
    const double r = table.psi_cumulative(n) / static_cast<double>(n);
    if (r > a0) {
      a0 = r;
      argmax = n;
    }
  }
  if (argmax != 113)
    throw std::runtime_error("compute_constants: psi(x)/x maximum not attained at 113");
  consts.A0 = a0;
  consts.A0_argmax = argmax;
  consts.A0_scan_limit = options.a0_scan_limit;

  // Truncated Euler product for E0 = prod_p (1 + 1/(p(p-1))).  The tail over
  // p > P is below sum_{n>P} 1/(n(n-1)) = 1/P in the log, giving the interval.
  double prod = 1.0;
  for (std::uint32_t p : primes_up_to(options.e0_prime_limit))
    prod *= 1.0 + 1.0 / (static_cast<double>(p) * (static_cast<double>(p) - 1.0));
  consts.E0_lower = prod;
  consts.E0_upper = prod * std::exp(1.0 / static_cast<double>(options.e0_prime_limit));
  consts.E0_prime_limit = options.e0_prime_limit;

  consts.c0 = std::sqrt(2.0 * consts.A0) * 32.0 /
              (std::pow(3.0, 1.5) * std::numbers::pi * kLn2 * kLn2) *
              (2.0 + std::log(kLn2 / std::log(4.0 / 3.0)));
  consts.c1 = 1.25 * consts.E0_lower * consts.c0 + 1.0;
  consts.c2 = 1.0 + 2.0 * consts.c1 / kLn2;
  consts.c3 = options.c3_override.value_or(2.64);
  consts.c3_overridden = options.c3_override.has_value();
  consts.c4 = consts.c3 / kLn2 * std::sqrt(2.0 * consts.A0);
  consts.L = 0.440729;
  consts.C = 0.000023;

  consts.provenance = {
      {"A0", "max of psi(n)/n over the table scan; attained at n = 113"},
      {"E0", "Euler product over p <= P truncated; interval upper bound multiplies exp(1/P)"},
      {"c0", "sqrt(2 A0) * 2^5 / (3^{3/2} pi (log 2)^2) * (2 + log(log 2 / log(4/3)))"},
      {"c1", "(5/4) E0 c0 + 1"},
      {"c2", "1 + 2 c1 / log 2"},
      {"c3", consts.c3_overridden ? "override supplied on the command line"
                                  : "cited large-sieve bilinear constant 2.64 (closed form unresolved)"},
      {"c4", "(c3 / log 2) sqrt(2 A0)"},
      {"L", "cited mean-square density of the truncated Moebius divisor sums"},
      {"C", "cited error allowance on L"},
  };
  return consts;
}

double F_main(double x, double Q, double Q1) {
  check_domain(x, Q, Q1);
  return 14.0 * x / Q1 + 4.0 * std::sqrt(x) * Q + 15.0 * std::pow(x, 2.0 / 3.0) * std::sqrt(Q) +
         4.0 * std::pow(x, 5.0 / 6.0) * std::log(Q / Q1);
}

double f_vaughan(double x, double Q) {
  if (x < 4.0 || Q <= 0.0) throw std::invalid_argument("f_vaughan: requires x >= 4, Q > 0");
  return 7.0 * x + 2.0 * Q * Q * std::sqrt(x) + 5.0 * std::pow(Q, 1.5) * std::pow(x, 2.0 / 3.0) +
         4.0 * Q * std::pow(x, 5.0 / 6.0);
}

double ah_comparison_F(double x, double Q, double Q1) {
  check_domain(x, Q, Q1);
  return 4.0 * x / Q1 + 4.0 * std::sqrt(x) * Q + 18.0 * std::pow(x, 2.0 / 3.0) * std::sqrt(Q) +
         5.0 * std::pow(x, 5.0 / 6.0) * std::log(std::numbers::e * Q / Q1);
}

PolLog pol_log(double x, double Q, double U, double V) {
  if (x < 4.0 || U < 1.0 || V < 1.0)
    throw std::invalid_argument("pol_log: requires x >= 4 and U, V >= 1");
  const double sx = std::sqrt(x);
  const double pol = 4.0 * x + 2.0 * Q * Q * sx + U * Q * Q + std::pow(Q, 2.5) * (U + V) +
                     std::numbers::sqrt2 * std::sqrt(Q) * x / std::sqrt(U) +
                     std::numbers::sqrt2 * Q * x / std::sqrt(U) +
                     Q * sx * std::sqrt(U) * std::sqrt(V) + Q * x / std::sqrt(V);
  const double l1 = std::pow(std::log(x * V), 2.0);
  const double l2 = std::pow(std::log(x * U), 2.0);
  const double l3 = std::pow(std::log(2.0 * U * V), 2.0) * std::log(4.0 * x);
  const double l4 = std::pow(std::log(2.0 * x / V), 1.5) * std::log(4.0 * x);
  return {pol, std::max(std::max(l1, l2), std::max(l3, l4))};
}

double s4_bound(double x, double Q, double U, double V, const ExplicitConstants& consts) {
  const double poly = x + std::numbers::sqrt2 * std::sqrt(Q) * x / std::sqrt(U) +
                      Q * x / std::sqrt(V) + Q * Q * std::sqrt(x);
  return consts.c3 / kLn2 * std::sqrt(2.0 * consts.A0) * poly * std::log(4.0 * x) *
         std::pow(std::log(2.0 * x / V), 1.5);
}

S123Bounds s123_bounds(double x, double Q, double U, double V, const ExplicitConstants& consts) {
  S123Bounds b{};
  b.B1 = consts.A0 * U * Q * Q;
  b.B2 = (x + std::pow(Q, 2.5) * V) * std::pow(std::log(x * V), 2.0);
  b.B3p = (x + std::pow(Q, 2.5) * U) * std::pow(std::log(x * U), 2.0);
  b.B3pp = consts.c3 / kLn2 *
           (x + Q * std::sqrt(x) * std::sqrt(U) * std::sqrt(V) +
            std::numbers::sqrt2 * Q * x / std::sqrt(U) + Q * Q * std::sqrt(x)) *
           std::pow(std::log(2.0 * U * V), 2.0) * std::log(4.0 * x);
  return b;
}

double delta_f(double x, double Q, double Q1) {
  return f_vaughan(x, Q) / Q - f_vaughan(x, Q1) / Q1;
}

double delta_f_majorant(double x, double Q, double Q1) {
  return 7.0 * x / Q1 + 2.0 * std::sqrt(x) * Q + 5.0 * std::pow(x, 2.0 / 3.0) * std::sqrt(Q);
}

double f_integral_closed(double x, double Q1, double Q) {
  // integrand f(x,t)/t^2 = 7x/t^2 + 2 sqrt(x) + 5 x^{2/3} t^{-1/2} + 4 x^{5/6} / t
  return 7.0 * x * (1.0 / Q1 - 1.0 / Q) + 2.0 * std::sqrt(x) * (Q - Q1) +
         10.0 * std::pow(x, 2.0 / 3.0) * (std::sqrt(Q) - std::sqrt(Q1)) +
         4.0 * std::pow(x, 5.0 / 6.0) * std::log(Q / Q1);
}

double f_integral_numeric(double x, double Q1, double Q, double tolerance) {
  if (Q <= Q1) return 0.0;
  const double whole = simpson(integrand, x, Q1, Q);
  return adaptive(x, Q1, Q, whole, tolerance * std::max(1.0, std::abs(whole)), 48);
}

double f_integral_majorant(double x, double Q1, double Q) {
  return 7.0 * x / Q1 + 2.0 * std::sqrt(x) * Q + 10.0 * std::pow(x, 2.0 / 3.0) * std::sqrt(Q) +
         4.0 * std::pow(x, 5.0 / 6.0) * std::log(Q / Q1);
}

}  // namespace bv
