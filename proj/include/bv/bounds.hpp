#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bv/arith_tables.hpp"

namespace bv {

struct ConstantsOptions {
  std::uint64_t e0_prime_limit = 1'000'000;
  std::uint64_t a0_scan_limit = 10'000;
  std::optional<double> c3_override;
};

// The explicit constants of the main bound, with derivation provenance.
// A0 is measured off the psi table; E0 is a truncated Euler product reported
// as an interval [lower, lower * exp(1/P)]; c3 is the cited large-sieve
// constant 2.64 (closed form unresolved upstream, hence overridable).
struct ExplicitConstants {
  double A0;
  std::uint64_t A0_argmax;
  std::uint64_t A0_scan_limit;
  double E0_lower;
  double E0_upper;
  std::uint64_t E0_prime_limit;
  double c0;
  double c1;
  double c2;
  double c3;
  bool c3_overridden;
  double c4;
  double L;  // second-moment density of the b_k series
  double C;  // its error allowance
  std::vector<std::pair<std::string, std::string>> provenance;

  double E0() const { return E0_lower; }
};

ExplicitConstants compute_constants(const LambdaTable& table, const ConstantsOptions& options = {});

// Main bound envelope: 14x/Q1 + 4 sqrt(x) Q + 15 x^{2/3} sqrt(Q) + 4 x^{5/6} log(Q/Q1).
double F_main(double x, double Q, double Q1);

// Vaughan-inequality envelope: 7x + 2 Q^2 sqrt(x) + 5 Q^{3/2} x^{2/3} + 4 Q x^{5/6}.
double f_vaughan(double x, double Q);

// Comparison envelope (paired with the (log x)^{9/2} exponent):
// 4x/Q1 + 4 sqrt(x) Q + 18 x^{2/3} sqrt(Q) + 5 x^{5/6} log(eQ/Q1).
double ah_comparison_F(double x, double Q, double Q1);

struct PolLog {
  double pol;
  double log_term;
};

// Polynomial and logarithmic factors of the combined script-S bound.
PolLog pol_log(double x, double Q, double U, double V);

// Majorant for the bilinear script-S4 sum.
double s4_bound(double x, double Q, double U, double V, const ExplicitConstants& consts);

struct S123Bounds {
  double B1;    // A0 U Q^2
  double B2;    // (x + Q^{5/2} V)(log xV)^2
  double B3p;   // (x + Q^{5/2} U)(log xU)^2
  double B3pp;  // c3/log2 * (...)(log 2UV)^2 (log 4x)
};

S123Bounds s123_bounds(double x, double Q, double U, double V, const ExplicitConstants& consts);

// f(x,Q)/Q - f(x,Q1)/Q1 and its closed majorant 7x/Q1 + 2 sqrt(x) Q + 5 x^{2/3} sqrt(Q).
double delta_f(double x, double Q, double Q1);
double delta_f_majorant(double x, double Q, double Q1);

// Partial-summation integral of f(x,t) dt/t^2 over [Q1, Q]: exact closed form,
// an adaptive-Simpson cross-check, and the closed majorant
// 7x/Q1 + 2 sqrt(x) Q + 10 x^{2/3} sqrt(Q) + 4 x^{5/6} log(Q/Q1).
double f_integral_closed(double x, double Q1, double Q);
double f_integral_numeric(double x, double Q1, double Q, double tolerance = 1e-8);
double f_integral_majorant(double x, double Q1, double Q);

}  // namespace bv
