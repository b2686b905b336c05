#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bv/arith_tables.hpp"
#include "bv/bounds.hpp"
#include "bv/dirichlet.hpp"
#include "bv/report.hpp"
#include "bv/vaughan.hpp"

namespace bv {

// ---------------------------------------------------------------------------
// Grid of (x, Q, Q1) evaluation points.  Q and Q1 come from a small rule
// vocabulary so configs stay declarative; rule-generated points that violate
// 1 <= Q1 <= Q <= sqrt(x) are dropped deterministically.
// ---------------------------------------------------------------------------

struct QRule {
  enum class Kind { XPowThird, SqrtXOverTwo, SqrtX, SqrtXOverLogB, Literal };
  Kind kind = Kind::SqrtX;
  double literal = 0.0;  // the literal value, or B for the log-power rule

  double eval(double x) const;
  std::string token() const;
  static QRule parse(const std::string& token);
  static QRule number(double value) { return {Kind::Literal, value}; }
};

struct Q1Rule {
  enum class Kind { SqrtQ, Literal };
  Kind kind = Kind::Literal;
  double literal = 1.0;

  double eval(double Q) const;
  std::string token() const;
  static Q1Rule parse(const std::string& token);
  static Q1Rule number(double value) { return {Kind::Literal, value}; }
};

struct GridPoint {
  double x;
  double Q;
  double Q1;
  bool remark = false;  // produced by the sqrt(x)/(log x)^B rule
  double B = 0.0;
};

struct GridSpec {
  std::vector<double> x_values;
  std::vector<QRule> q_rules;
  std::vector<Q1Rule> q1_rules;
  std::optional<double> remark_B;  // appends the sqrt(x)/(log x)^B rule with Q1 = 1

  // x in {1e2, 1e3, 1e4, 1e5}; Q in {x^(1/3), x^(1/2)/2, x^(1/2)};
  // Q1 in {1, 2, sqrt(Q)}; remark rule with B = 4.
  static GridSpec defaults();

  double max_x() const;
  std::vector<GridPoint> points() const;  // validated, deterministic order
};

// ---------------------------------------------------------------------------
// Check operations
// ---------------------------------------------------------------------------

struct VerifierContext {
  const LambdaTable& lambda;
  const MoebiusTable& mobius;
  ExplicitConstants consts;
  int threads = 1;
};

enum class CountKind { Psi, Pi };

// max over integer y in [2, x] over units a of |f(y;q,a) - f(y)/phi(q)| where
// f is psi or pi.  Streams the prime-power jumps once per modulus.
double progression_deviation_max(const LambdaTable& table, double x, std::uint64_t q,
                                 CountKind kind);

// Triple sum of Theorem-1 deviations over q <= Q with l(q) > Q1.
double bv_lhs(const LambdaTable& table, double x, double Q, double Q1, int threads = 1,
              CountKind kind = CountKind::Psi);

std::vector<BoundReport> bv_check(const GridSpec& grid, const VerifierContext& ctx);

BoundReport vaughan_check(double x, double Q, const VerifierContext& ctx);

BoundReport large_sieve_check(std::uint64_t Q, std::uint64_t m0, std::uint64_t M,
                              std::span<const std::complex<double>> coefficients);

// Bilinear form with coefficient vectors a (m = m0..M) and b (n = n0..N),
// checked against the c3-weighted product bound.
BoundReport bilinear_sieve_check(std::uint64_t Q, std::uint64_t m0, std::uint64_t M,
                                 std::uint64_t n0, std::uint64_t N,
                                 std::span<const std::complex<double>> a,
                                 std::span<const std::complex<double>> b, double c3);

std::vector<BoundReport> si_bound_check(double x, double Q, const VerifierContext& ctx);

BoundReport bk_moment_check(std::uint64_t Y, double V, const ExplicitConstants& consts,
                            bool strict_window, const SieveOptions& sieve = {});

std::vector<BoundReport> section3_checks(double x, double Q, double Q1,
                                         const VerifierContext& ctx);

BoundReport oracle_crosscheck(const VerifierContext& ctx, int sample_size = 50,
                              std::uint64_t seed = 20260808);

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

enum class Suite { Bv, Vaughan, Sieve, Si, Bk, Section3, Oracle, All };

std::string suite_name(Suite suite);
std::optional<Suite> parse_suite(const std::string& name);

struct RunConfig;  // run_config.hpp

struct SuiteResult {
  std::vector<BoundReport> reports;
  bool aborted = false;
  std::string abort_reason;

  bool all_strict_pass() const {
    for (const BoundReport& r : reports)
      if (!r.informational && !r.pass) return false;
    return true;
  }
};

SuiteResult run_suite(Suite suite, const RunConfig& config);

// Rows of the scan command: x,Q,Q1,lhs,rhs_72,rhs_92,ratio.
struct ScanRow {
  double x, Q, Q1, lhs, rhs_72, rhs_92;
  double ratio() const { return rhs_72 != 0.0 ? lhs / rhs_72 : 0.0; }
};

std::vector<ScanRow> scan_rows(const GridSpec& grid, const VerifierContext& ctx);
std::string scan_to_csv(std::span<const ScanRow> rows);

}  // namespace bv
