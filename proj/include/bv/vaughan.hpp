#pragma once

#include <cstdint>
#include <vector>

#include "bv/arith_tables.hpp"
#include "bv/dirichlet.hpp"

namespace bv {

// Cutoff parameters for the four-way splitting of Lambda.
struct VaughanParams {
  double x;
  double Q;
  double U;
  double V;
};

// Case split: U = V = x^{2/3}/Q when Q >= x^{1/3}, else U = V = x^{1/3}.
// Callers clamp Q to [0, sqrt(x)] beforehand.
VaughanParams choose_params(double x, double Q);

struct VaughanDecomposition {
  std::uint64_t n;
  double lambda1;
  double lambda2;
  double lambda3;
  double lambda4;
  double sum() const { return lambda1 + lambda2 + lambda3 + lambda4; }
};

// Single-n decomposition by divisor enumeration; tables must cover n (Lambda)
// and min(n, V) (Moebius).
VaughanDecomposition lambda_components(std::uint64_t n, double U, double V,
                                       const LambdaTable& lambda,
                                       const MoebiusTable& mobius);

// Batched lambda_i(n) for all n <= x, built by sieve-style passes.
struct LambdaArrays {
  double U = 0;
  double V = 0;
  std::vector<double> l1, l2, l3, l4;  // index 0..x
};

LambdaArrays lambda_arrays(std::uint64_t x, double U, double V, const LambdaTable& lambda,
                           const MoebiusTable& mobius);

// max over n <= x_max of |lambda1 + lambda2 + lambda3 + lambda4 - Lambda(n)|.
double verify_identity(std::uint64_t x_max, double U, double V, const LambdaTable& lambda,
                       const MoebiusTable& mobius, int threads = 1);

// One dyadic block of the S4 bilinear sum: m in (max(M,U), min(2M, x/V)],
// k in (V, x/M].
struct DyadicBlock {
  double M;
  double m_lo, m_hi;  // open/closed interval bounds for m
  double k_lo, k_hi;
  std::uint64_t m_count;  // M' = number of integer m in range
  std::uint64_t k_count;  // K'
};

std::vector<DyadicBlock> dyadic_blocks(double x, double U, double V);

// Script-S aggregate: sum over q <= Q of q/phi(q) * sum over primitive chi of
// max_{y<=x} |S_i(y, chi)|, with S_i streamed over integer y.
double script_S(int i, double x, double Q, const VaughanParams& params,
                const LambdaTable& lambda, const MoebiusTable& mobius, int threads = 1);

// sigma_1(M) = sum over V < k <= x/M of b_k^2 (exact integer).
std::int64_t sigma1(double M, double x, double V, const MoebiusTable& mobius);

// Sum of Lambda(m)^2 over lo < m <= hi.
double sum_lambda_squared(const LambdaTable& lambda, double lo, double hi);

}  // namespace bv
