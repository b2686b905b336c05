#include "bv/vaughan.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bv/kahan.hpp"
#include "bv/parallel.hpp"

namespace bv {

namespace {

std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> small, large;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    small.push_back(d);
    if (d != n / d) large.push_back(n / d);
  }
  for (auto it = large.rbegin(); it != large.rend(); ++it) small.push_back(*it);
  return small;
}

}  // namespace

VaughanParams choose_params(double x, double Q) {
  if (x < 4.0) throw std::invalid_argument("choose_params: requires x >= 4");
  if (Q <= 0.0) throw std::invalid_argument("choose_params: requires Q > 0");
  const double third = std::cbrt(x);
  const double uv = Q < third ? third : std::pow(x, 2.0 / 3.0) / Q;
  return {x, Q, uv, uv};
}

VaughanDecomposition lambda_components(std::uint64_t n, double U, double V,
                                       const LambdaTable& lambda, const MoebiusTable& mobius) {
  if (n == 0) throw std::invalid_argument("lambda_components: n must be positive");
  if (n > lambda.x_max())
    throw std::out_of_range("lambda_components: n beyond Lambda table");
  if (mobius.limit() < std::min<std::uint64_t>(n, static_cast<std::uint64_t>(std::floor(V))))
    throw std::invalid_argument("lambda_components: Moebius table too small");

  VaughanDecomposition dec{n, 0.0, 0.0, 0.0, 0.0};
  dec.lambda1 = static_cast<double>(n) <= U ? lambda.lambda(n) : 0.0;

  const auto divs = divisors(n);
  for (std::uint64_t d : divs) {
    if (static_cast<double>(d) > V) continue;
    const int mu_d = mobius.mu(d);
    if (mu_d == 0) continue;
    const std::uint64_t h = n / d;
    if (h > 1) dec.lambda2 += mu_d * std::log(static_cast<double>(h));
    // lambda3: restricted triple sum m*d*r = n with m <= U
    for (std::uint64_t m : divisors(h)) {
      if (static_cast<double>(m) > U) break;
      const double lam = lambda.lambda(m);
      if (lam != 0.0) dec.lambda3 -= lam * mu_d;
    }
  }
  for (std::uint64_t m : divs) {
    if (static_cast<double>(m) <= U) continue;
    const double lam = lambda.lambda(m);
    if (lam == 0.0) continue;
    const std::uint64_t k = n / m;
    if (static_cast<double>(k) > V) dec.lambda4 -= lam * b_coefficient(k, V, mobius);
  }
  return dec;
}

LambdaArrays lambda_arrays(std::uint64_t x, double U, double V, const LambdaTable& lambda,
                           const MoebiusTable& mobius) {
  if (x > lambda.x_max()) throw std::out_of_range("lambda_arrays: x beyond Lambda table");
  const auto vcap = std::min<std::uint64_t>(x, static_cast<std::uint64_t>(std::floor(V)));
  if (mobius.limit() < vcap)
    throw std::invalid_argument("lambda_arrays: Moebius table too small");

  LambdaArrays arrays;
  arrays.U = U;
  arrays.V = V;
  arrays.l1.assign(x + 1, 0.0);
  arrays.l2.assign(x + 1, 0.0);
  arrays.l3.assign(x + 1, 0.0);
  arrays.l4.assign(x + 1, 0.0);

  const auto powers = lambda.prime_powers_up_to(static_cast<double>(x));

  for (const PrimePower& pp : powers) {
    if (static_cast<double>(pp.n) > U) break;
    arrays.l1[pp.n] = pp.log_p;
  }

  for (std::uint64_t d = 1; d <= vcap; ++d) {
    const int mu_d = mobius.mu(d);
    if (mu_d == 0) continue;
    // lambda2: mu(d) log h on every n = h d
    for (std::uint64_t h = 2, n = 2 * d; n <= x; ++h, n += d)
      arrays.l2[n] += mu_d * std::log(static_cast<double>(h));
    // lambda3: -Lambda(m) mu(d) on every n = m d r with m <= U
    for (const PrimePower& pp : powers) {
      if (static_cast<double>(pp.n) > U) break;
      const std::uint64_t base = pp.n * d;
      if (base > x) break;
      for (std::uint64_t w = base; w <= x; w += base) arrays.l3[w] -= pp.log_p * mu_d;
    }
  }

  // lambda4: -Lambda(m) b_k on n = m k with m > U, k > V
  if (U * V < static_cast<double>(x)) {
    const std::uint64_t k_start = static_cast<std::uint64_t>(std::floor(V)) + 1;
    std::uint64_t m_min = 0;
    for (const PrimePower& pp : powers) {
      if (static_cast<double>(pp.n) > U) {
        m_min = pp.n;
        break;
      }
    }
    if (m_min != 0 && m_min * k_start <= x) {
      const std::uint64_t k_max = x / m_min;
      std::vector<std::int32_t> b(k_max + 1, 0);
      for (std::uint64_t d = 1; d <= std::min<std::uint64_t>(vcap, k_max); ++d) {
        const int mu_d = mobius.mu(d);
        if (mu_d == 0) continue;
        for (std::uint64_t k = d; k <= k_max; k += d) b[k] += mu_d;
      }
      for (const PrimePower& pp : powers) {
        if (static_cast<double>(pp.n) <= U) continue;
        if (pp.n * k_start > x) continue;
        for (std::uint64_t k = k_start, n = pp.n * k_start; n <= x; ++k, n += pp.n)
          if (b[k] != 0) arrays.l4[n] -= pp.log_p * b[k];
      }
    }
  }
  return arrays;
}

double verify_identity(std::uint64_t x_max, double U, double V, const LambdaTable& lambda,
                       const MoebiusTable& mobius, int threads) {
  const LambdaArrays arrays = lambda_arrays(x_max, U, V, lambda, mobius);
  const std::uint64_t chunk = 1 << 14;
  const std::int64_t chunks = static_cast<std::int64_t>((x_max - 1) / chunk) + 1;
  std::vector<double> worst(chunks, 0.0);
  parallel_for(threads, chunks, [&](std::int64_t ci) {
    const std::uint64_t lo = 1 + static_cast<std::uint64_t>(ci) * chunk;
    const std::uint64_t hi = std::min(x_max, lo + chunk - 1);
    double w = 0.0;
    for (std::uint64_t n = lo; n <= hi; ++n) {
      const double sum = arrays.l1[n] + arrays.l2[n] + arrays.l3[n] + arrays.l4[n];
      w = std::max(w, std::abs(sum - lambda.lambda(n)));
    }
    worst[ci] = w;
  });
  double result = 0.0;
  for (double w : worst) result = std::max(result, w);
  return result;
}

std::vector<DyadicBlock> dyadic_blocks(double x, double U, double V) {
  if (U < 1.0 || V < 1.0) throw std::invalid_argument("dyadic_blocks: requires U, V >= 1");
  std::vector<DyadicBlock> blocks;
  const double top = x / V;
  for (double M = 1.0; M <= top; M *= 2.0) {
    if (M <= U / 2.0) continue;
    DyadicBlock blk;
    blk.M = M;
    blk.m_lo = std::max(M, U);
    blk.m_hi = std::min(2.0 * M, top);
    blk.k_lo = V;
    blk.k_hi = x / M;
    const auto count_in = [](double lo, double hi) -> std::uint64_t {
      if (hi <= lo) return 0;
      const double f_hi = std::floor(hi), f_lo = std::floor(lo);
      return f_hi > f_lo ? static_cast<std::uint64_t>(f_hi - f_lo) : 0;
    };
    blk.m_count = count_in(blk.m_lo, blk.m_hi);
    blk.k_count = count_in(blk.k_lo, blk.k_hi);
    blocks.push_back(blk);
  }
  return blocks;
}

double script_S(int i, double x, double Q, const VaughanParams& params,
                const LambdaTable& lambda, const MoebiusTable& mobius, int threads) {
  if (i < 1 || i > 4) throw std::invalid_argument("script_S: i must be 1..4");
  if (Q * Q > x * (1.0 + 1e-9)) throw std::invalid_argument("script_S: requires Q <= sqrt(x)");
  if (x > static_cast<double>(lambda.x_max()))
    throw std::out_of_range("script_S: x beyond Lambda table");

  const auto xi = static_cast<std::uint64_t>(std::floor(x));
  const LambdaArrays arrays = lambda_arrays(xi, params.U, params.V, lambda, mobius);
  const std::vector<double>* arr = nullptr;
  switch (i) {
    case 1: arr = &arrays.l1; break;
    case 2: arr = &arrays.l2; break;
    case 3: arr = &arrays.l3; break;
    default: arr = &arrays.l4; break;
  }

  const auto q_max = static_cast<std::uint64_t>(std::floor(Q));
  std::vector<double> per_q(q_max + 1, 0.0);
  parallel_for(threads, static_cast<std::int64_t>(q_max), [&](std::int64_t qi) {
    const std::uint64_t q = static_cast<std::uint64_t>(qi) + 1;
    const CharacterGroup group(q);
    const auto primitive = group.primitive_characters();
    if (primitive.empty()) return;
    KahanSum chi_sum;
    for (const DirichletCharacter& chi : primitive) {
      const auto values = chi.value_table();
      KahanSum re, im;
      double best_sq = 0.0;
      for (std::uint64_t n = 1; n <= xi; ++n) {
        const double c = (*arr)[n];
        if (c == 0.0) continue;
        const std::complex<double>& v = values[n % q];
        if (v.real() == 0.0 && v.imag() == 0.0) continue;
        re.add(c * v.real());
        im.add(c * v.imag());
        const double sr = re.value(), si = im.value();
        best_sq = std::max(best_sq, sr * sr + si * si);
      }
      chi_sum.add(std::sqrt(best_sq));
    }
    per_q[q] = static_cast<double>(q) / static_cast<double>(group.phi()) * chi_sum.value();
  });

  KahanSum total;
  for (std::uint64_t q = 1; q <= q_max; ++q) total.add(per_q[q]);
  return total.value();
}

std::int64_t sigma1(double M, double x, double V, const MoebiusTable& mobius) {
  const auto k_max = static_cast<std::uint64_t>(std::floor(x / M));
  if (k_max == 0) return 0;
  const auto vcap = std::min<std::uint64_t>(static_cast<std::uint64_t>(std::floor(V)), k_max);
  if (mobius.limit() < vcap) throw std::invalid_argument("sigma1: Moebius table too small");
  std::vector<std::int32_t> b(k_max + 1, 0);
  for (std::uint64_t d = 1; d <= vcap; ++d) {
    const int mu_d = mobius.mu(d);
    if (mu_d == 0) continue;
    for (std::uint64_t k = d; k <= k_max; k += d) b[k] += mu_d;
  }
  std::int64_t sum = 0;
  for (std::uint64_t k = 1; k <= k_max; ++k)
    if (static_cast<double>(k) > V) sum += static_cast<std::int64_t>(b[k]) * b[k];
  return sum;
}

double sum_lambda_squared(const LambdaTable& lambda, double lo, double hi) {
  KahanSum acc;
  for (const PrimePower& pp : lambda.prime_powers_up_to(hi))
    if (static_cast<double>(pp.n) > lo) acc.add(pp.log_p * pp.log_p);
  return acc.value();
}

}  // namespace bv
