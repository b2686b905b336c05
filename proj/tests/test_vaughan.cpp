#include <cmath>
#include <random>

#include "bv/bounds.hpp"
#include "bv/oracles.hpp"
#include "bv/vaughan.hpp"
#include "doctest.h"

using namespace bv;

TEST_SUITE("vaughan") {

TEST_CASE("parameter choice follows the case split") {
  const VaughanParams a = choose_params(1e6, 1e3);  // Q = sqrt(x)
  CHECK(a.U == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(a.V == a.U);

  const VaughanParams b = choose_params(1e6, 50.0);  // Q < x^{1/3}
  CHECK(b.U == doctest::Approx(100.0).epsilon(1e-12));

  const VaughanParams c = choose_params(4.0, 2.0);
  CHECK(c.U == doctest::Approx(std::pow(4.0, 2.0 / 3.0) / 2.0).epsilon(1e-12));
  CHECK(c.U == doctest::Approx(1.2599).epsilon(1e-4));

  // U V <= x in both branches
  for (double x : {4.0, 100.0, 1e4}) {
    for (double Q : {1.0, std::cbrt(x), std::sqrt(x)}) {
      const VaughanParams p = choose_params(x, Q);
      CHECK(p.U * p.V <= x * (1 + 1e-12));
    }
  }
}

TEST_CASE("lambda components at n = 3 with U = V = 4") {
  const LambdaTable table = build_lambda_table(100);
  const MoebiusTable mobius(100);
  const double log3 = std::log(3.0);
  const VaughanDecomposition d = lambda_components(3, 4.0, 4.0, table, mobius);
  CHECK(d.lambda1 == doctest::Approx(log3).epsilon(1e-12));
  CHECK(d.lambda2 == doctest::Approx(log3).epsilon(1e-12));
  CHECK(d.lambda3 == doctest::Approx(-log3).epsilon(1e-12));
  CHECK(d.lambda4 == 0.0);
  CHECK(d.sum() == doctest::Approx(log3).epsilon(1e-12));

  const VaughanDecomposition one = lambda_components(1, 4.0, 4.0, table, mobius);
  CHECK(one.sum() == 0.0);

  // lambda4 vanishes whenever n <= U V
  for (std::uint64_t n = 1; n <= 16; ++n)
    CHECK(lambda_components(n, 4.0, 4.0, table, mobius).lambda4 == 0.0);
}

TEST_CASE("components match the definition oracle") {
  const LambdaTable table = build_lambda_table(400);
  const MoebiusTable mobius(400);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 40; ++i) {
    const std::uint64_t n = 1 + rng() % 400;
    const double U = 1.0 + double(rng() % 20);
    const double V = 1.0 + double(rng() % 20);
    const VaughanDecomposition d = lambda_components(n, U, V, table, mobius);
    CHECK(d.lambda1 == doctest::Approx(oracles::lambda_component_naive(1, n, U, V)).epsilon(1e-10));
    CHECK(d.lambda2 == doctest::Approx(oracles::lambda_component_naive(2, n, U, V)).epsilon(1e-10));
    CHECK(d.lambda3 == doctest::Approx(oracles::lambda_component_naive(3, n, U, V)).epsilon(1e-10));
    CHECK(d.lambda4 == doctest::Approx(oracles::lambda_component_naive(4, n, U, V)).epsilon(1e-10));
  }
}

TEST_CASE("batched arrays equal the per-n components") {
  const LambdaTable table = build_lambda_table(800);
  const MoebiusTable mobius(800);
  const LambdaArrays arrays = lambda_arrays(800, 13.7, 8.2, table, mobius);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 60; ++i) {
    const std::uint64_t n = 1 + rng() % 800;
    const VaughanDecomposition d = lambda_components(n, 13.7, 8.2, table, mobius);
    CHECK(arrays.l1[n] == doctest::Approx(d.lambda1).epsilon(1e-10));
    CHECK(arrays.l2[n] == doctest::Approx(d.lambda2).epsilon(1e-10));
    CHECK(arrays.l3[n] == doctest::Approx(d.lambda3).epsilon(1e-10));
    CHECK(arrays.l4[n] == doctest::Approx(d.lambda4).epsilon(1e-10));
  }
}

TEST_CASE("identity residual below 1e-9") {
  const LambdaTable table = build_lambda_table(10'000);
  const MoebiusTable mobius(10'000);
  CHECK(verify_identity(1000, 10.0, 10.0, table, mobius) < 1e-9);
  CHECK(verify_identity(10'000, 31.6, 21.5, table, mobius) < 1e-9);
  CHECK(verify_identity(1000, 1.0, 1.0, table, mobius) < 1e-9);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 5; ++i) {
    const double U = 1.0 + 99.0 * double(rng() % 1000) / 1000.0;
    const double V = 1.0 + 99.0 * double(rng() % 1000) / 1000.0;
    CHECK(verify_identity(2000, U, V, table, mobius) < 1e-9);
  }
}

TEST_CASE("S_i components sum to the twisted psi") {
  const LambdaTable table = build_lambda_table(1000);
  const MoebiusTable mobius(1000);
  std::mt19937_64 rng(13);
  for (int i = 0; i < 15; ++i) {
    const std::uint64_t q = 1 + rng() % 20;
    const CharacterGroup group(q);
    const DirichletCharacter chi = group.character_by_index(rng() % group.phi());
    const auto values = chi.value_table();
    const double U = 1.0 + double(rng() % 30);
    const double V = 1.0 + double(rng() % 30);
    const LambdaArrays arrays = lambda_arrays(1000, U, V, table, mobius);
    const std::uint64_t y = 100 + rng() % 900;
    std::complex<double> total{0.0, 0.0};
    for (std::uint64_t n = 1; n <= y; ++n)
      total += (arrays.l1[n] + arrays.l2[n] + arrays.l3[n] + arrays.l4[n]) * values[n % q];
    std::complex<double> twisted{0.0, 0.0};
    for (const PrimePower& pp : table.prime_powers_up_to(double(y)))
      twisted += pp.log_p * values[pp.n % q];
    CHECK(std::abs(total - twisted) < 1e-8);
  }
}

TEST_CASE("script-S special values") {
  const LambdaTable table = build_lambda_table(1000);
  const MoebiusTable mobius(1000);
  // Q = 1: only the trivial character, so script-S1 is psi(U)
  const VaughanParams params{1000.0, 1.0, 10.0, 10.0};
  CHECK(script_S(1, 1000.0, 1.0, params, table, mobius) ==
        doctest::Approx(table.psi(10.0)).epsilon(1e-9));

  // U V >= x empties the bilinear range
  const VaughanParams wide{100.0, 4.0, 10.0, 10.0};
  CHECK(script_S(4, 100.0, 4.0, wide, table, mobius) == 0.0);

  CHECK_THROWS_AS(script_S(5, 100.0, 4.0, wide, table, mobius), std::invalid_argument);
  CHECK_THROWS_AS(script_S(1, 100.0, 50.0, wide, table, mobius), std::invalid_argument);
}

TEST_CASE("script-S1 below A0 U Q^2 on a small grid") {
  const LambdaTable table = build_lambda_table(2000);
  const MoebiusTable mobius(2000);
  const double A0 = 1.03883;
  for (double x : {100.0, 1000.0}) {
    for (double Q : {std::cbrt(x), std::sqrt(x)}) {
      const VaughanParams params = choose_params(x, Q);
      const double s1 = script_S(1, x, Q, params, table, mobius);
      CHECK(s1 <= A0 * params.U * Q * Q);
    }
  }
}

TEST_CASE("script-S is independent of the thread count") {
  const LambdaTable table = build_lambda_table(2000);
  const MoebiusTable mobius(2000);
  const VaughanParams params = choose_params(2000.0, 12.0);
  for (int i = 1; i <= 4; ++i) {
    const double serial = script_S(i, 2000.0, 12.0, params, table, mobius, 1);
    const double parallel = script_S(i, 2000.0, 12.0, params, table, mobius, 2);
    CHECK(serial == parallel);  // bitwise: ordered reduction
  }
}

TEST_CASE("dyadic blocks") {
  const auto blocks = dyadic_blocks(64.0, 4.0, 2.0);
  REQUIRE(blocks.size() == 4);
  CHECK(blocks[0].M == 4.0);
  CHECK(blocks[1].M == 8.0);
  CHECK(blocks[2].M == 16.0);
  CHECK(blocks[3].M == 32.0);
  CHECK(double(blocks.size()) <= std::log(2.0 * 64.0 / 2.0) / std::log(2.0));

  CHECK(dyadic_blocks(16.0, 8.0, 4.0).empty());

  // block bookkeeping: M' <= M, K' <= x/M, and the m-ranges tile (U, x/V]
  for (double x : {64.0, 1000.0, 12345.0}) {
    for (double U : {1.0, 4.0, 9.7}) {
      for (double V : {1.0, 3.3, 8.0}) {
        const auto blks = dyadic_blocks(x, U, V);
        CHECK(double(blks.size()) <= std::log(2.0 * x / V) / std::log(2.0) + 1e-9);
        std::uint64_t covered = 0;
        for (const DyadicBlock& b : blks) {
          CHECK(double(b.m_count) <= b.M);
          CHECK(double(b.k_count) <= x / b.M);
          covered += b.m_count;
        }
        std::uint64_t expected = 0;
        for (std::uint64_t m = 1; double(m) <= x / V; ++m)
          if (double(m) > U) ++expected;
        CHECK(covered == expected);
        // no overlap: blocks are increasing and disjoint by construction
        for (std::size_t i = 1; i < blks.size(); ++i)
          CHECK(blks[i - 1].m_hi <= blks[i].m_lo + 1e-9);
      }
    }
  }
}

TEST_CASE("sigma bounds") {
  const LambdaTable table = build_lambda_table(20'001);
  const double A0 = 1.03883;
  for (std::uint64_t M = 1; M <= 10'000; M = M < 32 ? M + 1 : M * 2) {
    const double sum = sum_lambda_squared(table, double(M), 2.0 * double(M));
    CHECK(sum <= 2.0 * A0 * double(M) * std::log(2.0 * double(M)) * (1 + 1e-12));
  }

  const MoebiusTable mobius(64);
  std::mt19937_64 rng(17);
  for (int i = 0; i < 10; ++i) {
    const double V = 1.0 + double(rng() % 50);
    const double M = 1.0 + double(rng() % 16);
    const double x = M * double(1 + rng() % 2000);
    const double k_top = x / M;
    std::int64_t brute = 0;
    for (std::uint64_t k = 1; double(k) <= k_top; ++k) {
      if (double(k) <= V) continue;
      const int b = oracles::b_coefficient_naive(k, V);
      brute += std::int64_t(b) * b;
    }
    CHECK(sigma1(M, x, V, mobius) == brute);
  }
}

}  // TEST_SUITE
