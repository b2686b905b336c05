#pragma once

#include <complex>
#include <cstdint>

#include "bv/dirichlet.hpp"

// Definition-level recomputations used by the anti-regression suite and the
// unit tests.  Everything here runs from scratch (trial division, direct
// loops); nothing touches the sieve tables or the streaming kernels.
namespace bv::oracles {

double lambda_naive(std::uint64_t n);
int mu_naive(std::uint64_t n);

double psi_naive(double y);
double psi_progression_naive(double y, std::uint64_t q, std::int64_t a);

std::complex<double> psi_twisted_naive(const DirichletCharacter& chi, double y);
double psi_twisted_max_naive(const DirichletCharacter& chi, double x);

int b_coefficient_naive(std::uint64_t k, double V);

// lambda_i(n) straight from the divisor-triple definitions.
double lambda_component_naive(int i, std::uint64_t n, double U, double V);

// S_i(y, chi) = sum_{n<=y} lambda_i(n) chi(n) by full enumeration.
std::complex<double> s_component_naive(int i, const DirichletCharacter& chi, double y,
                                       double U, double V);

// max over y in [2, x] over units a of |psi(y;q,a) - psi(y)/phi(q)|,
// evaluated at every integer y by direct summation.
double progression_deviation_naive(double x, std::uint64_t q);
double pi_progression_deviation_naive(double x, std::uint64_t q);

}  // namespace bv::oracles
