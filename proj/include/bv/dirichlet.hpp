#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "bv/arith_tables.hpp"

namespace bv {

// chi(n) = exp(2*pi*i * numerator/denominator), defined when gcd(n, q) = 1.
struct Rotation {
  std::uint64_t numerator;    // in [0, denominator)
  std::uint64_t denominator;  // exponent of the character group
};

class DirichletCharacter;
struct ConductorData;

// Character group mod q built by CRT over the prime-power factors of q.
// Odd p^e gets one cyclic component on a primitive root; 2^e with e >= 3
// gets the pair {-1, 5}.  Generators are chosen so that reduction mod p^f
// maps the generator of p^e to the generator of p^f, which keeps discrete
// logs compatible across conductors.  Immutable after construction.
class CharacterGroup {
 public:
  explicit CharacterGroup(std::uint64_t modulus);

  std::uint64_t modulus() const { return modulus_; }
  std::uint64_t phi() const { return phi_; }
  std::uint64_t exponent() const { return exponent_; }  // lcm of component orders

  std::size_t component_count() const { return components_.size(); }
  std::uint64_t component_order(std::size_t i) const { return components_[i].order; }
  std::uint64_t component_generator(std::size_t i) const { return components_[i].generator; }
  std::uint64_t component_prime(std::size_t i) const { return components_[i].prime; }

  bool is_unit(std::int64_t n) const;
  const std::vector<std::uint64_t>& units() const { return units_; }

  DirichletCharacter character(std::vector<std::uint64_t> exponents) const;
  DirichletCharacter character_by_index(std::uint64_t index) const;  // mixed radix
  DirichletCharacter principal() const;
  std::vector<DirichletCharacter> characters() const;            // all phi(q)
  std::vector<DirichletCharacter> primitive_characters() const;  // index order

 private:
  friend class DirichletCharacter;
  friend DirichletCharacter induce(const DirichletCharacter&, const CharacterGroup&);
  friend ConductorData conductor(const DirichletCharacter&);

  enum class Kind { Odd, Mod4, TwoSign, TwoFive };
  struct Component {
    Kind kind;
    std::uint64_t prime;
    int prime_exponent;
    std::uint64_t prime_power;
    std::uint64_t order;
    std::uint64_t generator;
    std::vector<std::uint32_t> dlog;  // residue mod prime_power -> exponent
  };

  std::uint64_t normalize(std::int64_t n) const;

  std::uint64_t modulus_;
  std::uint64_t phi_ = 1;
  std::uint64_t exponent_ = 1;
  std::vector<Component> components_;
  std::vector<std::uint64_t> units_;
};

// A character is an exponent vector over the group's cyclic components.
// Holds a pointer to its group, which must outlive it.
class DirichletCharacter {
 public:
  std::uint64_t modulus() const { return group_->modulus(); }
  const CharacterGroup& group() const { return *group_; }
  const std::vector<std::uint64_t>& exponents() const { return exponents_; }
  std::uint64_t index() const;
  bool is_principal() const;

  // Exact rational rotation; nullopt when gcd(n, q) > 1.
  std::optional<Rotation> rotation(std::int64_t n) const;
  std::complex<double> operator()(std::int64_t n) const;

  // chi(r) for r = 0..q-1 (zero off units); the fast path for long sums.
  std::vector<std::complex<double>> value_table() const;

  std::uint64_t conductor_modulus() const;
  bool is_primitive() const { return conductor_modulus() == modulus(); }

 private:
  friend class CharacterGroup;
  DirichletCharacter(const CharacterGroup* group, std::vector<std::uint64_t> exponents)
      : group_(group), exponents_(std::move(exponents)) {}

  const CharacterGroup* group_;
  std::vector<std::uint64_t> exponents_;
};

// Conductor q* | q and the primitive character mod q* inducing chi.  Owns the
// starred group so chi_star stays valid on its own.
struct ConductorData {
  std::uint64_t conductor;
  std::shared_ptr<const CharacterGroup> group_star;
  DirichletCharacter chi_star;
};

ConductorData conductor(const DirichletCharacter& chi);

// Character mod target.modulus() induced by a (typically primitive) character
// whose modulus divides target.modulus().
DirichletCharacter induce(const DirichletCharacter& chi_star, const CharacterGroup& target);

// Number of primitive characters mod q: sum over d | q of mu(q/d) phi(d).
std::uint64_t primitive_character_count(std::uint64_t q);

struct TwistedMax {
  double max_abs;
  std::uint64_t argmax_y;  // smallest y attaining the max
};

// max over integer y in [1, floor(x)] of |sum_{n<=y} Lambda(n) chi(n)|,
// streamed over the prime-power support with compensated partial sums.
TwistedMax psi_twisted_max(const DirichletCharacter& chi, double x, const LambdaTable& table);

// max over integer y in [2, floor(x)] of |psi'(y, chi)| where psi' subtracts
// psi(y) in the principal case.
double psi_prime_max(const DirichletCharacter& chi, double x, const LambdaTable& table);

}  // namespace bv
