#include "bv/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "bv/kahan.hpp"

namespace bv {

namespace {

constexpr std::uint64_t kMaxModulus = 10'000'000;  // dlog tables are O(q)

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  // moduli stay below 2^32, so 64-bit products cannot overflow
  std::uint64_t r = 1 % mod;
  base %= mod;
  while (exp) {
    if (exp & 1) r = r * base % mod;
    base = base * base % mod;
    exp >>= 1;
  }
  return r;
}

std::uint64_t smallest_primitive_root(std::uint64_t p) {
  if (p == 2) return 1;
  const auto factors = factorize(p - 1);
  for (std::uint64_t g = 2; g < p; ++g) {
    bool ok = true;
    for (const auto& [f, e] : factors) {
      (void)e;
      if (pow_mod(g, (p - 1) / f, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw std::logic_error("no primitive root found");
}

// Primitive root mod p^e chosen independently of e (same g for every e >= 2,
// and its reduction mod p for e = 1), so conductor arithmetic on exponent
// vectors is an exact integer map.
std::uint64_t primitive_root_mod_power(std::uint64_t p, int e) {
  const std::uint64_t g0 = smallest_primitive_root(p);
  if (e == 1) return g0;
  return pow_mod(g0, p - 1, p * p) == 1 ? g0 + p : g0;
}

int valuation(std::uint64_t n, std::uint64_t p) {
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

}  // namespace

CharacterGroup::CharacterGroup(std::uint64_t modulus) : modulus_(modulus) {
  if (modulus == 0) throw std::invalid_argument("CharacterGroup: modulus must be positive");
  if (modulus > kMaxModulus) throw BudgetError("CharacterGroup: modulus beyond factorization budget");

  for (const auto& [p, e] : factorize(modulus)) {
    std::uint64_t pp = 1;
    for (int i = 0; i < e; ++i) pp *= p;
    if (p == 2) {
      if (e == 1) continue;  // trivial unit group
      if (e == 2) {
        Component c{Kind::Mod4, 2, e, pp, 2, 3, std::vector<std::uint32_t>(pp, UINT32_MAX)};
        c.dlog[1] = 0;
        c.dlog[3] = 1;
        components_.push_back(std::move(c));
      } else {
        Component sign{Kind::TwoSign, 2, e, pp, 2, pp - 1,
                       std::vector<std::uint32_t>(pp, UINT32_MAX)};
        Component five{Kind::TwoFive, 2, e, pp, pp / 4, 5,
                       std::vector<std::uint32_t>(pp, UINT32_MAX)};
        std::uint64_t r = 1;
        for (std::uint64_t j = 0; j < five.order; ++j) {
          sign.dlog[r] = 0;
          five.dlog[r] = static_cast<std::uint32_t>(j);
          sign.dlog[pp - r] = 1;
          five.dlog[pp - r] = static_cast<std::uint32_t>(j);
          r = r * 5 % pp;
        }
        components_.push_back(std::move(sign));
        components_.push_back(std::move(five));
      }
    } else {
      Component c{Kind::Odd, p, e, pp, pp / p * (p - 1), primitive_root_mod_power(p, e),
                  std::vector<std::uint32_t>(pp, UINT32_MAX)};
      std::uint64_t r = 1;
      for (std::uint64_t j = 0; j < c.order; ++j) {
        c.dlog[r] = static_cast<std::uint32_t>(j);
        r = r * c.generator % pp;
      }
      components_.push_back(std::move(c));
    }
  }

  for (const Component& c : components_) {
    phi_ *= c.order;
    exponent_ = std::lcm(exponent_, c.order);
  }

  units_.reserve(phi_);
  for (std::uint64_t r = 0; r < modulus_; ++r)
    if (std::gcd(r, modulus_) == 1) units_.push_back(r);  // q = 1 yields {0}
}

std::uint64_t CharacterGroup::normalize(std::int64_t n) const {
  const auto q = static_cast<std::int64_t>(modulus_);
  return static_cast<std::uint64_t>((n % q + q) % q);
}

bool CharacterGroup::is_unit(std::int64_t n) const {
  return std::gcd(normalize(n), modulus_) == 1;
}

DirichletCharacter CharacterGroup::character(std::vector<std::uint64_t> exponents) const {
  if (exponents.size() != components_.size())
    throw std::invalid_argument("character: exponent vector has wrong length");
  for (std::size_t i = 0; i < exponents.size(); ++i)
    exponents[i] %= components_[i].order;
  return DirichletCharacter(this, std::move(exponents));
}

DirichletCharacter CharacterGroup::character_by_index(std::uint64_t index) const {
  if (index >= phi_) throw std::out_of_range("character_by_index: index beyond phi(q)");
  std::vector<std::uint64_t> exps(components_.size());
  for (std::size_t i = components_.size(); i-- > 0;) {
    exps[i] = index % components_[i].order;
    index /= components_[i].order;
  }
  return DirichletCharacter(this, std::move(exps));
}

DirichletCharacter CharacterGroup::principal() const {
  return DirichletCharacter(this, std::vector<std::uint64_t>(components_.size(), 0));
}

std::vector<DirichletCharacter> CharacterGroup::characters() const {
  std::vector<DirichletCharacter> all;
  all.reserve(phi_);
  for (std::uint64_t i = 0; i < phi_; ++i) all.push_back(character_by_index(i));
  return all;
}

std::vector<DirichletCharacter> CharacterGroup::primitive_characters() const {
  std::vector<DirichletCharacter> prim;
  for (std::uint64_t i = 0; i < phi_; ++i) {
    DirichletCharacter chi = character_by_index(i);
    if (chi.conductor_modulus() == modulus_) prim.push_back(std::move(chi));
  }
  return prim;
}

std::uint64_t DirichletCharacter::index() const {
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < exponents_.size(); ++i)
    idx = idx * group_->components_[i].order + exponents_[i];
  return idx;
}

bool DirichletCharacter::is_principal() const {
  return std::all_of(exponents_.begin(), exponents_.end(),
                     [](std::uint64_t e) { return e == 0; });
}

std::optional<Rotation> DirichletCharacter::rotation(std::int64_t n) const {
  const std::uint64_t q = group_->modulus_;
  const std::uint64_t r = group_->normalize(n);
  if (q == 1) return Rotation{0, 1};
  if (std::gcd(r, q) != 1) return std::nullopt;
  const std::uint64_t L = group_->exponent_;
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    const auto& c = group_->components_[i];
    const std::uint64_t d = c.dlog[r % c.prime_power];
    t = (t + exponents_[i] * d % c.order * (L / c.order)) % L;
  }
  return Rotation{t, L};
}

std::complex<double> DirichletCharacter::operator()(std::int64_t n) const {
  const auto rot = rotation(n);
  if (!rot) return {0.0, 0.0};
  if (rot->numerator == 0) return {1.0, 0.0};
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(rot->numerator) /
                       static_cast<double>(rot->denominator);
  return {std::cos(angle), std::sin(angle)};
}

std::vector<std::complex<double>> DirichletCharacter::value_table() const {
  const std::uint64_t q = group_->modulus_;
  std::vector<std::complex<double>> table(q, {0.0, 0.0});
  if (q == 1) {
    table[0] = {1.0, 0.0};
    return table;
  }
  for (std::uint64_t r : group_->units_)
    table[r] = (*this)(static_cast<std::int64_t>(r));
  return table;
}

std::uint64_t DirichletCharacter::conductor_modulus() const {
  std::uint64_t cond = 1;
  const auto& comps = group_->components_;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const auto& c = comps[i];
    const std::uint64_t t = exponents_[i];
    switch (c.kind) {
      case CharacterGroup::Kind::Odd: {
        if (t == 0) break;
        const int f = c.prime_exponent - valuation(t, c.prime);
        std::uint64_t pf = 1;
        for (int j = 0; j < f; ++j) pf *= c.prime;
        cond *= pf;
        break;
      }
      case CharacterGroup::Kind::Mod4:
        if (t != 0) cond *= 4;
        break;
      case CharacterGroup::Kind::TwoSign: {
        // paired with the following TwoFive component
        const std::uint64_t s = t;
        const std::uint64_t tf = exponents_[i + 1];
        if (tf == 0) {
          if (s != 0) cond *= 4;
        } else {
          const int f = c.prime_exponent - valuation(tf, 2);
          cond *= std::uint64_t{1} << f;
        }
        break;
      }
      case CharacterGroup::Kind::TwoFive:
        break;  // handled with its sign partner
    }
  }
  return cond;
}

ConductorData conductor(const DirichletCharacter& chi) {
  const std::uint64_t q_star = chi.conductor_modulus();
  auto group_star = std::make_shared<const CharacterGroup>(q_star);

  // Map exponents component by component.  Generators reduce compatibly
  // across prime powers, so t maps to t / p^{e-f} on odd parts and on the
  // 5-part, and sign parts carry over unchanged.
  using Kind = CharacterGroup::Kind;
  std::vector<std::uint64_t> exps(group_star->component_count(), 0);
  const auto& source = chi.group();
  for (std::size_t i = 0; i < group_star->components_.size(); ++i) {
    const auto& star = group_star->components_[i];
    for (std::size_t j = 0; j < source.components_.size(); ++j) {
      const auto& src = source.components_[j];
      if (src.prime != star.prime) continue;
      const std::uint64_t t = chi.exponents()[j];
      const bool star_sign = star.kind == Kind::Mod4 || star.kind == Kind::TwoSign;
      const bool src_sign = src.kind == Kind::Mod4 || src.kind == Kind::TwoSign;
      if (star.kind == Kind::Odd && src.kind == Kind::Odd)
        exps[i] = t / (src.order / star.order);
      else if (star_sign && src_sign)
        exps[i] = t;
      else if (star.kind == Kind::TwoFive && src.kind == Kind::TwoFive)
        exps[i] = t / (src.order / star.order);
    }
  }
  DirichletCharacter chi_star = group_star->character(std::move(exps));
  return ConductorData{q_star, std::move(group_star), std::move(chi_star)};
}

DirichletCharacter induce(const DirichletCharacter& chi_star, const CharacterGroup& target) {
  const std::uint64_t q_star = chi_star.modulus();
  if (target.modulus() % q_star != 0)
    throw std::invalid_argument("induce: target modulus not a multiple of the conductor");

  std::vector<std::uint64_t> exps(target.component_count(), 0);
  const auto& source = chi_star.group();
  for (std::size_t i = 0; i < target.component_count(); ++i) {
    const auto& tc = target.components_[i];
    for (std::size_t j = 0; j < source.component_count(); ++j) {
      const auto& sc = source.components_[j];
      if (sc.prime != tc.prime) continue;
      const std::uint64_t t = chi_star.exponents()[j];
      if (tc.prime != 2) {
        if (tc.kind == CharacterGroup::Kind::Odd)
          exps[i] = t * (tc.order / sc.order);
      } else {
        const bool t_sign = tc.kind == CharacterGroup::Kind::TwoSign ||
                            tc.kind == CharacterGroup::Kind::Mod4;
        const bool s_sign = sc.kind == CharacterGroup::Kind::TwoSign ||
                            sc.kind == CharacterGroup::Kind::Mod4;
        if (t_sign && s_sign) exps[i] = t;
        if (!t_sign && !s_sign) exps[i] = t * (tc.order / sc.order);
        // a mod-4 source contributes only to the sign part of 2^e, e >= 3
      }
    }
  }
  return target.character(std::move(exps));
}

std::uint64_t primitive_character_count(std::uint64_t q) {
  // multiplicative: sum over d | q of mu(q/d) phi(d)
  std::uint64_t count = 1;
  for (const auto& [p, e] : factorize(q)) {
    std::uint64_t pe = 1;
    for (int i = 0; i < e; ++i) pe *= p;
    const std::uint64_t phi_pe = pe / p * (p - 1);
    const std::uint64_t phi_prev = pe / p == 1 ? 1 : (pe / p) / p * (p - 1);
    count *= e == 1 ? phi_pe - 1 : phi_pe - phi_prev;
  }
  return count;
}

TwistedMax psi_twisted_max(const DirichletCharacter& chi, double x, const LambdaTable& table) {
  if (x < 0.0 || x > static_cast<double>(table.x_max()))
    throw std::out_of_range("psi_twisted_max: x outside table range");
  const std::uint64_t q = chi.modulus();
  const auto values = chi.value_table();
  KahanSum re, im;
  double best_sq = 0.0;  // |S(y)| = 0 before the first contribution
  std::uint64_t best_y = 1;
  for (const PrimePower& pp : table.prime_powers_up_to(x)) {
    const std::complex<double>& v = values[pp.n % q];
    if (v.real() == 0.0 && v.imag() == 0.0) continue;  // sum unchanged
    re.add(pp.log_p * v.real());
    im.add(pp.log_p * v.imag());
    const double sr = re.value(), si = im.value();
    const double s_sq = sr * sr + si * si;
    if (s_sq > best_sq) {
      best_sq = s_sq;
      best_y = pp.n;
    }
  }
  return {std::sqrt(best_sq), best_y};
}

double psi_prime_max(const DirichletCharacter& chi, double x, const LambdaTable& table) {
  if (x < 2.0) throw std::invalid_argument("psi_prime_max: requires x >= 2");
  if (x > static_cast<double>(table.x_max()))
    throw std::out_of_range("psi_prime_max: x outside table range");
  const std::uint64_t q = chi.modulus();
  if (!chi.is_principal()) {
    // psi' = psi(., chi); the y >= 2 restriction changes nothing since the
    // partial sum vanishes below the first prime.
    return psi_twisted_max(chi, x, table).max_abs;
  }
  // principal: psi(y, chi0) - psi(y) = -sum of log p over p^k <= y, p | q
  KahanSum acc;
  double best = 0.0;
  for (const PrimePower& pp : table.prime_powers_up_to(x)) {
    if (q % pp.p != 0) continue;
    acc.add(pp.log_p);
    best = std::max(best, acc.value());
  }
  return best;
}

}  // namespace bv
