#pragma once

// The multiplicative group Q* in factored form (sign times prime powers),
// finitely generated subgroups, membership and quotients by S-unit lattices.

#include "natmot/zlinalg.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace natmot {

namespace detail {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 powmod(u64 b, u64 e, u64 m) {
  u64 r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

// Deterministic for all 64-bit inputs with these witnesses.
inline bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

inline u64 gcd_u64(u64 a, u64 b) {
  while (b) {
    u64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Pollard-Brent rho; n odd composite.
inline u64 rho_factor(u64 n) {
  for (u64 c = 1;; ++c) {
    u64 x = 2, y = 2, d = 1;
    auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      d = gcd_u64(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

inline void factor_u64(u64 n, std::map<u64, Integer>& out, int sign) {
  if (n == 1) return;
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}) {
    while (n % p == 0) {
      out[p] += sign;
      n /= p;
    }
  }
  if (n == 1) return;
  if (is_prime_u64(n)) {
    out[n] += sign;
    return;
  }
  u64 d = rho_factor(n);
  factor_u64(d, out, sign);
  factor_u64(n / d, out, sign);
}

}  // namespace detail

using Prime = std::uint64_t;

/// Nonzero rational stored as sign * prod p^e. Zero exponents are never
/// stored, so structural equality is value equality.
class QStarElem {
 public:
  QStarElem() = default;

  static QStarElem from_parts(int sign, std::map<Prime, Integer> exps) {
    require(sign == 1 || sign == -1, "sign must be +1 or -1");
    QStarElem q;
    q.sign_ = sign;
    for (auto& [p, e] : exps) {
      if (!detail::is_prime_u64(p)) throw DomainError("non-prime key " + std::to_string(p));
      if (e != 0) q.exps_.emplace(p, std::move(e));
    }
    return q;
  }

  static QStarElem minus_one() { return from_parts(-1, {}); }

  int sign() const { return sign_; }
  const std::map<Prime, Integer>& exponents() const { return exps_; }

  Integer exponent(Prime p) const {
    auto it = exps_.find(p);
    return it == exps_.end() ? Integer(0) : it->second;
  }

  bool is_one() const { return sign_ == 1 && exps_.empty(); }

  std::set<Prime> primes() const {
    std::set<Prime> s;
    for (const auto& [p, e] : exps_) s.insert(p);
    return s;
  }

  Rational value() const {
    Integer num = sign_, den = 1;
    for (const auto& [p, e] : exps_) {
      if (e > 0)
        num *= ipow(Integer(p), e.convert_to<unsigned long>());
      else
        den *= ipow(Integer(p), (-e).convert_to<unsigned long>());
    }
    return Rational(num, den);
  }

  std::string str() const { return to_string(value()); }

  friend QStarElem operator*(const QStarElem& a, const QStarElem& b) {
    QStarElem c = a;
    c.sign_ *= b.sign_;
    for (const auto& [p, e] : b.exps_) {
      Integer& slot = c.exps_[p];
      slot += e;
      if (slot == 0) c.exps_.erase(p);
    }
    return c;
  }

  QStarElem inverse() const { return pow(Integer(-1)); }

  QStarElem pow(const Integer& n) const {
    QStarElem c;
    c.sign_ = (sign_ == -1 && n % 2 != 0) ? -1 : 1;
    if (n == 0) return c;
    for (const auto& [p, e] : exps_) c.exps_.emplace(p, e * n);
    return c;
  }

  friend bool operator==(const QStarElem&, const QStarElem&) = default;

 private:
  int sign_ = 1;
  std::map<Prime, Integer> exps_;
};

inline QStarElem mul(const QStarElem& a, const QStarElem& b) { return a * b; }
inline QStarElem pow(const QStarElem& a, const Integer& n) { return a.pow(n); }

/// Factors a nonzero rational whose numerator and denominator fit in 64 bits.
inline QStarElem factorize(const Rational& q) {
  if (q == 0) throw DomainError("0 is not a unit of Q");
  Integer num = abs(numerator(q));
  Integer den = denominator(q);
  const Integer limit = Integer(std::numeric_limits<std::uint64_t>::max());
  if (num > limit || den > limit) {
    throw DomainError("cannot factor " + to_string(q) + ": numerator or denominator exceeds 64 bits");
  }
  std::map<Prime, Integer> exps;
  detail::factor_u64(num.convert_to<std::uint64_t>(), exps, +1);
  detail::factor_u64(den.convert_to<std::uint64_t>(), exps, -1);
  return QStarElem::from_parts(q < 0 ? -1 : 1, std::move(exps));
}

inline QStarElem parse_qstar(std::string_view s) { return factorize(parse_rational(s)); }

/// A point of Gm^k, i.e. a k-tuple in Q*.
using QStarVector = std::vector<QStarElem>;

inline QStarVector mul(const QStarVector& a, const QStarVector& b) {
  require(a.size() == b.size(), "tuple length mismatch");
  QStarVector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] * b[i];
  return c;
}

inline QStarVector pow(const QStarVector& a, const Integer& n) {
  QStarVector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i].pow(n);
  return c;
}

inline std::set<Prime> primes_of(const QStarVector& v) {
  std::set<Prime> s;
  for (const auto& q : v) s.merge(q.primes());
  return s;
}

/// Finite-rank window into (Q*)^k: each component is encoded as a sign slot
/// (to be read modulo 2) followed by its exponents at the primes of S.
class SUnitLattice {
 public:
  SUnitLattice(std::vector<Prime> primes, std::size_t components = 1) : primes_(std::move(primes)), components_(components) {
    std::sort(primes_.begin(), primes_.end());
    primes_.erase(std::unique(primes_.begin(), primes_.end()), primes_.end());
    for (Prime p : primes_)
      if (!detail::is_prime_u64(p)) throw DomainError(std::to_string(p) + " is not prime");
  }

  const std::vector<Prime>& primes() const { return primes_; }
  std::size_t components() const { return components_; }
  std::size_t slots_per_component() const { return primes_.size() + 1; }
  std::size_t dimension() const { return components_ * slots_per_component(); }
  std::size_t sign_slot(std::size_t component) const { return component * slots_per_component(); }

  bool covers(const QStarElem& q) const {
    for (const auto& [p, e] : q.exponents())
      if (!std::binary_search(primes_.begin(), primes_.end(), p)) return false;
    return true;
  }

  bool covers(const QStarVector& v) const {
    return std::all_of(v.begin(), v.end(), [&](const QStarElem& q) { return covers(q); });
  }

  IntVector encode(const QStarVector& v) const {
    require(v.size() == components_, "tuple length does not match the lattice");
    if (!covers(v)) throw DomainError("element has a prime outside the window");
    IntVector out(dimension(), Integer(0));
    for (std::size_t c = 0; c < components_; ++c) {
      out[sign_slot(c)] = v[c].sign() == -1 ? 1 : 0;
      for (std::size_t k = 0; k < primes_.size(); ++k) out[sign_slot(c) + 1 + k] = v[c].exponent(primes_[k]);
    }
    return out;
  }

  QStarVector decode(const IntVector& x) const {
    require(x.size() == dimension(), "coordinate vector has wrong length");
    QStarVector v(components_);
    for (std::size_t c = 0; c < components_; ++c) {
      std::map<Prime, Integer> exps;
      for (std::size_t k = 0; k < primes_.size(); ++k) exps[primes_[k]] = x[sign_slot(c) + 1 + k];
      v[c] = QStarElem::from_parts(floor_mod(x[sign_slot(c)], 2) == 1 ? -1 : 1, std::move(exps));
    }
    return v;
  }

  /// Columns 2 * e_sign, one per component: the torsion relations of the window.
  IntMatrix sign_relations() const {
    IntMatrix R(dimension(), components_);
    for (std::size_t c = 0; c < components_; ++c) R(sign_slot(c), c) = 2;
    return R;
  }

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    for (std::size_t c = 0; c < components_; ++c) {
      std::string suffix = components_ == 1 ? "" : "[" + std::to_string(c + 1) + "]";
      out.push_back("-1" + suffix);
      for (Prime p : primes_) out.push_back(std::to_string(p) + suffix);
    }
    return out;
  }

 private:
  std::vector<Prime> primes_;
  std::size_t components_;
};

/// Coordinates c with prod gens[i]^c[i] = x, or nothing when x is not in the
/// subgroup generated by gens. Works on tuples; every hit is re-multiplied.
inline std::optional<IntVector> subgroup_membership(const QStarVector& x, const std::vector<QStarVector>& gens) {
  std::set<Prime> s = primes_of(x);
  for (const auto& g : gens) {
    require(g.size() == x.size(), "generator tuple length mismatch");
    s.merge(primes_of(g));
  }
  SUnitLattice lattice(std::vector<Prime>(s.begin(), s.end()), x.size());
  IntMatrix A(lattice.dimension(), gens.size());
  for (std::size_t j = 0; j < gens.size(); ++j) {
    auto col = lattice.encode(gens[j]);
    for (std::size_t i = 0; i < col.size(); ++i) A(i, j) = col[i];
  }
  A = hcat(A, lattice.sign_relations());
  auto sol = solve_integer(A, lattice.encode(x));
  if (!sol) return std::nullopt;
  IntVector coords(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(gens.size()));
  QStarVector check(x.size());
  for (std::size_t j = 0; j < gens.size(); ++j) check = mul(check, pow(gens[j], coords[j]));
  if (check != x) throw std::logic_error("subgroup_membership: witness failed re-multiplication");
  return coords;
}

inline std::optional<IntVector> subgroup_membership(const QStarElem& x, const std::vector<QStarElem>& gens) {
  std::vector<QStarVector> g;
  for (const auto& q : gens) g.push_back({q});
  return subgroup_membership(QStarVector{x}, g);
}

/// Presentation of ((±1) x <S>)^k / <rel_gens> on the generators listed by
/// SUnitLattice::labels().
inline GroupPresentation quotient_presentation(const SUnitLattice& lattice, const std::vector<QStarVector>& rel_gens) {
  IntMatrix R = lattice.sign_relations();
  for (const auto& g : rel_gens) {
    if (!lattice.covers(g)) throw DomainError("relation generator has a prime outside the ambient set");
    R = hcat(R, IntMatrix::from_columns(lattice.dimension(), {lattice.encode(g)}));
  }
  auto pres = cokernel_presentation(R);
  pres.generatorLabels = lattice.labels();
  return pres;
}

inline GroupPresentation quotient_presentation(const std::vector<Prime>& ambient, const std::vector<QStarElem>& rel_gens) {
  std::vector<QStarVector> g;
  for (const auto& q : rel_gens) g.push_back({q});
  return quotient_presentation(SUnitLattice(ambient, 1), g);
}

}  // namespace natmot
