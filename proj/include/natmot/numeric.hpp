#pragma once

// Exact scalar types shared by every module, plus the error hierarchy.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace natmot {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;

/// Raised when an input lies outside the domain of an operation (zero in Q*,
/// a prime missing from the window, an unparsable rational, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a caller breaks a documented precondition (shape mismatch,
/// invalid morphism, foreign coordinate system).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ContractViolation(what);
}

inline Rational make_rational(const Integer& num, const Integer& den = 1) {
  if (den == 0) throw DomainError("zero denominator");
  return Rational(num, den);
}

inline Integer numerator(const Rational& q) {
  return boost::multiprecision::numerator(q);
}

inline Integer denominator(const Rational& q) {
  return boost::multiprecision::denominator(q);
}

inline bool is_integral(const Rational& q) { return denominator(q) == 1; }

inline std::string to_string(const Integer& n) { return n.str(); }

inline std::string to_string(const Rational& q) {
  if (is_integral(q)) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

namespace detail {

inline Integer parse_digits(std::string_view s, std::string_view whole) {
  if (s.empty()) throw DomainError("malformed rational \"" + std::string(whole) + "\"");
  Integer n = 0;
  for (char c : s) {
    if (c < '0' || c > '9') {
      throw DomainError("malformed rational \"" + std::string(whole) + "\"");
    }
    n = n * 10 + (c - '0');
  }
  return n;
}

}  // namespace detail

/// Parses "a", "-a", "a/b" or "-a/b" with decimal digits only. Floats,
/// exponents, whitespace and explicit '+' are rejected.
inline Rational parse_rational(std::string_view s) {
  std::string_view body = s;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  Integer num;
  Integer den = 1;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    num = detail::parse_digits(body.substr(0, slash), s);
    den = detail::parse_digits(body.substr(slash + 1), s);
    if (den == 0) throw DomainError("zero denominator in \"" + std::string(s) + "\"");
  } else {
    num = detail::parse_digits(body, s);
  }
  if (negative) num = -num;
  return Rational(num, den);
}

inline Integer ipow(Integer base, unsigned long exp) {
  Integer result = 1;
  while (exp != 0) {
    if (exp & 1) result *= base;
    base *= base;
    exp >>= 1;
  }
  return result;
}

/// q^n for any integer n (q must be nonzero when n < 0).
inline Rational rpow(const Rational& q, const Integer& n) {
  if (n == 0) return Rational(1);
  if (n < 0) {
    if (q == 0) throw DomainError("zero raised to a negative power");
    return rpow(Rational(1) / q, -n);
  }
  auto e = n.convert_to<unsigned long>();
  return Rational(ipow(numerator(q), e), ipow(denominator(q), e));
}

/// Floor modulus with a positive modulus.
inline Integer floor_mod(const Integer& a, const Integer& m) {
  Integer r = a % m;
  if (r < 0) r += m;
  return r;
}

/// Floor division for positive divisor.
inline Integer floor_div(const Integer& a, const Integer& m) {
  return (a - floor_mod(a, m)) / m;
}

}  // namespace natmot
