#pragma once

// Reproducible generators for motives, morphisms and points. Only raw
// mt19937_64 output is used (no std distributions), so a seed produces the
// same data on every standard library.

#include "natmot/motive.hpp"

#include <random>
#include <vector>

namespace natmot {

using Rng = std::mt19937_64;

inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

template <class T>
const T& pick(Rng& rng, const std::vector<T>& pool) {
  return pool[rng() % pool.size()];
}

/// The entry pool {±2, ±3, ±5, ±1/2, ±3/5}.
inline std::vector<QStarElem> standard_entry_pool() {
  std::vector<QStarElem> pool;
  for (const char* s : {"2", "-2", "3", "-3", "5", "-5", "1/2", "-1/2", "3/5", "-3/5"}) pool.push_back(parse_qstar(s));
  return pool;
}

/// ±prod p^e with e in [-max_exp, max_exp].
inline QStarElem random_s_unit(Rng& rng, const std::vector<Prime>& primes, int max_exp = 2) {
  std::map<Prime, Integer> exps;
  for (Prime p : primes) exps[p] = uniform_int(rng, -max_exp, max_exp);
  return QStarElem::from_parts(rng() % 2 ? -1 : 1, std::move(exps));
}

inline ToricOneMotive random_motive(Rng& rng, std::size_t r, std::size_t d, const std::vector<QStarElem>& pool) {
  QStarMatrix u(d, r);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < r; ++i) u(j, i) = pick(rng, pool);
  return ToricOneMotive(r, d, std::move(u));
}

inline ToricOneMotive random_motive_over(Rng& rng, std::size_t r, std::size_t d, const std::vector<Prime>& primes) {
  QStarMatrix u(d, r);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < r; ++i) u(j, i) = random_s_unit(rng, primes);
  return ToricOneMotive(r, d, std::move(u));
}

inline IntMatrix random_int_matrix(Rng& rng, std::size_t rows, std::size_t cols, int bound) {
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = uniform_int(rng, -bound, bound);
  return m;
}

/// Draws fX, fT and solves the compatibility square for the target motive,
/// redrawing until an integral solution exists.
inline MotiveMorphism random_valid_morphism(Rng& rng, const ToricOneMotive& M1, std::size_t r2, std::size_t d2,
                                            int bound = 2) {
  for (;;) {
    auto fX = random_int_matrix(rng, r2, M1.r, bound);
    auto fT = random_int_matrix(rng, d2, M1.d, bound);
    if (auto M2 = solve_target_motive(M1, fX, fT)) return {M1, *M2, fX, fT};
  }
}

inline QStarVector random_torus_point(Rng& rng, std::size_t d, const std::vector<Prime>& primes) {
  QStarVector t(d);
  for (auto& q : t) q = random_s_unit(rng, primes, 3);
  return t;
}

inline RatVector random_rational_vector(Rng& rng, std::size_t n, int bound = 9) {
  RatVector v(n);
  for (auto& q : v) q = Rational(uniform_int(rng, -bound, bound), uniform_int(rng, 1, bound));
  return v;
}

}  // namespace natmot
