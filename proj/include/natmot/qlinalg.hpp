#pragma once

// Exact linear algebra over Q: determinants, ranks and a sparse incremental
// solver for the large-but-thin systems produced by the form solver.

#include "natmot/matrix.hpp"

#include <map>
#include <optional>
#include <variant>

namespace natmot {

/// Plain Gaussian elimination over Q; fine at the sizes used here.
inline Rational determinant(RatMatrix A) {
  require(A.rows() == A.cols(), "determinant of a non-square matrix");
  const std::size_t n = A.rows();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && A(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      A.swap_rows(p, c);
      det = -det;
    }
    det *= A(c, c);
    for (std::size_t i = c + 1; i < n; ++i)
      if (A(i, c) != 0) A.add_row(i, c, -A(i, c) / A(c, c));
  }
  return det;
}

inline std::size_t rank(RatMatrix A) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < A.cols() && r < A.rows(); ++c) {
    std::size_t p = r;
    while (p < A.rows() && A(p, c) == 0) ++p;
    if (p == A.rows()) continue;
    A.swap_rows(p, r);
    for (std::size_t i = r + 1; i < A.rows(); ++i)
      if (A(i, c) != 0) A.add_row(i, r, -A(i, c) / A(r, c));
    ++r;
  }
  return r;
}

/// The unique x with A x = b when A is square and invertible.
inline std::optional<RatVector> solve_unique(RatMatrix A, RatVector b) {
  require(A.rows() == b.size(), "solve_unique: right-hand side has wrong length");
  if (A.rows() != A.cols()) return std::nullopt;
  const std::size_t n = A.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && A(p, c) == 0) ++p;
    if (p == n) return std::nullopt;
    A.swap_rows(p, c);
    std::swap(b[p], b[c]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || A(i, c) == 0) continue;
      Rational f = A(i, c) / A(c, c);
      A.add_row(i, c, -f);
      b[i] -= f * b[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= A(i, i);
  return b;
}

/// Sparse linear system over Q built one equation at a time. Rows are kept
/// fully reduced against earlier pivots so inconsistency is detected as soon
/// as it appears.
class SparseLinearSystem {
 public:
  using Row = std::map<std::size_t, Rational>;

  explicit SparseLinearSystem(std::size_t unknowns) : unknowns_(unknowns) {}

  std::size_t unknowns() const { return unknowns_; }
  std::size_t rank() const { return pivots_.size(); }
  bool inconsistent() const { return inconsistent_; }

  /// Adds sum_k row[k] * x_k = rhs.
  void add_equation(Row row, Rational rhs) {
    for (auto it = row.begin(); it != row.end();) it = it->second == 0 ? row.erase(it) : std::next(it);
    reduce(row, rhs);
    if (row.empty()) {
      if (rhs != 0) inconsistent_ = true;
      return;
    }
    auto [col, lead] = *row.begin();
    for (auto& [k, v] : row) v /= lead;
    rhs /= lead;
    pivots_.emplace(col, Pivot{std::move(row), std::move(rhs)});
  }

  struct NoSolution {};
  struct NonUnique {
    std::size_t dimension;
  };
  using Outcome = std::variant<RatVector, NoSolution, NonUnique>;

  Outcome solve() const {
    if (inconsistent_) return NoSolution{};
    if (pivots_.size() < unknowns_) return NonUnique{unknowns_ - pivots_.size()};
    // Back substitution from the highest pivot column down.
    RatVector x(unknowns_, Rational(0));
    for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it) {
      Rational v = it->second.rhs;
      for (const auto& [k, c] : it->second.row)
        if (k != it->first) v -= c * x[k];
      x[it->first] = v;
    }
    return x;
  }

 private:
  struct Pivot {
    Row row;
    Rational rhs;
  };

  void reduce(Row& row, Rational& rhs) const {
    // Pivot rows only reference columns >= their pivot, so a single ascending
    // sweep suffices.
    auto it = row.begin();
    while (it != row.end()) {
      auto p = pivots_.find(it->first);
      if (p == pivots_.end()) {
        ++it;
        continue;
      }
      Rational factor = it->second;
      std::size_t col = it->first;
      for (const auto& [k, c] : p->second.row) {
        auto& slot = row[k];
        slot -= factor * c;
      }
      rhs -= factor * p->second.rhs;
      for (auto e = row.begin(); e != row.end();) e = e->second == 0 ? row.erase(e) : std::next(e);
      it = row.upper_bound(col);
    }
  }

  std::size_t unknowns_;
  std::map<std::size_t, Pivot> pivots_;
  bool inconsistent_ = false;
};

}  // namespace natmot
