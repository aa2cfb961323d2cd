#pragma once

// Integer-matrix algebra: Smith and Hermite normal forms, kernels, cokernels
// and presentations of finitely generated abelian groups.

#include "natmot/matrix.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace natmot {

/// A = U * S * V with U, V unimodular and S diagonal with s1 | s2 | ...,
/// nonnegative, zeros last. The inverses of U and V are kept alongside since
/// every consumer (kernels, solving) needs them.
struct SnfDecomposition {
  IntMatrix U;
  IntMatrix S;
  IntMatrix V;
  IntMatrix U_inv;
  IntMatrix V_inv;
  std::size_t rank = 0;

  IntVector diagonal() const {
    IntVector d;
    for (std::size_t i = 0; i < std::min(S.rows(), S.cols()); ++i) d.push_back(S(i, i));
    return d;
  }
};

namespace detail {

// Tracks A_orig = U * A * V while A is being reduced in place.
struct SnfState {
  IntMatrix A, U, V, U_inv, V_inv;

  explicit SnfState(const IntMatrix& a)
      : A(a),
        U(IntMatrix::identity(a.rows())),
        V(IntMatrix::identity(a.cols())),
        U_inv(IntMatrix::identity(a.rows())),
        V_inv(IntMatrix::identity(a.cols())) {}

  // A <- E A with E elementary; U <- U E^-1; U_inv <- E U_inv.
  void swap_rows(std::size_t i, std::size_t j) {
    A.swap_rows(i, j);
    U.swap_cols(i, j);
    U_inv.swap_rows(i, j);
  }
  void add_row(std::size_t dst, std::size_t src, const Integer& k) {
    A.add_row(dst, src, k);
    U.add_col(src, dst, -k);
    U_inv.add_row(dst, src, k);
  }
  void negate_row(std::size_t i) {
    A.negate_row(i);
    U.negate_col(i);
    U_inv.negate_row(i);
  }
  // A <- A F; V <- F^-1 V; V_inv <- V_inv F.
  void swap_cols(std::size_t i, std::size_t j) {
    A.swap_cols(i, j);
    V.swap_rows(i, j);
    V_inv.swap_cols(i, j);
  }
  void add_col(std::size_t dst, std::size_t src, const Integer& k) {
    A.add_col(dst, src, k);
    V.add_row(src, dst, -k);
    V_inv.add_col(dst, src, k);
  }
};

// Smallest |entry| in the block rows >= t, cols >= t; ties by lowest (row, col).
inline std::optional<std::pair<std::size_t, std::size_t>> smallest_pivot(const IntMatrix& A, std::size_t t) {
  std::optional<std::pair<std::size_t, std::size_t>> best;
  Integer best_abs;
  for (std::size_t i = t; i < A.rows(); ++i)
    for (std::size_t j = t; j < A.cols(); ++j) {
      if (A(i, j) == 0) continue;
      Integer a = abs(A(i, j));
      if (!best || a < best_abs) {
        best = {i, j};
        best_abs = a;
      }
    }
  return best;
}

}  // namespace detail

inline SnfDecomposition smith_normal_form(const IntMatrix& input) {
  detail::SnfState st(input);
  IntMatrix& A = st.A;
  const std::size_t m = A.rows(), n = A.cols();
  std::size_t t = 0;
  for (; t < std::min(m, n); ++t) {
    auto pivot = detail::smallest_pivot(A, t);
    if (!pivot) break;
    for (;;) {
      st.swap_rows(t, pivot->first);
      st.swap_cols(t, pivot->second);
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (A(i, t) == 0) continue;
        st.add_row(i, t, -(A(i, t) / A(t, t)));
        if (A(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (A(t, j) == 0) continue;
        st.add_col(j, t, -(A(t, j) / A(t, t)));
        if (A(t, j) != 0) clean = false;
      }
      if (!clean) {
        pivot = detail::smallest_pivot(A, t);
        continue;
      }
      // Divisibility: fold an offending row into row t and go again.
      std::optional<std::size_t> offender;
      for (std::size_t i = t + 1; i < m && !offender; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (A(i, j) % A(t, t) != 0) {
            offender = i;
            break;
          }
      if (!offender) break;
      st.add_row(t, *offender, Integer(1));
      pivot = detail::smallest_pivot(A, t);
    }
    if (A(t, t) < 0) st.negate_row(t);
  }
  SnfDecomposition out;
  out.rank = t;
  out.S = std::move(st.A);
  out.U = std::move(st.U);
  out.V = std::move(st.V);
  out.U_inv = std::move(st.U_inv);
  out.V_inv = std::move(st.V_inv);
  return out;
}

inline std::size_t rank(const IntMatrix& A) { return smith_normal_form(A).rank; }

/// Row-style Hermite normal form: returns only the nonzero rows, each with a
/// positive pivot and entries above every pivot reduced into [0, pivot).
inline IntMatrix hermite_rows(IntMatrix A) {
  std::size_t lead = 0;
  std::vector<std::size_t> pivot_cols;
  for (std::size_t c = 0; c < A.cols() && lead < A.rows(); ++c) {
    for (;;) {
      std::optional<std::size_t> best;
      for (std::size_t i = lead; i < A.rows(); ++i)
        if (A(i, c) != 0 && (!best || abs(A(i, c)) < abs(A(*best, c)))) best = i;
      if (!best) break;
      A.swap_rows(lead, *best);
      bool done = true;
      for (std::size_t i = lead + 1; i < A.rows(); ++i) {
        if (A(i, c) == 0) continue;
        A.add_row(i, lead, -(A(i, c) / A(lead, c)));
        if (A(i, c) != 0) done = false;
      }
      if (done) break;
    }
    if (lead < A.rows() && A(lead, c) != 0) {
      if (A(lead, c) < 0) A.negate_row(lead);
      for (std::size_t i = 0; i < lead; ++i) A.add_row(i, lead, -floor_div(A(i, c), A(lead, c)));
      pivot_cols.push_back(c);
      ++lead;
    }
  }
  return A.submatrix(0, 0, lead, A.cols());
}

/// Canonical basis (as columns) of the lattice spanned by the columns of B.
inline IntMatrix lattice_basis(const IntMatrix& generators) {
  return hermite_rows(generators.transpose()).transpose();
}

/// Columns form a Z-basis of ker A, in canonical Hermite form.
inline IntMatrix kernel_basis(const IntMatrix& A) {
  auto snf = smith_normal_form(A);
  const std::size_t n = A.cols();
  IntMatrix K(n, n - snf.rank);
  for (std::size_t j = snf.rank; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) K(i, j - snf.rank) = snf.V_inv(i, j);
  return lattice_basis(K);
}

/// Integer x with A x = b, or nothing if none exists.
inline std::optional<IntVector> solve_integer(const IntMatrix& A, const IntVector& b) {
  require(A.rows() == b.size(), "solve_integer: right-hand side has wrong length");
  auto snf = smith_normal_form(A);
  IntVector c = snf.U_inv * b;
  IntVector y(A.cols(), Integer(0));
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i < snf.rank) {
      if (c[i] % snf.S(i, i) != 0) return std::nullopt;
      y[i] = c[i] / snf.S(i, i);
    } else if (c[i] != 0) {
      return std::nullopt;
    }
  }
  return snf.V_inv * y;
}

/// Finitely generated abelian group Z^nGens / (column span of relations).
struct GroupPresentation {
  std::size_t nGens = 0;
  IntMatrix relations;
  IntVector invariantFactors;
  std::size_t freeRank = 0;
  std::vector<std::string> generatorLabels;

  bool is_trivial() const { return freeRank == 0 && invariantFactors.empty(); }

  /// Group order when finite.
  std::optional<Integer> order() const {
    if (freeRank != 0) return std::nullopt;
    Integer o = 1;
    for (const auto& f : invariantFactors) o *= f;
    return o;
  }

  /// Whether the element with generator coordinates x is zero in the group.
  bool is_zero(const IntVector& x) const { return solve_integer(relations, x).has_value(); }

  /// "Z/2 + Z^3", "0" for the trivial group.
  std::string describe() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& f : invariantFactors) {
      os << (first ? "" : " + ") << "Z/" << f;
      first = false;
    }
    if (freeRank > 0) {
      os << (first ? "" : " + ") << "Z";
      if (freeRank > 1) os << "^" << freeRank;
      first = false;
    }
    return first ? "0" : os.str();
  }
};

/// Presentation of Z^rows / image(A).
inline GroupPresentation cokernel_presentation(const IntMatrix& A) {
  auto snf = smith_normal_form(A);
  GroupPresentation g;
  g.nGens = A.rows();
  g.relations = A;
  for (std::size_t i = 0; i < snf.rank; ++i)
    if (snf.S(i, i) > 1) g.invariantFactors.push_back(snf.S(i, i));
  g.freeRank = A.rows() - snf.rank;
  return g;
}

/// Whether v lies in the lattice spanned by the columns of B.
inline bool lattice_contains(const IntMatrix& B, const IntVector& v) {
  return solve_integer(B, v).has_value();
}

/// Column lattices span(A) and span(B) coincide.
inline bool lattices_equal(const IntMatrix& A, const IntMatrix& B) {
  require(A.rows() == B.rows(), "lattices live in different ambient ranks");
  for (std::size_t j = 0; j < A.cols(); ++j)
    if (!lattice_contains(B, A.column(j))) return false;
  for (std::size_t j = 0; j < B.cols(); ++j)
    if (!lattice_contains(A, B.column(j))) return false;
  return true;
}

/// Basis of span(A) ∩ span(B): solve A a = B b and map the a-part through A.
inline IntMatrix lattice_intersection(const IntMatrix& A, const IntMatrix& B) {
  require(A.rows() == B.rows(), "lattices live in different ambient ranks");
  IntMatrix K = kernel_basis(hcat(A, Integer(-1) * B));
  IntMatrix coeffs = K.submatrix(0, 0, A.cols(), K.cols());
  return lattice_basis(A * coeffs);
}

}  // namespace natmot
