#pragma once

// Toric 1-motives [u: Z^r -> Gm^d] over Q, their morphisms and Cartier duality.

#include "natmot/ratmult.hpp"

#include <optional>
#include <string>
#include <vector>

namespace natmot {

/// rows x cols matrix of elements of Q*.
class QStarMatrix {
 public:
  QStarMatrix() = default;
  QStarMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  QStarElem& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const QStarElem& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  QStarVector column(std::size_t j) const {
    QStarVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  QStarVector row(std::size_t i) const {
    return QStarVector(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }

  QStarMatrix transpose() const {
    QStarMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  std::set<Prime> primes() const {
    std::set<Prime> s;
    for (const auto& q : data_) s.merge(q.primes());
    return s;
  }

  friend bool operator==(const QStarMatrix&, const QStarMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<QStarElem> data_;
};

/// Gm^{d1} -> Gm^{d2}, t |-> (prod_j t_j^{f(k, j)})_k.
inline QStarVector apply_torus_map(const IntMatrix& f, const QStarVector& t) {
  require(f.cols() == t.size(), "torus map applied to a point of the wrong rank");
  QStarVector out(f.rows());
  for (std::size_t k = 0; k < f.rows(); ++k)
    for (std::size_t j = 0; j < f.cols(); ++j) out[k] = out[k] * t[j].pow(f(k, j));
  return out;
}

/// M = [u: Z^r -> Gm^d]; column i of u is u(e_i).
struct ToricOneMotive {
  std::size_t r = 0;
  std::size_t d = 0;
  QStarMatrix u;

  ToricOneMotive() = default;
  ToricOneMotive(std::size_t r_, std::size_t d_, QStarMatrix u_) : r(r_), d(d_), u(std::move(u_)) {
    require(u.rows() == d && u.cols() == r, "structure matrix must be d x r");
  }

  static ToricOneMotive from_strings(std::size_t r, std::size_t d, const std::vector<std::vector<std::string>>& rows) {
    require(rows.size() == d, "expected d rows of entries");
    QStarMatrix u(d, r);
    for (std::size_t j = 0; j < d; ++j) {
      require(rows[j].size() == r, "expected r entries per row");
      for (std::size_t i = 0; i < r; ++i) u(j, i) = parse_qstar(rows[j][i]);
    }
    return ToricOneMotive(r, d, std::move(u));
  }

  /// u(n) = prod_i u(e_i)^{n_i}.
  QStarVector apply(const IntVector& n) const {
    require(n.size() == r, "lattice vector has wrong rank");
    QStarVector out(d);
    for (std::size_t i = 0; i < r; ++i) out = mul(out, pow(u.column(i), n[i]));
    return out;
  }

  std::set<Prime> primes() const { return u.primes(); }

  friend bool operator==(const ToricOneMotive&, const ToricOneMotive&) = default;
};

/// <t, m> = prod_j t_j^{m_j}: the pairing of a torus point with a character.
inline QStarElem character_value(const QStarVector& t, const IntVector& m) {
  require(t.size() == m.size(), "character and point ranks differ");
  QStarElem out;
  for (std::size_t j = 0; j < t.size(); ++j) out = out * t[j].pow(m[j]);
  return out;
}

inline IntVector unit_vector(std::size_t n, std::size_t i) {
  IntVector v(n, Integer(0));
  v[i] = 1;
  return v;
}

/// Dual motive [u': Z^d -> Gm^r] with u' = transpose(u), so that
/// <u(n), m> = <n, u'(m)> for all n, m.
inline ToricOneMotive cartier_dual(const ToricOneMotive& M) {
  ToricOneMotive D(M.d, M.r, M.u.transpose());
  for (std::size_t i = 0; i < M.r; ++i)
    for (std::size_t j = 0; j < M.d; ++j) {
      auto n = unit_vector(M.r, i), m = unit_vector(M.d, j);
      if (character_value(M.apply(n), m) != character_value(D.apply(m), n))
        throw std::logic_error("cartier_dual: pairing identity fails");
    }
  return D;
}

struct WeightData {
  std::size_t gr0rank = 0;
  std::size_t grMinus1rank = 0;
  std::size_t grMinus2rank = 0;
};

inline WeightData weight_data(const ToricOneMotive& M) { return {M.r, 0, M.d}; }

/// fX: Z^{r1} -> Z^{r2} and fT: Gm^{d1} -> Gm^{d2} (as an integer matrix).
struct MotiveMorphism {
  ToricOneMotive source;
  ToricOneMotive target;
  IntMatrix fX;
  IntMatrix fT;
};

inline bool shapes_match(const MotiveMorphism& f) {
  return f.fX.rows() == f.target.r && f.fX.cols() == f.source.r && f.fT.rows() == f.target.d &&
         f.fT.cols() == f.source.d;
}

/// u2 o fX == fT o u1 on the generators of X1.
inline bool is_valid(const MotiveMorphism& f) {
  if (!shapes_match(f)) return false;
  for (std::size_t i = 0; i < f.source.r; ++i) {
    auto lhs = f.target.apply(f.fX.column(i));
    auto rhs = apply_torus_map(f.fT, f.source.u.column(i));
    if (lhs != rhs) return false;
  }
  return true;
}

inline MotiveMorphism identity_morphism(const ToricOneMotive& M) {
  return {M, M, IntMatrix::identity(M.r), IntMatrix::identity(M.d)};
}

/// The composite "first, then second".
inline MotiveMorphism compose(const MotiveMorphism& first, const MotiveMorphism& second) {
  require(first.target == second.source, "compose: target of the first morphism is not the source of the second");
  return {first.source, second.target, second.fX * first.fX, second.fT * first.fT};
}

/// phi' : M2' -> M1' with fX' = fT^T and fT' = fX^T.
inline MotiveMorphism dual_morphism(const MotiveMorphism& f) {
  require(is_valid(f), "dual_morphism: morphism is not compatible with the structure maps");
  MotiveMorphism g{cartier_dual(f.target), cartier_dual(f.source), f.fT.transpose(), f.fX.transpose()};
  if (!is_valid(g)) throw std::logic_error("dual_morphism: dual fails the compatibility square");
  return g;
}

/// Chooses a target structure matrix u2 making (fX, fT) a morphism out of M1,
/// by solving u2 o fX = fT o u1 prime by prime (sign modulo 2). Returns
/// nothing when no integral solution exists.
inline std::optional<ToricOneMotive> solve_target_motive(const ToricOneMotive& M1, const IntMatrix& fX,
                                                         const IntMatrix& fT) {
  require(fX.cols() == M1.r && fT.cols() == M1.d, "morphism blocks do not fit the source motive");
  const std::size_t r2 = fX.rows(), d2 = fT.rows();
  std::vector<QStarVector> images;
  for (std::size_t i = 0; i < M1.r; ++i) images.push_back(apply_torus_map(fT, M1.u.column(i)));
  std::set<Prime> primes;
  for (const auto& v : images) primes.merge(primes_of(v));
  IntMatrix A = fX.transpose();  // r1 x r2
  IntMatrix signA = hcat(A, Integer(2) * IntMatrix::identity(M1.r));
  QStarMatrix u2(d2, r2);
  for (std::size_t k = 0; k < d2; ++k) {
    std::map<std::size_t, std::map<Prime, Integer>> exps;
    for (Prime p : primes) {
      IntVector rhs(M1.r);
      for (std::size_t i = 0; i < M1.r; ++i) rhs[i] = images[i][k].exponent(p);
      auto w = solve_integer(A, rhs);
      if (!w) return std::nullopt;
      for (std::size_t l = 0; l < r2; ++l) exps[l][p] = (*w)[l];
    }
    IntVector sign_rhs(M1.r);
    for (std::size_t i = 0; i < M1.r; ++i) sign_rhs[i] = images[i][k].sign() == -1 ? 1 : 0;
    auto s = solve_integer(signA, sign_rhs);
    if (!s) return std::nullopt;
    for (std::size_t l = 0; l < r2; ++l)
      u2(k, l) = QStarElem::from_parts(floor_mod((*s)[l], 2) == 1 ? -1 : 1, exps[l]);
  }
  ToricOneMotive M2(r2, d2, std::move(u2));
  if (!is_valid({M1, M2, fX, fT})) throw std::logic_error("solve_target_motive: solution fails the compatibility square");
  return M2;
}

}  // namespace natmot
