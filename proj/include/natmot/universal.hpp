#pragma once

// Universal vector extensions of toric 1-motives and the de Rham realization.
// The group of the universal extension is split once and for all as
// Ga^r x Gm^d with the vector part identified with the invariant
// differentials of the dual torus.

#include "natmot/motive.hpp"
#include "natmot/qlinalg.hpp"

#include <string>
#include <vector>

namespace natmot {

/// M^nat = [(V, W): Z^r -> Ga^r x Gm^d]; column i is the lift of e_i.
struct UniversalExtension {
  ToricOneMotive base;
  std::size_t vectorRank = 0;
  RatMatrix V;
  QStarMatrix W;
};

inline UniversalExtension universal_extension(const ToricOneMotive& M) {
  return {M, M.r, to_rational(IntMatrix::identity(M.r)), M.u};
}

/// A lift (V, W) of u is universal iff it lifts u (W = u) and the vector part
/// V is invertible over Q.
inline bool is_universal(const ToricOneMotive& M, const RatMatrix& V, const QStarMatrix& W) {
  require(V.rows() == M.r && V.cols() == M.r, "vector part of the lift must be r x r");
  require(W.rows() == M.d && W.cols() == M.r, "torus part of the lift must be d x r");
  if (W != M.u) return false;
  return determinant(V) != 0;
}

inline bool is_universal(const UniversalExtension& E) { return is_universal(E.base, E.V, E.W); }

/// Lie algebra of the universal extension group: the vector block (x) then
/// the Lie algebra of the torus (lt). W_{-2} is the lt block.
struct DeRhamSpace {
  std::size_t vectorDim = 0;
  std::size_t lieDim = 0;
  std::vector<std::string> labels;

  std::size_t dim() const { return vectorDim + lieDim; }
  std::size_t weightMinus2Rank() const { return lieDim; }
};

inline DeRhamSpace de_rham(const ToricOneMotive& M, const std::string& vector_stem = "x",
                           const std::string& torus_stem = "t") {
  DeRhamSpace s{M.r, M.d, {}};
  auto name = [](const std::string& stem, std::size_t n, std::size_t i) {
    return n == 1 ? stem : stem + std::to_string(i + 1);
  };
  for (std::size_t i = 0; i < M.r; ++i) s.labels.push_back(name(vector_stem, M.r, i));
  for (std::size_t j = 0; j < M.d; ++j) s.labels.push_back("l" + name(torus_stem, M.d, j));
  return s;
}

/// Block-diagonal diag(fX, fT) over Q.
inline RatMatrix de_rham_map(const MotiveMorphism& f) {
  require(is_valid(f), "de_rham_map: morphism is not valid");
  return to_rational(block_diag(f.fX, f.fT));
}

/// Weight-filtration compatibility of a de Rham map: the W_{-2} block of the
/// source lands in the W_{-2} block of the target.
inline bool preserves_weights(const RatMatrix& m, const DeRhamSpace& src, const DeRhamSpace& tgt) {
  for (std::size_t i = 0; i < tgt.vectorDim; ++i)
    for (std::size_t j = src.vectorDim; j < src.dim(); ++j)
      if (m(i, j) != 0) return false;
  return true;
}

/// Lie(T') for the dual of [X -> 0] has the same dimension as Hom(X, Ga).
inline bool lie_dimension_check(const ToricOneMotive& M) {
  ToricOneMotive lattice_part(M.r, 0, QStarMatrix(0, M.r));
  std::size_t lie_dual_torus = cartier_dual(lattice_part).d;
  std::size_t hom_to_ga = universal_extension(lattice_part).vectorRank;
  return lie_dual_torus == hom_to_ga && hom_to_ga == M.r;
}

}  // namespace natmot
