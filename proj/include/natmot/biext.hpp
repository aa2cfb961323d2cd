#pragma once

// Biextensions of pairs of toric 1-motives by Gm, the canonical connection on
// their pull-back to the universal extensions, its curvature, and the
// resulting pairing of de Rham realizations.
//
// Over split tori the underlying Gm-torsor is trivial, so a biextension is
// exactly a pair of trivializations
//   s1(n, t2) = prod_k t2_k^{(beta1 n)_k}   over X1 x T2,
//   s2(t1, m) = prod_j t1_j^{(beta2 m)_j}   over T1 x X2,
// which must agree on X1 x X2.

#include "natmot/symforms.hpp"
#include "natmot/universal.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace natmot {

/// A theorem-level check failed (the connection is not unique or does not
/// exist). Carries the solution-space dimension when there is one.
class StructuralError : public std::runtime_error {
 public:
  StructuralError(const std::string& what, std::optional<std::size_t> dimension = std::nullopt)
      : std::runtime_error(what), dimension_(dimension) {}
  std::optional<std::size_t> dimension() const { return dimension_; }

 private:
  std::optional<std::size_t> dimension_;
};

struct ToricBiextension {
  ToricOneMotive M1;
  ToricOneMotive M2;
  IntMatrix beta1;  // d2 x r1
  IntMatrix beta2;  // d1 x r2

  ToricBiextension() = default;
  ToricBiextension(ToricOneMotive m1, ToricOneMotive m2, IntMatrix b1, IntMatrix b2)
      : M1(std::move(m1)), M2(std::move(m2)), beta1(std::move(b1)), beta2(std::move(b2)) {
    require(beta1.rows() == M2.d && beta1.cols() == M1.r, "beta1 must be d2 x r1");
    require(beta2.rows() == M1.d && beta2.cols() == M2.r, "beta2 must be d1 x r2");
  }

  QStarElem s1(const IntVector& n, const QStarVector& t2) const { return character_value(t2, beta1 * n); }
  QStarElem s2(const QStarVector& t1, const IntVector& m) const { return character_value(t1, beta2 * m); }

  /// Sum in Biext: trivializations multiply, so the beta matrices add.
  friend ToricBiextension operator+(const ToricBiextension& a, const ToricBiextension& b) {
    require(a.M1 == b.M1 && a.M2 == b.M2, "adding biextensions of different motive pairs");
    return {a.M1, a.M2, a.beta1 + b.beta1, a.beta2 + b.beta2};
  }
};

/// Poincare biextension of (M, M'): both trivializations are the identity.
inline ToricBiextension poincare(const ToricOneMotive& M) {
  return {M, cartier_dual(M), IntMatrix::identity(M.r), IntMatrix::identity(M.d)};
}

/// One message per generator pair (e_i, e_l) of X1 x X2 on which the two
/// trivializations disagree.
inline std::vector<std::string> validate(const ToricBiextension& B) {
  std::vector<std::string> violations;
  for (std::size_t i = 0; i < B.M1.r; ++i)
    for (std::size_t l = 0; l < B.M2.r; ++l) {
      auto n = unit_vector(B.M1.r, i), m = unit_vector(B.M2.r, l);
      QStarElem lhs = B.s1(n, B.M2.apply(m));
      QStarElem rhs = B.s2(B.M1.apply(n), m);
      if (lhs != rhs)
        violations.push_back("trivializations disagree at (e" + std::to_string(i + 1) + ", e" + std::to_string(l + 1) +
                             "): " + lhs.str() + " != " + rhs.str());
    }
  return violations;
}

/// Coordinates (x, t | y, z) on G1^nat x G2^nat: x additive (r1), t toric
/// (d1), y additive (r2), z toric (d2).
struct ProductCoords {
  Coords all;
  Coords left;   // (x, t)
  Coords right;  // (y, z)
  std::size_t r1, d1, r2, d2;

  std::size_t x(std::size_t i) const { return i; }
  std::size_t t(std::size_t j) const { return r1 + j; }
  std::size_t y(std::size_t l) const { return r1 + d1 + l; }
  std::size_t z(std::size_t k) const { return r1 + d1 + r2 + k; }
  std::size_t left_size() const { return r1 + d1; }
  std::size_t right_size() const { return r2 + d2; }
};

inline ProductCoords product_coords(std::size_t r1, std::size_t d1, std::size_t r2, std::size_t d2) {
  auto cat = [](std::vector<Variable> a, const std::vector<Variable>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  auto left = cat(variable_family("x", r1, VarKind::Additive, FactorTag::Left),
                  variable_family("t", d1, VarKind::Toric, FactorTag::Left));
  auto right = cat(variable_family("y", r2, VarKind::Additive, FactorTag::Right),
                   variable_family("z", d2, VarKind::Toric, FactorTag::Right));
  return {make_coords(cat(left, right)), make_coords(left), make_coords(right), r1, d1, r2, d2};
}

inline ProductCoords product_coords(const ToricBiextension& B) {
  return product_coords(B.M1.r, B.M1.d, B.M2.r, B.M2.d);
}

/// The canonical connection: dz/z + omega on the trivial torsor, omega a
/// 1-form on G1^nat x G2^nat.
struct NatStructure {
  ProductCoords coords;
  Form1 connectionForm;
  std::size_t ansatzDegree = 1;
  std::size_t unknowns = 0;
  std::size_t equations = 0;
  ParameterizedForm1 ansatz;
  RatVector parameters;
  std::vector<std::size_t> parameterDegrees;

  /// All ansatz coefficients of additive degree >= 2 are zero.
  bool higher_coefficients_vanish() const {
    for (std::size_t k = 0; k < parameters.size(); ++k)
      if (parameterDegrees[k] >= 2 && parameters[k] != 0) return false;
    return true;
  }
};

namespace detail {

inline void monomials_up_to(std::size_t nvars, const std::vector<std::size_t>& vars, std::size_t start,
                            std::size_t budget, Exponent& cur, std::vector<Exponent>& out) {
  out.push_back(cur);
  if (budget == 0) return;
  for (std::size_t k = start; k < vars.size(); ++k) {
    ++cur[vars[k]];
    monomials_up_to(nvars, vars, k, budget - 1, cur, out);
    --cur[vars[k]];
  }
}

// Copy of a coordinate system with the variables of one factor doubled, and
// the maps (mu x id), (p1 x id), (p2 x id) back to the original.
struct PartialLawMaps {
  AffineMonomialMap mu, p1, p2;
};

inline PartialLawMaps partial_group_law(const ProductCoords& pc, FactorTag doubled) {
  const auto& cs = *pc.all;
  std::vector<Variable> vars;
  std::vector<std::size_t> first(cs.size()), second(cs.size());
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (cs[i].tag == doubled) {
      first[i] = vars.size();
      vars.push_back({cs[i].name + "'", cs[i].kind, cs[i].tag});
    } else {
      first[i] = second[i] = vars.size();
      vars.push_back(cs[i]);
    }
  }
  for (std::size_t i = 0; i < cs.size(); ++i)
    if (cs[i].tag == doubled) {
      second[i] = vars.size();
      vars.push_back({cs[i].name + "''", cs[i].kind, cs[i].tag});
    }
  auto src = make_coords(std::move(vars));
  std::vector<CoordImage> mu, p1, p2;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    bool additive = cs[i].kind == VarKind::Additive;
    auto one = [&](std::size_t s) -> CoordImage {
      if (additive) return AffineExpr{0, {{s, 1}}};
      return MonomialExpr{QStarElem(), {{s, 1}}};
    };
    if (cs[i].tag != doubled) {
      mu.push_back(one(first[i]));
      p1.push_back(one(first[i]));
      p2.push_back(one(first[i]));
    } else {
      if (additive)
        mu.emplace_back(AffineExpr{0, {{first[i], 1}, {second[i], 1}}});
      else
        mu.emplace_back(MonomialExpr{QStarElem(), {{first[i], 1}, {second[i], 1}}});
      p1.push_back(one(first[i]));
      p2.push_back(one(second[i]));
    }
  }
  return {AffineMonomialMap(src, pc.all, std::move(mu)), AffineMonomialMap(src, pc.all, std::move(p1)),
          AffineMonomialMap(src, pc.all, std::move(p2))};
}

// Inclusion of one factor at a fixed point of the other: the fixed factor's
// coordinates become the constants (a, t).
inline AffineMonomialMap fiber_inclusion(const ProductCoords& pc, FactorTag fixed, const RatVector& a,
                                         const QStarVector& t) {
  const auto& cs = *pc.all;
  const Coords& src = fixed == FactorTag::Left ? pc.right : pc.left;
  std::vector<CoordImage> images;
  std::size_t a_idx = 0, t_idx = 0, s_idx = 0;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    bool additive = cs[i].kind == VarKind::Additive;
    if (cs[i].tag == fixed) {
      if (additive)
        images.emplace_back(AffineExpr{a.at(a_idx++), {}});
      else
        images.emplace_back(MonomialExpr{t.at(t_idx++), {}});
    } else {
      if (additive)
        images.emplace_back(AffineExpr{0, {{s_idx++, 1}}});
      else
        images.emplace_back(MonomialExpr{QStarElem(), {{s_idx++, 1}}});
    }
  }
  require(a_idx == a.size() && t_idx == t.size(), "fiber point has the wrong shape");
  return AffineMonomialMap(src, pc.all, std::move(images));
}

inline RatVector to_rational(const IntVector& v) { return RatVector(v.begin(), v.end()); }

}  // namespace detail

/// Closed form sum_k (beta1 x)_k dlog z_k + sum_j (beta2 y)_j dlog t_j.
inline Form1 expected_connection_form(const ToricBiextension& B) {
  auto pc = product_coords(B);
  const std::size_t n = pc.all->size();
  Form1 w(pc.all);
  for (std::size_t k = 0; k < pc.d2; ++k)
    for (std::size_t i = 0; i < pc.r1; ++i)
      w.add(pc.z(k), Rational(B.beta1(k, i)) * LaurentPoly::variable(n, pc.x(i)));
  for (std::size_t j = 0; j < pc.d1; ++j)
    for (std::size_t l = 0; l < pc.r2; ++l)
      w.add(pc.t(j), Rational(B.beta2(j, l)) * LaurentPoly::variable(n, pc.y(l)));
  return w;
}

/// Builds the ansatz (coefficients polynomial of degree <= `degree` in the
/// additive coordinates, constant in the toric ones) and the horizontality
/// and trivialization constraints.
struct NatConstraintSystem {
  ProductCoords coords;
  ParameterizedForm1 ansatz;
  std::vector<std::size_t> parameterDegrees;
  std::vector<FormEquation> equations;
};

inline NatConstraintSystem nat_constraint_system(const ToricBiextension& B, std::size_t degree = 1) {
  NatConstraintSystem sys{product_coords(B), {}, {}, {}};
  const auto& pc = sys.coords;
  const std::size_t n = pc.all->size();
  sys.ansatz.coords = pc.all;

  auto additive = pc.all->indices(VarKind::Additive);
  std::vector<Exponent> monos;
  Exponent cur(n, 0);
  detail::monomials_up_to(n, additive, 0, degree, cur, monos);
  for (std::size_t c = 0; c < n; ++c)
    for (const auto& e : monos) {
      auto mono = LaurentPoly::monomial(1, e);
      sys.ansatz.basis.push_back(Form1::basis(pc.all, c, mono));
      sys.ansatz.labels.push_back("[" + covector_name((*pc.all)[c]) + "] " + mono.str(*pc.all));
      sys.parameterDegrees.push_back(static_cast<std::size_t>(mono.degree_in(additive)));
    }

  // Horizontality of both partial group laws.
  for (auto tag : {FactorTag::Left, FactorTag::Right}) {
    auto law = detail::partial_group_law(pc, tag);
    sys.equations.push_back({tag == FactorTag::Left ? "left group law" : "right group law",
                             {{1, law.mu}, {-1, law.p1}, {-1, law.p2}},
                             Form1(law.mu.source())});
  }

  // Trivialization over X1 x G2^nat: at the lift (e_i, u1(e_i)) the form must
  // restrict to dlog s1(e_i, .) = sum_k (beta1 e_i)_k dlog z_k.
  for (std::size_t i = 0; i < pc.r1; ++i) {
    auto n_i = unit_vector(pc.r1, i);
    auto incl = detail::fiber_inclusion(pc, FactorTag::Left, detail::to_rational(n_i), B.M1.apply(n_i));
    Form1 target = dlog_character(B.beta1 * n_i, pc.right);
    sys.equations.push_back({"trivialization over e" + std::to_string(i + 1) + " of X1", {{1, incl}}, target});
  }
  // Trivialization over G1^nat x X2, symmetrically.
  for (std::size_t l = 0; l < pc.r2; ++l) {
    auto m_l = unit_vector(pc.r2, l);
    auto incl = detail::fiber_inclusion(pc, FactorTag::Right, detail::to_rational(m_l), B.M2.apply(m_l));
    Form1 target = dlog_character(B.beta2 * m_l, pc.left);
    sys.equations.push_back({"trivialization over e" + std::to_string(l + 1) + " of X2", {{1, incl}}, target});
  }
  return sys;
}

/// Solves for the connection form; the solution must exist and be unique.
inline NatStructure canonical_nat_structure(const ToricBiextension& B, std::size_t degree = 1) {
  if (auto v = validate(B); !v.empty()) throw ContractViolation("canonical_nat_structure: invalid biextension: " + v.front());
  auto sys = nat_constraint_system(B, degree);
  auto result = solve_linear_form_system(sys.ansatz, sys.equations);
  if (std::holds_alternative<NoSolution>(result))
    throw StructuralError("no connection satisfies the horizontality and trivialization constraints");
  if (auto* nu = std::get_if<NonUnique>(&result))
    throw StructuralError("connection is not unique: solution space has dimension " + std::to_string(nu->dimension),
                          nu->dimension);
  auto& sol = std::get<UniqueSolution>(result);
  NatStructure ns;
  ns.coords = sys.coords;
  ns.connectionForm = sol.form;
  ns.ansatzDegree = degree;
  ns.unknowns = sys.ansatz.basis.size();
  ns.equations = sys.equations.size();
  ns.ansatz = std::move(sys.ansatz);
  ns.parameters = std::move(sol.values);
  ns.parameterDegrees = std::move(sys.parameterDegrees);
  return ns;
}

/// Phi(v, w) = R(v + 0, 0 + w) for v in T_dR(M1), w in T_dR(M2).
struct PairingMatrix {
  RatMatrix phi;
  std::vector<std::string> rowLabels;
  std::vector<std::string> colLabels;
  Form1 connectionForm;
  Form2 curvature;
};

inline PairingMatrix deligne_pairing(const ToricBiextension& B) {
  auto ns = canonical_nat_structure(B);
  const auto& pc = ns.coords;
  Form2 R = exterior_d(ns.connectionForm);
  const std::size_t n = pc.all->size(), L = pc.left_size(), Rn = pc.right_size();
  auto tangent = [&](std::size_t i) { return unit_tangent(n, i); };
  for (std::size_t a = 0; a < L; ++a)
    for (std::size_t b = a + 1; b < L; ++b)
      if (eval_form2_at_identity(R, tangent(a), tangent(b)) != 0)
        throw StructuralError("curvature does not vanish on Lie(G1^nat) x Lie(G1^nat)");
  for (std::size_t a = L; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (eval_form2_at_identity(R, tangent(a), tangent(b)) != 0)
        throw StructuralError("curvature does not vanish on Lie(G2^nat) x Lie(G2^nat)");
  PairingMatrix P;
  P.phi = RatMatrix(L, Rn);
  for (std::size_t a = 0; a < L; ++a)
    for (std::size_t b = 0; b < Rn; ++b) P.phi(a, b) = eval_form2_at_identity(R, tangent(a), tangent(L + b));
  auto left = de_rham(B.M1, "x", "t"), right = de_rham(B.M2, "y", "z");
  P.rowLabels = left.labels;
  P.colLabels = right.labels;
  P.connectionForm = ns.connectionForm;
  P.curvature = R;
  return P;
}

struct PerfectnessReport {
  bool square = false;
  std::optional<Rational> det;
  bool perfect = false;
  bool unimodular = false;
};

inline PerfectnessReport is_perfect(const RatMatrix& phi) {
  PerfectnessReport rep;
  rep.square = phi.rows() == phi.cols();
  if (!rep.square) return rep;
  rep.det = determinant(phi);
  rep.perfect = *rep.det != 0;
  rep.unimodular = abs(*rep.det) == 1;
  return rep;
}

/// Phi of the Poincare biextension vanishes on (vector x vector) and
/// (Lie x Lie), and its two cross blocks are unimodular.
inline bool weight_block_check(const ToricOneMotive& M) {
  auto P = deligne_pairing(poincare(M));
  const std::size_t r = M.r, d = M.d;
  // rows: x (r), lt (d); columns: y (d), lz (r)
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (P.phi(i, j) != 0) return false;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < r; ++j)
      if (P.phi(r + i, d + j) != 0) return false;
  auto upper = is_perfect(P.phi.submatrix(0, d, r, r));
  auto lower = is_perfect(P.phi.submatrix(r, 0, d, d));
  return upper.unimodular && lower.unimodular;
}

/// The pairing omega_T x Lie(T) -> Q obtained from d(sum_j x_j dlog t_j).
inline RatMatrix tautological_pairing_check(std::size_t d) {
  auto pc = product_coords(d, 0, 0, d);
  const std::size_t n = pc.all->size();
  Form1 alpha(pc.all);
  for (std::size_t j = 0; j < d; ++j) alpha.add(pc.z(j), LaurentPoly::variable(n, pc.x(j)));
  Form2 R = exterior_d(alpha);
  RatMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = eval_form2_at_identity(R, unit_tangent(n, pc.x(i)), unit_tangent(n, pc.z(j)));
  return m;
}

/// A point (a, t) of G^nat(Q) = Q^r x (Q*)^d.
struct NatPoint {
  RatVector a;
  QStarVector t;
  friend bool operator==(const NatPoint&, const NatPoint&) = default;
};

/// The natural extension P_g of M' by Gm at g = t, described by its lift
/// class on X' and the invariant part of its normal differential.
struct NatExtensionOnFiber {
  QStarVector basepoint;
  QStarVector liftClass;
  RatVector normalDifferential;
  friend bool operator==(const NatExtensionOnFiber&, const NatExtensionOnFiber&) = default;
};

/// Restricts the canonical connection of the Poincare biextension to the
/// fiber over p.
inline NatExtensionOnFiber psi_point(const ToricOneMotive& M, const NatPoint& p) {
  require(p.a.size() == M.r && p.t.size() == M.d, "point does not lie on G^nat");
  auto B = poincare(M);
  auto ns = canonical_nat_structure(B);
  const auto& pc = ns.coords;
  auto incl = detail::fiber_inclusion(pc, FactorTag::Left, p.a, p.t);
  Form1 restricted = incl.pullback(ns.connectionForm);
  NatExtensionOnFiber out;
  out.basepoint = p.t;
  // The restricted form is an invariant differential on G'^nat; read off its
  // dlog z coefficients and insist nothing else survives.
  auto e = identity_point(*pc.right);
  for (const auto& [cov, poly] : restricted.coefficients()) {
    bool constant = poly.terms().size() == 1 &&
                    std::all_of(poly.terms().begin()->first.begin(), poly.terms().begin()->first.end(),
                                [](std::int64_t k) { return k == 0; });
    if ((*pc.right)[cov].kind != VarKind::Toric || !constant)
      throw StructuralError("restricted connection is not an invariant toric differential");
  }
  for (std::size_t k = 0; k < pc.d2; ++k) out.normalDifferential.push_back(restricted.coefficient(pc.r2 + k).evaluate(e));
  for (std::size_t l = 0; l < pc.r2; ++l) out.liftClass.push_back(B.s2(p.t, unit_vector(pc.r2, l)));
  return out;
}

/// Inverse of psi_point; rejects fiber data whose lift class is not the one
/// determined by the basepoint.
inline NatPoint psi_inverse(const ToricOneMotive& M, const NatExtensionOnFiber& fiber) {
  require(fiber.basepoint.size() == M.d && fiber.liftClass.size() == M.d && fiber.normalDifferential.size() == M.r,
          "fiber data has the wrong shape");
  auto B = poincare(M);
  for (std::size_t l = 0; l < M.d; ++l)
    if (fiber.liftClass[l] != B.s2(fiber.basepoint, unit_vector(M.d, l)))
      throw DomainError("lift class does not match the basepoint");
  auto a = solve_unique(to_rational(B.beta1), fiber.normalDifferential);
  if (!a) throw DomainError("normal differential is not attained");
  return {*a, fiber.basepoint};
}

}  // namespace natmot
