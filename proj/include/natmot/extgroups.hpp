#pragma once

// Hom, Ext and Ext^nat of toric 1-motives into Gm, and exactness checks for
// the sequences relating them.
//
// Q^d/Z^d and Q* are not finitely generated, so every group here is cut down
// to a window: normal differentials in (1/N)Z^d and units in the S-units
// (±1) x <S>. Inside a window each group is a presentation Z^n / span(R) and
// every statement is decided exactly on generators.

#include "natmot/motive.hpp"
#include "natmot/qlinalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace natmot {

struct ApproximationWindow {
  std::vector<Prime> primes;
  Integer denominatorBound = 1;

  std::string str() const {
    std::string s = "S={";
    for (std::size_t i = 0; i < primes.size(); ++i) s += (i ? "," : "") + std::to_string(primes[i]);
    return s + "}, N=" + to_string(denominatorBound);
  }
};

/// Throws DomainError unless N >= 1 and S contains every prime of u.
inline void check_window(const ToricOneMotive& M, const ApproximationWindow& w) {
  if (w.denominatorBound < 1) throw DomainError("denominator bound must be at least 1");
  SUnitLattice lattice(w.primes, 1);
  for (Prime p : M.primes())
    if (!lattice.covers(QStarElem::from_parts(1, {{p, 1}})))
      throw DomainError("prime " + std::to_string(p) + " of u lies outside the window " + w.str());
}

/// The window enlarged to contain the primes of u.
inline ApproximationWindow covering_window(const ToricOneMotive& M, ApproximationWindow w) {
  std::set<Prime> s(w.primes.begin(), w.primes.end());
  s.merge(M.primes());
  w.primes.assign(s.begin(), s.end());
  return w;
}

/// u'(e_j), the j-th row of u: the character twist by e_j in X' = Z^d.
inline QStarVector dual_image(const ToricOneMotive& M, std::size_t j) { return M.u.row(j); }

inline QStarVector dual_apply(const ToricOneMotive& M, const IntVector& m) {
  require(m.size() == M.d, "character has wrong rank");
  QStarVector out(M.r);
  for (std::size_t j = 0; j < M.d; ++j) out = mul(out, pow(dual_image(M, j), m[j]));
  return out;
}

/// Basis (columns) of H(M) = {m in Z^d : prod_j u_ji^{m_j} = 1 for all i}.
inline IntMatrix hom_to_gm(const ToricOneMotive& M) {
  if (M.r == 0) return IntMatrix::identity(M.d);
  auto primes = M.primes();
  SUnitLattice lattice(std::vector<Prime>(primes.begin(), primes.end()), M.r);
  // Columns: encodings of u'(e_j), then 2 e_sign slack so signs compare mod 2.
  IntMatrix E(lattice.dimension(), M.d);
  for (std::size_t j = 0; j < M.d; ++j) {
    auto col = lattice.encode(dual_image(M, j));
    for (std::size_t i = 0; i < col.size(); ++i) E(i, j) = col[i];
  }
  IntMatrix K = kernel_basis(hcat(E, lattice.sign_relations()));
  IntMatrix H = lattice_basis(K.submatrix(0, 0, M.d, K.cols()));
  for (std::size_t c = 0; c < H.cols(); ++c)
    if (dual_apply(M, H.column(c)) != QStarVector(M.r))
      throw std::logic_error("hom_to_gm: basis vector is not a character of M");
  return H;
}

/// H^nabla(M): the characters in H(M) with dlog = 0. dlog is the inclusion
/// Z^d -> Q^d, so this is the kernel of the basis matrix of H(M) over Q.
inline IntMatrix hom_nabla(const ToricOneMotive& M) {
  IntMatrix H = hom_to_gm(M);
  IntMatrix K = kernel_basis(H);
  IntMatrix out = lattice_basis(H * K);
  if (out.cols() != 0) throw std::logic_error("hom_nabla: dlog has a kernel on characters");
  return IntMatrix(M.d, 0);
}

/// S-part of Ext(M, Gm) = (Q*)^r / u'(Z^d), on the generators of
/// SUnitLattice(S, r). The part coming from primes outside S is free of
/// rank r per prime and is only recorded symbolically.
struct ExtGmGroup {
  ApproximationWindow window;
  SUnitLattice lattice{{}, 0};
  GroupPresentation presentation;
  std::string freePart;

  bool is_trivial_class(const QStarVector& e) const { return presentation.is_zero(lattice.encode(e)); }
};

inline ExtGmGroup ext_gm(const ToricOneMotive& M, const ApproximationWindow& window) {
  check_window(M, window);
  ExtGmGroup g{window, SUnitLattice(window.primes, M.r), {}, {}};
  std::vector<QStarVector> rels;
  for (std::size_t j = 0; j < M.d; ++j) rels.push_back(dual_image(M, j));
  g.presentation = quotient_presentation(g.lattice, rels);
  g.freePart = M.r == 0 ? "0" : "free on primes outside S, rank " + std::to_string(M.r) + " each";
  return g;
}

/// m in Z^d with u'(m) = e, or nothing when the class of e is nonzero.
inline std::optional<IntVector> ext_class_is_trivial(const ToricOneMotive& M, const QStarVector& e) {
  require(e.size() == M.r, "extension class must have r components");
  if (M.r == 0) return IntVector(M.d, Integer(0));
  std::vector<QStarVector> gens;
  for (std::size_t j = 0; j < M.d; ++j) gens.push_back(dual_image(M, j));
  auto m = subgroup_membership(e, gens);
  if (m && dual_apply(M, *m) != e) throw std::logic_error("ext_class_is_trivial: witness fails re-multiplication");
  return m;
}

/// An extension of M by Gm with connection, split as a normal differential
/// sum_j omega_j dlog t_j and a lift class c in (Q*)^r.
struct NatExtClass {
  RatVector differentialPart;
  QStarVector extensionPart;
};

/// (omega, c) ~ (omega + m, c u'(m)) for m in Z^d. Since dlog is injective
/// the only candidate twist is m = omega_b - omega_a.
inline bool nat_classes_equal(const ToricOneMotive& M, const NatExtClass& a, const NatExtClass& b) {
  require(a.differentialPart.size() == M.d && b.differentialPart.size() == M.d, "differential part must have d entries");
  require(a.extensionPart.size() == M.r && b.extensionPart.size() == M.r, "extension part must have r entries");
  IntVector m(M.d);
  for (std::size_t j = 0; j < M.d; ++j) {
    Rational diff = b.differentialPart[j] - a.differentialPart[j];
    if (!is_integral(diff)) return false;
    m[j] = numerator(diff);
  }
  return mul(a.extensionPart, dual_apply(M, m)) == b.extensionPart;
}

/// Ext^nat(M, Gm) in a window: ((1/N)Z^d + S-units^r) / <(m, u'(m))>. The
/// first d generators are (1/N) dlog t_j; the rest follow SUnitLattice labels.
struct NatExtGroup {
  ToricOneMotive motive;
  ApproximationWindow window;
  SUnitLattice lattice{{}, 0};
  GroupPresentation presentation;

  std::size_t d() const { return motive.d; }

  /// Generator coordinates of a class; N omega must be integral.
  IntVector encode(const NatExtClass& c) const {
    require(c.differentialPart.size() == d() && c.extensionPart.size() == motive.r, "class has the wrong shape");
    IntVector x;
    for (const auto& w : c.differentialPart) {
      Rational scaled = w * window.denominatorBound;
      if (!is_integral(scaled)) throw DomainError("differential " + to_string(w) + " is outside (1/N)Z");
      x.push_back(numerator(scaled));
    }
    auto tail = lattice.encode(c.extensionPart);
    x.insert(x.end(), tail.begin(), tail.end());
    return x;
  }

  bool equal(const NatExtClass& a, const NatExtClass& b) const {
    IntVector x = encode(a), y = encode(b);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= y[i];
    return presentation.is_zero(x);
  }
};

/// Relation columns (N e_j, u'(e_j)) followed by the sign relations.
inline IntMatrix nat_ext_relations(const ToricOneMotive& M, const SUnitLattice& lattice, const Integer& N) {
  const std::size_t n = M.d + lattice.dimension();
  IntMatrix R(n, M.d + lattice.components());
  for (std::size_t j = 0; j < M.d; ++j) {
    R(j, j) = N;
    auto col = lattice.encode(dual_image(M, j));
    for (std::size_t i = 0; i < col.size(); ++i) R(M.d + i, j) = col[i];
  }
  for (std::size_t c = 0; c < lattice.components(); ++c) R(M.d + lattice.sign_slot(c), M.d + c) = 2;
  return R;
}

inline NatExtGroup nat_ext_group(const ToricOneMotive& M, const ApproximationWindow& window) {
  check_window(M, window);
  NatExtGroup g{M, window, SUnitLattice(window.primes, M.r), {}};
  g.presentation = cokernel_presentation(nat_ext_relations(M, g.lattice, window.denominatorBound));
  for (std::size_t j = 0; j < M.d; ++j)
    g.presentation.generatorLabels.push_back("1/" + to_string(window.denominatorBound) + " dlog t" +
                                             (M.d == 1 ? "" : std::to_string(j + 1)));
  for (const auto& l : g.lattice.labels()) g.presentation.generatorLabels.push_back(l);
  return g;
}

/// A group Z^n / span(relations) inside a sequence.
struct WindowGroup {
  std::string name;
  std::size_t gens = 0;
  IntMatrix relations;
};

/// An arrow between consecutive WindowGroups, as an integer matrix on
/// generator coordinates.
struct WindowArrow {
  std::string name;
  IntMatrix matrix;
};

struct Junction {
  std::string at;
  bool exact = true;
  std::optional<IntVector> witness;
  std::string detail;
};

struct ExactSequenceReport {
  std::string title;
  std::vector<std::string> groups;
  std::vector<std::string> arrows;
  std::vector<Junction> junctions;
  std::vector<std::string> notes;
  ApproximationWindow window;

  bool all_exact() const {
    return std::all_of(junctions.begin(), junctions.end(), [](const Junction& j) { return j.exact; });
  }
};

namespace detail {

// Generators of {x : A x in span(R)} in Z^{A.cols()}.
inline IntMatrix preimage_of_zero(const IntMatrix& A, const IntMatrix& R) {
  IntMatrix K = kernel_basis(hcat(A, Integer(-1) * R));
  return K.submatrix(0, 0, A.cols(), K.cols());
}

inline IntMatrix relations_or_empty(const WindowGroup& g) {
  return g.relations.cols() == 0 ? IntMatrix(g.gens, 0) : g.relations;
}

}  // namespace detail

/// Checks 0 -> G0 -> G1 -> ... -> Gk -> 0 on generators: every arrow is well
/// defined and consecutive arrows compose to zero, the first arrow is
/// injective, each inner group is exact, the last arrow is surjective.
/// Witnesses are re-verified before they are reported.
inline ExactSequenceReport check_exact_sequence(std::string title, const std::vector<WindowGroup>& groups,
                                                const std::vector<WindowArrow>& arrows) {
  require(arrows.size() + 1 == groups.size(), "a sequence of k+1 groups needs k arrows");
  ExactSequenceReport rep;
  rep.title = std::move(title);
  for (const auto& g : groups) rep.groups.push_back(g.name);
  for (const auto& a : arrows) rep.arrows.push_back(a.name);

  for (std::size_t k = 0; k < arrows.size(); ++k) {
    const auto& A = arrows[k].matrix;
    require(A.cols() == groups[k].gens && A.rows() == groups[k + 1].gens, "arrow " + arrows[k].name + " has the wrong shape");
    IntMatrix Rsrc = detail::relations_or_empty(groups[k]), Rtgt = detail::relations_or_empty(groups[k + 1]);
    for (std::size_t c = 0; c < Rsrc.cols(); ++c)
      if (!lattice_contains(Rtgt, A * Rsrc.column(c)))
        throw ContractViolation("arrow " + arrows[k].name + " does not respect the relations of " + groups[k].name);
  }

  // Injectivity of the first arrow.
  {
    const auto& A = arrows.front().matrix;
    IntMatrix Rsrc = detail::relations_or_empty(groups[0]), Rtgt = detail::relations_or_empty(groups[1]);
    Junction j{groups[0].name, true, std::nullopt, "injective"};
    IntMatrix K = detail::preimage_of_zero(A, Rtgt);
    for (std::size_t c = 0; c < K.cols() && j.exact; ++c)
      if (!lattice_contains(Rsrc, K.column(c))) {
        j.exact = false;
        j.witness = K.column(c);
        j.detail = "nonzero element in the kernel of " + arrows.front().name;
      }
    rep.junctions.push_back(j);
  }

  // Exactness at every inner group.
  for (std::size_t k = 1; k + 1 < groups.size(); ++k) {
    const auto& alpha = arrows[k - 1].matrix;
    const auto& beta = arrows[k].matrix;
    IntMatrix Rmid = detail::relations_or_empty(groups[k]), Rtgt = detail::relations_or_empty(groups[k + 1]);
    Junction j{groups[k].name, true, std::nullopt, "exact"};
    for (std::size_t c = 0; c < alpha.cols() && j.exact; ++c)
      if (!lattice_contains(Rtgt, beta * alpha.column(c))) {
        j.exact = false;
        j.witness = alpha.column(c);
        j.detail = "composite " + arrows[k].name + " o " + arrows[k - 1].name + " is nonzero on this generator";
      }
    IntMatrix image = hcat(alpha, Rmid);
    IntMatrix K = detail::preimage_of_zero(beta, Rtgt);
    for (std::size_t c = 0; c < K.cols() && j.exact; ++c)
      if (!lattice_contains(image, K.column(c))) {
        j.exact = false;
        j.witness = K.column(c);
        j.detail = "element of ker " + arrows[k].name + " not in the image of " + arrows[k - 1].name;
      }
    rep.junctions.push_back(j);
  }

  // Surjectivity of the last arrow.
  {
    const auto& A = arrows.back().matrix;
    const auto& tgt = groups.back();
    IntMatrix image = hcat(A, detail::relations_or_empty(tgt));
    Junction j{tgt.name, true, std::nullopt, "surjective"};
    for (std::size_t i = 0; i < tgt.gens && j.exact; ++i)
      if (!lattice_contains(image, unit_vector(tgt.gens, i))) {
        j.exact = false;
        j.witness = unit_vector(tgt.gens, i);
        j.detail = "generator not in the image of " + arrows.back().name;
      }
    rep.junctions.push_back(j);
  }

  // Re-check every failure witness before it leaves this function.
  for (std::size_t k = 0; k < rep.junctions.size(); ++k) {
    const auto& j = rep.junctions[k];
    if (j.exact) continue;
    const IntVector& w = *j.witness;
    bool ok;
    if (k == 0) {
      ok = lattice_contains(detail::relations_or_empty(groups[1]), arrows[0].matrix * w) &&
           !lattice_contains(detail::relations_or_empty(groups[0]), w);
    } else if (k + 1 == rep.junctions.size()) {
      ok = !lattice_contains(hcat(arrows.back().matrix, detail::relations_or_empty(groups.back())), w);
    } else {
      IntMatrix Rtgt = detail::relations_or_empty(groups[k + 1]);
      if (j.detail.rfind("composite", 0) == 0)
        ok = !lattice_contains(Rtgt, arrows[k].matrix * (arrows[k - 1].matrix * w));
      else
        ok = lattice_contains(Rtgt, arrows[k].matrix * w) &&
             !lattice_contains(hcat(arrows[k - 1].matrix, detail::relations_or_empty(groups[k])), w);
    }
    if (!ok) throw std::logic_error("check_exact_sequence: failure witness did not re-verify");
  }
  return rep;
}

namespace detail {

inline WindowGroup nat_ext_window_group(const std::string& name, const NatExtGroup& g) {
  return {name, g.presentation.nGens, g.presentation.relations};
}

// Block embedding of an identity into rows [offset, offset + n).
inline IntMatrix embed_block(std::size_t rows, std::size_t offset, std::size_t n) {
  IntMatrix m(rows, n);
  for (std::size_t i = 0; i < n; ++i) m(offset + i, i) = 1;
  return m;
}

}  // namespace detail

/// Ext^nat([X -> 0], Gm) -a-> Ext^nat(M, Gm) -b-> Ext^nat(T, Gm) -> 0 with
/// a(c) = (0, c) and b(omega, c) = omega, plus injectivity of a. The arrow
/// through the abelian part is the zero map here and is only noted.
inline ExactSequenceReport verify_restriction_sequence(const ToricOneMotive& M, const ApproximationWindow& window) {
  check_window(M, window);
  ToricOneMotive lattice_part(M.r, 0, QStarMatrix(0, M.r));
  ToricOneMotive torus_part(0, M.d, QStarMatrix(M.d, 0));
  auto A = nat_ext_group(lattice_part, window);
  auto B = nat_ext_group(M, window);
  auto C = nat_ext_group(torus_part, window);
  const std::size_t s = B.lattice.dimension();
  IntMatrix alpha = detail::embed_block(B.presentation.nGens, M.d, s);
  IntMatrix beta = detail::embed_block(B.presentation.nGens, 0, M.d).transpose();
  auto rep = check_exact_sequence("Ext^nat([X->0],Gm) -> Ext^nat(M,Gm) -> Ext^nat(T,Gm) -> 0",
                                  {detail::nat_ext_window_group("Ext^nat([X->0],Gm)", A),
                                   detail::nat_ext_window_group("Ext^nat(M,Gm)", B),
                                   detail::nat_ext_window_group("Ext^nat(T,Gm)", C)},
                                  {{"alpha", alpha}, {"beta", beta}});
  rep.window = window;
  rep.notes.push_back("no abelian part: the connecting arrow through Ext(A) is the zero map");
  return rep;
}

/// H^nabla(T') cap H(M') == H^nabla(M'), both sides computed separately.
inline bool verify_character_intersection(const ToricOneMotive& M) {
  auto Mp = cartier_dual(M);
  ToricOneMotive torus(0, Mp.d, QStarMatrix(Mp.d, 0));
  IntMatrix lhs = lattice_intersection(hom_nabla(torus), hom_to_gm(Mp));
  IntMatrix rhs = hom_nabla(Mp);
  return lattices_equal(lhs, rhs);
}

/// 0 -> Z^r -v-> G^nat(window) -phi-> Ext^nat(M', Gm) -> 0, where G^nat is
/// (1/N)Z^r x S-units^d, v(n) = (n, u(n)) and phi(a, t) is the class of
/// (a, t). The kernel of phi is checked in these direct coordinates.
inline ExactSequenceReport verify_points_sequence(const ToricOneMotive& M, const ApproximationWindow& window) {
  check_window(M, window);
  auto Mp = cartier_dual(M);
  auto E = nat_ext_group(Mp, window);
  SUnitLattice torus(window.primes, M.d);
  const std::size_t n = M.r + torus.dimension();
  WindowGroup X{"X", M.r, IntMatrix(M.r, 0)};
  IntMatrix signs(n, M.d);
  for (std::size_t c = 0; c < M.d; ++c) signs(M.r + torus.sign_slot(c), c) = 2;
  WindowGroup G{"G^nat", n, signs};
  IntMatrix v(n, M.r);
  for (std::size_t i = 0; i < M.r; ++i) {
    v(i, i) = window.denominatorBound;
    auto col = torus.encode(M.u.column(i));
    for (std::size_t k = 0; k < col.size(); ++k) v(M.r + k, i) = col[k];
  }
  // Ext^nat(M') uses the same coordinates: r differentials, then S-units^d.
  IntMatrix phi = IntMatrix::identity(n);
  auto rep = check_exact_sequence("0 -> X -> G^nat -> Ext^nat(M',Gm) -> 0",
                                  {X, G, detail::nat_ext_window_group("Ext^nat(M',Gm)", E)},
                                  {{"v", v}, {"phi", phi}});
  rep.window = window;
  return rep;
}

/// 0 -> H^nabla -> H(M) -dlog-> omega_G -j-> Ext^nat(M,Gm) -> Ext(M,Gm) -> 0
/// in a window; omega_G is cut down to (1/N)Z^d.
inline ExactSequenceReport verify_ext_sequence(const ToricOneMotive& M, const ApproximationWindow& window) {
  check_window(M, window);
  IntMatrix H = hom_to_gm(M);
  auto nat = nat_ext_group(M, window);
  auto ext = ext_gm(M, window);
  const Integer& N = window.denominatorBound;
  const std::size_t s = nat.lattice.dimension();
  WindowGroup Hn{"H^nabla(M)", 0, IntMatrix(0, 0)};
  WindowGroup Hg{"H(M)", H.cols(), IntMatrix(H.cols(), 0)};
  WindowGroup W{"omega_G", M.d, IntMatrix(M.d, 0)};
  WindowGroup Nat = detail::nat_ext_window_group("Ext^nat(M,Gm)", nat);
  WindowGroup Ext{"Ext(M,Gm)", ext.presentation.nGens, ext.presentation.relations};
  IntMatrix incl(H.cols(), 0);
  IntMatrix dlog = N * H;
  IntMatrix j = detail::embed_block(nat.presentation.nGens, 0, M.d);
  IntMatrix forget = detail::embed_block(nat.presentation.nGens, M.d, s).transpose();
  auto rep = check_exact_sequence("0 -> H^nabla(M) -> H(M) -> omega_G -> Ext^nat(M,Gm) -> Ext(M,Gm) -> 0",
                                  {Hn, Hg, W, Nat, Ext},
                                  {{"inclusion", incl}, {"dlog", dlog}, {"j", j}, {"forget", forget}});
  rep.window = window;
  return rep;
}

}  // namespace natmot
