// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Reference values come from the brute-force routines in oracles.hpp
// or are written out directly, never from the code under test.

#include "natmot/biext.hpp"
#include "natmot/cli/document.hpp"
#include "natmot/extgroups.hpp"
#include "natmot/random.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace natmot;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
};

// Records the first failure message and keeps counting.
struct Tally {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first;

  void expect(bool ok, const std::string& what) {
    ++cases;
    if (!ok && failures++ == 0) first = what;
  }
  Outcome outcome(const std::string& summary) const {
    if (failures == 0) return {true, summary};
    return {false, std::to_string(failures) + " of " + std::to_string(cases) + " cases failed; first: " + first};
  }
};

oracle::Mat to_oracle(const IntMatrix& m) {
  oracle::Mat out(m.rows(), std::vector<oracle::i64>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = static_cast<oracle::i64>(m(i, j));
  return out;
}

// Phi with integer entries, or nothing.
std::optional<oracle::Mat> integral(const RatMatrix& m) {
  oracle::Mat out(m.rows(), std::vector<oracle::i64>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!is_integral(m(i, j))) return std::nullopt;
      out[i][j] = static_cast<oracle::i64>(numerator(m(i, j)));
    }
  return out;
}

std::string shape(const ToricOneMotive& M) { return "r=" + std::to_string(M.r) + ",d=" + std::to_string(M.d); }

// The 50-motive corpus shared by criteria 2-4.
std::vector<ToricOneMotive> closed_form_corpus() {
  Rng rng(20260101);
  auto pool = standard_entry_pool();
  std::vector<ToricOneMotive> out;
  for (int i = 0; i < 50; ++i) {
    std::size_t r = rng() % 4, d = rng() % 4;
    out.push_back(random_motive(rng, r, d, pool));
  }
  return out;
}

std::vector<ToricOneMotive> bundled_corpus() {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(NATMOT_CORPUS_DIR))
    if (e.path().extension() == ".motive") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<ToricOneMotive> out;
  for (const auto& f : files) {
    std::ifstream in(f);
    std::stringstream ss;
    ss << in.rdbuf();
    out.push_back(cli::parse_document(ss.str()).motive());
  }
  return out;
}

Outcome example_reproduction() {
  ToricOneMotive M(1, 0, QStarMatrix(0, 1));
  auto ns = canonical_nat_structure(poincare(M));
  auto pc = product_coords(1, 0, 0, 1);
  Form1 expected(pc.all);
  expected.add(pc.z(0), LaurentPoly::variable(pc.all->size(), pc.x(0)));
  Form2 curvature(pc.all);
  curvature.add(pc.x(0), pc.z(0), LaurentPoly::constant(pc.all->size(), 1));
  Tally t;
  t.expect(ns.connectionForm == expected, "omega = " + ns.connectionForm.str());
  t.expect(ns.connectionForm.str() == "x·dlog z", "printed omega " + ns.connectionForm.str());
  t.expect(exterior_d(ns.connectionForm) == curvature, "curvature " + exterior_d(ns.connectionForm).str());
  t.expect(curvature.str() == "dx ∧ dlog z", "printed curvature " + curvature.str());
  return t.outcome("omega = x·dlog z, curvature = dx ∧ dlog z");
}

Outcome general_closed_form(const std::vector<ToricOneMotive>& corpus) {
  Tally t;
  for (const auto& M : corpus) {
    auto ns = canonical_nat_structure(poincare(M));
    auto pc = product_coords(M.r, M.d, M.d, M.r);
    const std::size_t n = pc.all->size();
    Form1 expected(pc.all);
    for (std::size_t i = 0; i < M.r; ++i) expected.add(pc.z(i), LaurentPoly::variable(n, pc.x(i)));
    for (std::size_t j = 0; j < M.d; ++j) expected.add(pc.t(j), LaurentPoly::variable(n, pc.y(j)));
    t.expect(ns.connectionForm == expected, shape(M) + ": omega = " + ns.connectionForm.str());
  }
  return t.outcome(std::to_string(corpus.size()) + " motives match sum x_i dlog z_i + sum y_j dlog t_j");
}

Outcome perfectness(const std::vector<ToricOneMotive>& corpus) {
  Tally t;
  for (const auto& M : corpus) {
    auto phi = deligne_pairing(poincare(M)).phi;
    const std::size_t n = M.r + M.d;
    t.expect(phi.rows() == n && phi.cols() == n, shape(M) + ": Phi not square of size r+d");
    auto z = integral(phi);
    t.expect(z.has_value(), shape(M) + ": Phi not integral");
    if (!z || phi.rows() != n || phi.cols() != n) continue;
    oracle::i64 det = oracle::det(*z);
    t.expect(det == 1 || det == -1, shape(M) + ": det Phi = " + std::to_string(det));
    // rows (x, lt), columns (y, lz): the (x, y) and (lt, lz) blocks vanish.
    bool diagonal_zero = true;
    for (std::size_t i = 0; i < M.r; ++i)
      for (std::size_t j = 0; j < M.d; ++j) diagonal_zero &= (*z)[i][j] == 0;
    for (std::size_t i = 0; i < M.d; ++i)
      for (std::size_t j = 0; j < M.r; ++j) diagonal_zero &= (*z)[M.r + i][M.d + j] == 0;
    t.expect(diagonal_zero, shape(M) + ": a diagonal weight block is nonzero");
    oracle::Mat upper(M.r, std::vector<oracle::i64>(M.r)), lower(M.d, std::vector<oracle::i64>(M.d));
    for (std::size_t i = 0; i < M.r; ++i)
      for (std::size_t j = 0; j < M.r; ++j) upper[i][j] = (*z)[i][M.d + j];
    for (std::size_t i = 0; i < M.d; ++i)
      for (std::size_t j = 0; j < M.d; ++j) lower[i][j] = (*z)[M.r + i][j];
    oracle::i64 du = oracle::det(upper), dl = oracle::det(lower);
    t.expect((du == 1 || du == -1) && (dl == 1 || dl == -1), shape(M) + ": cross block not unimodular");
  }
  return t.outcome("square, |det| = 1, zero diagonal blocks, unimodular cross blocks on " + std::to_string(corpus.size()) +
                   " motives");
}

Outcome uniqueness(const std::vector<ToricOneMotive>& corpus) {
  Tally t;
  std::size_t max_unknowns = 0;
  for (const auto& M : corpus) {
    auto B = poincare(M);
    for (std::size_t degree : {1u, 2u}) {
      auto sys = nat_constraint_system(B, degree);
      auto result = solve_linear_form_system(sys.ansatz, sys.equations);
      auto* sol = std::get_if<UniqueSolution>(&result);
      std::string dim = std::holds_alternative<NoSolution>(result) ? "no solution"
                        : sol                                       ? "0"
                                                                    : std::to_string(std::get<NonUnique>(result).dimension);
      t.expect(sol != nullptr, shape(M) + ", degree " + std::to_string(degree) + ": solution space " + dim);
      if (!sol) continue;
      max_unknowns = std::max(max_unknowns, sys.ansatz.basis.size());
      if (degree == 2) {
        bool quadratic_zero = true;
        for (std::size_t k = 0; k < sol->values.size(); ++k)
          if (sys.parameterDegrees[k] >= 2 && sol->values[k] != 0) quadratic_zero = false;
        t.expect(quadratic_zero, shape(M) + ": a quadratic coefficient is nonzero");
      }
    }
  }
  return t.outcome("solution space dimension 0 at degrees 1 and 2 (up to " + std::to_string(max_unknowns) +
                   " unknowns), quadratic part 0");
}

Outcome tautological() {
  Tally t;
  for (std::size_t d = 0; d <= 5; ++d) t.expect(tautological_pairing_check(d) == RatMatrix::identity(d), "d=" + std::to_string(d));
  return t.outcome("identity for d = 0..5");
}

Outcome adjointness() {
  Rng rng(6);
  auto pool = standard_entry_pool();
  Tally t;
  for (int i = 0; i < 100; ++i) {
    auto M1 = random_motive(rng, rng() % 4, rng() % 4, pool);
    auto f = random_valid_morphism(rng, M1, rng() % 4, rng() % 4);
    auto phi1 = deligne_pairing(poincare(f.source)).phi;
    auto phi2 = deligne_pairing(poincare(f.target)).phi;
    auto Df = de_rham_map(f), Dfp = de_rham_map(dual_morphism(f));
    // Phi2(Df v, w) = Phi1(v, Df' w) on every pair of basis vectors.
    bool ok = true;
    for (std::size_t v = 0; v < Df.cols(); ++v)
      for (std::size_t w = 0; w < Dfp.cols(); ++w) {
        Rational lhs = 0, rhs = 0;
        for (std::size_t a = 0; a < Df.rows(); ++a) lhs += Df(a, v) * phi2(a, w);
        for (std::size_t b = 0; b < Dfp.rows(); ++b) rhs += phi1(v, b) * Dfp(b, w);
        ok &= lhs == rhs;
      }
    t.expect(ok, "morphism " + std::to_string(i) + " from " + shape(f.source) + " to " + shape(f.target));
  }
  return t.outcome("100 random valid morphisms, all basis pairs");
}

Outcome involution() {
  Rng rng(7);
  auto pool = standard_entry_pool();
  Tally t;
  for (int i = 0; i < 200; ++i) {
    auto M = random_motive(rng, rng() % 4, rng() % 4, pool);
    auto D = cartier_dual(M);
    // The dual is the transpose, written out entry by entry.
    bool transposed = D.r == M.d && D.d == M.r;
    for (std::size_t a = 0; transposed && a < M.d; ++a)
      for (std::size_t b = 0; b < M.r; ++b) transposed &= D.u(b, a) == M.u(a, b);
    t.expect(transposed, "dual of motive " + std::to_string(i) + " is not the transpose");
    t.expect(cartier_dual(D) == M, "double dual of motive " + std::to_string(i));
  }
  for (int i = 0; i < 100; ++i) {
    auto M = random_motive(rng, rng() % 4, rng() % 4, pool);
    // Targets of rank at least the source rank keep the redraw loop short.
    auto f = random_valid_morphism(rng, M, M.r + rng() % 2, rng() % 4);
    auto g = random_valid_morphism(rng, f.target, f.target.r + rng() % 2, rng() % 4);
    auto lhs = dual_morphism(compose(f, g));
    auto rhs = compose(dual_morphism(g), dual_morphism(f));
    t.expect(lhs.fX == rhs.fX && lhs.fT == rhs.fT && lhs.source == rhs.source && lhs.target == rhs.target,
             "composition " + std::to_string(i));
  }
  return t.outcome("double dual = id on 200 motives; (g f)' = f' g' on 100 composites");
}

Outcome universality() {
  Rng rng(8);
  auto pool = standard_entry_pool();
  Tally t;
  std::size_t singular = 0;
  for (int i = 0; i < 100; ++i) {
    std::size_t r = 1 + rng() % 3;
    auto M = random_motive(rng, r, rng() % 4, pool);
    IntMatrix V = random_int_matrix(rng, r, r, 2);
    if (i % 3 == 0 && r > 1) {
      std::size_t a = rng() % r, b = (a + 1) % r;
      for (std::size_t k = 0; k < r; ++k) V(k, b) = V(k, a);
    }
    oracle::i64 det = oracle::det(to_oracle(V));
    singular += det == 0;
    t.expect(is_universal(M, to_rational(V), M.u) == (det != 0), "V " + std::to_string(i) + " with det " + std::to_string(det));
    t.expect(is_universal(universal_extension(M)), "canonical lift " + std::to_string(i));
  }
  return t.outcome("100 random V (" + std::to_string(singular) + " singular) decided by det V; canonical lift accepted");
}

Outcome points_functor() {
  Rng rng(9);
  auto pool = standard_entry_pool();
  std::vector<Prime> primes{2, 3, 5, 7};
  Tally t;
  for (int i = 0; i < 100; ++i) {
    auto M = random_motive(rng, rng() % 4, rng() % 4, pool);
    NatPoint p{random_rational_vector(rng, M.r), random_torus_point(rng, M.d, primes)};
    t.expect(psi_inverse(M, psi_point(M, p)) == p, "psi_inverse(psi_point(p)) at point " + std::to_string(i));
    // Fiber data built by hand: for the Poincare biextension the lift class
    // of the fiber over t is t itself.
    auto t2 = random_torus_point(rng, M.d, primes);
    NatExtensionOnFiber fiber{t2, t2, random_rational_vector(rng, M.r)};
    t.expect(psi_point(M, psi_inverse(M, fiber)) == fiber, "psi_point(psi_inverse(x)) at point " + std::to_string(i));
  }
  return t.outcome("both composites are the identity on 100 points");
}

Outcome exact_sequences(const std::vector<ToricOneMotive>& corpus) {
  Tally t;
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    const auto& M = corpus[k];
    for (int N : {1, 6, 24}) {
      auto w = covering_window(M, ApproximationWindow{{2, 3, 5}, Integer(N)});
      std::string where = "corpus " + std::to_string(k) + " (" + shape(M) + ") " + w.str();
      t.expect(verify_restriction_sequence(M, w).all_exact(), where + ": restriction sequence");
      t.expect(verify_points_sequence(M, w).all_exact(), where + ": points sequence");
    }
    t.expect(verify_character_intersection(M), "corpus " + std::to_string(k) + ": intersection");
  }
  return t.outcome(std::to_string(corpus.size()) + " corpus motives x N in {1, 6, 24}: all junctions exact, intersection holds");
}

Outcome dlog_injectivity(const std::vector<ToricOneMotive>& corpus) {
  Tally t;
  for (std::size_t k = 0; k < corpus.size(); ++k)
    t.expect(hom_nabla(corpus[k]).cols() == 0, "H^nabla of corpus motive " + std::to_string(k));
  Rng rng(11);
  std::size_t equal_pairs = 0;
  for (int i = 0; i < 500; ++i) {
    std::size_t d = 1 + rng() % 4;
    auto coords = make_coords(variable_family("t", d, VarKind::Toric));
    IntVector m(d), mp(d);
    for (auto& x : m) x = uniform_int(rng, -3, 3);
    if (i % 4 == 0)
      mp = m;
    else
      for (auto& x : mp) x = uniform_int(rng, -3, 3);
    equal_pairs += m == mp;
    bool same_form = dlog_character(m, coords) == dlog_character(mp, coords);
    t.expect(same_form == (m == mp), "pair " + std::to_string(i));
  }
  return t.outcome("H^nabla = 0 on the corpus; 500 pairs (" + std::to_string(equal_pairs) + " equal) separate by dlog");
}

Outcome infrastructure() {
  Tally t;
  Rng rng(12);
  for (int i = 0; i < 500; ++i) {
    std::size_t rows = 1 + rng() % 6, cols = 1 + rng() % 6;
    IntMatrix A = random_int_matrix(rng, rows, cols, 9);
    auto snf = smith_normal_form(A);
    t.expect(snf.U * snf.S * snf.V == A, "SNF reconstruction " + std::to_string(i));
    t.expect(snf.U * snf.U_inv == IntMatrix::identity(rows) && snf.V * snf.V_inv == IntMatrix::identity(cols),
             "SNF unimodularity " + std::to_string(i));
    auto diag = snf.diagonal();
    bool divides = true;
    for (std::size_t k = 0; k + 1 < diag.size(); ++k)
      if (diag[k] != 0) divides &= diag[k + 1] % diag[k] == 0;
    t.expect(divides, "SNF divisibility " + std::to_string(i));
    if (rows <= 5 && cols <= 5) {
      auto ref = oracle::smith_diagonal(to_oracle(A), rows, cols);
      bool same = ref.size() == diag.size();
      for (std::size_t k = 0; same && k < ref.size(); ++k) same = Integer(ref[k]) == diag[k];
      t.expect(same, "SNF diagonal vs determinantal divisors " + std::to_string(i));
    }
  }
  for (int i = 0; i < 500; ++i) {
    auto q = [&] {
      Integer num = uniform_int(rng, 1, 1'000'000), den = uniform_int(rng, 1, 1'000'000);
      return Rational(rng() % 2 ? -num : num, den);
    };
    Rational a = q(), b = q();
    t.expect(factorize(a * b) == factorize(a) * factorize(b), "factorize homomorphism " + std::to_string(i));
    t.expect(factorize(a).value() == a, "factorize value " + std::to_string(i));
  }
  // Every relation generator and every unordered pair over S = {2, 3}.
  std::vector<std::vector<oracle::i64>> cells;
  for (int s = 0; s < 2; ++s)
    for (int a = -3; a <= 3; ++a)
      for (int b = -3; b <= 3; ++b) cells.push_back({s, a, b});
  auto check = [&](const std::vector<std::vector<oracle::i64>>& gens) {
    std::vector<QStarElem> rel;
    oracle::Mat cols{{2, 0, 0}};
    for (const auto& g : gens) {
      rel.push_back(QStarElem::from_parts(g[0] ? -1 : 1, {{2, g[1]}, {3, g[2]}}));
      cols.push_back(g);
    }
    auto pres = quotient_presentation(std::vector<Prime>{2, 3}, rel);
    auto order = oracle::quotient_order(cols, 3);
    oracle::Mat rows(3, std::vector<oracle::i64>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (std::size_t k = 0; k < 3; ++k) rows[k][j] = cols[j][k];
    std::size_t free_rank = 3 - oracle::rank(rows);
    bool ok = pres.freeRank == free_rank && (!order || (pres.order() && *pres.order() == Integer(*order)));
    t.expect(ok, "quotient by " + std::to_string(gens.size()) + " generator(s)");
  };
  std::size_t quotient_cases = 0;
  for (const auto& g : cells) {
    check({g});
    ++quotient_cases;
  }
  for (std::size_t i = 0; i < cells.size(); ++i)
    for (std::size_t j = i; j < cells.size(); ++j) {
      check({cells[i], cells[j]});
      ++quotient_cases;
    }
  return t.outcome("500 SNFs, 500 factorizations, " + std::to_string(quotient_cases) + " two-prime quotients");
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  auto corpus50 = closed_form_corpus();
  auto corpus12 = bundled_corpus();

  struct Criterion {
    int id;
    std::string name;
    double limit_seconds;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria{
      {1, "example reproduction", 1, example_reproduction},
      {2, "general closed form", 30, [&] { return general_closed_form(corpus50); }},
      {3, "perfectness", 60, [&] { return perfectness(corpus50); }},
      {4, "uniqueness", 120, [&] { return uniqueness(corpus50); }},
      {5, "tautological duality", 10, tautological},
      {6, "functoriality and adjointness", 120, adjointness},
      {7, "duality involution", 60, involution},
      {8, "universality criterion", 10, universality},
      {9, "points functor", 60, points_functor},
      {10, "exact sequences", 120, [&] { return exact_sequences(corpus12); }},
      {11, "dlog injectivity", 10, [&] { return dlog_injectivity(corpus12); }},
      {12, "infrastructure", 120, infrastructure},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    auto start = clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(clock::now() - start).count();
    if (o.passed && secs > c.limit_seconds) o = {false, "took longer than " + std::to_string(c.limit_seconds) + " s"};
    failed += !o.passed;
    std::printf("%s  %2d  %-30s %7.2f s  %s\n", o.passed ? "PASS" : "FAIL", c.id, c.name.c_str(), secs, o.detail.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
