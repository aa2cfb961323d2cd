#pragma once

// The subcommands behind the natmot tool. Each returns the structured result
// and a text rendering; the caller wraps them in the report envelope.

#include "natmot/biext.hpp"
#include "natmot/cli/document.hpp"
#include "natmot/cli/report.hpp"
#include "natmot/extgroups.hpp"
#include "natmot/random.hpp"

#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace natmot::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailure = 1;
inline constexpr int kExitParseError = 2;

struct Options {
  std::optional<std::vector<Prime>> primes;
  std::optional<Integer> denominatorBound;
  std::uint64_t seed = 0;
  std::size_t r = 1;
  std::size_t d = 1;
};

struct CommandResult {
  Json result = Json::object();
  std::string text;
  std::vector<std::string> notices;
  bool ok = true;
};

/// The window of a run: flags override the document, which overrides the
/// default S = {2, 3, 5}, N = 1. Primes of u are always added, with a notice
/// when the requested window missed some.
inline ApproximationWindow resolve_window(const MotiveDocument& doc, const Options& opt, std::vector<std::string>& notices) {
  ApproximationWindow w;
  bool requested = opt.primes || doc.primes;
  w.primes = opt.primes ? *opt.primes : doc.primes ? *doc.primes : std::vector<Prime>{2, 3, 5};
  w.denominatorBound = opt.denominatorBound ? *opt.denominatorBound : doc.denominatorBound ? *doc.denominatorBound : Integer(1);
  std::set<Prime> before(w.primes.begin(), w.primes.end());
  w = covering_window(doc.motive(), w);
  if (requested && w.primes.size() != before.size()) notices.push_back("window extended to cover the primes of u: " + w.str());
  return w;
}

inline CommandResult cmd_describe(const MotiveDocument& doc) {
  CommandResult out;
  auto M = doc.motive();
  auto D = cartier_dual(M);
  auto E = universal_extension(M);
  auto dr = de_rham(M);
  auto wd = weight_data(M);
  auto primes = M.primes();

  out.result["motive"] = motive_json(doc.name, M);
  out.result["primes"] = std::vector<Prime>(primes.begin(), primes.end());
  out.result["dual"] = motive_json("", D);
  out.result["universal_extension"] = {{"vector_rank", E.vectorRank}, {"V", matrix_json(E.V)}, {"W", matrix_json(E.W)}};
  out.result["de_rham"] = {{"dim", dr.dim()}, {"basis", dr.labels}, {"weight_minus2_rank", dr.weightMinus2Rank()}};
  out.result["weights"] = {{"gr0", wd.gr0rank}, {"gr-1", wd.grMinus1rank}, {"gr-2", wd.grMinus2rank}};

  std::ostringstream t;
  t << "motive " << doc.name << ": [u: Z^" << M.r << " -> Gm^" << M.d << "], u = " << qstar_matrix_text(M.u) << "\n";
  t << "dual: [u': Z^" << D.r << " -> Gm^" << D.d << "], u' = " << qstar_matrix_text(D.u) << "\n";
  t << "universal extension: vector rank " << E.vectorRank << "\n";
  t << "de Rham realization: dim " << dr.dim() << ", basis (" << join(dr.labels) << "), W_-2 rank " << dr.weightMinus2Rank() << "\n";
  t << "weights: gr0 " << wd.gr0rank << ", gr-1 " << wd.grMinus1rank << ", gr-2 " << wd.grMinus2rank << "\n";
  out.text = t.str();
  return out;
}

inline CommandResult cmd_pairing(const MotiveDocument& doc) {
  CommandResult out;
  auto M = doc.motive();
  auto B = poincare(M);
  auto ns = canonical_nat_structure(B);
  auto P = deligne_pairing(B);
  auto rep = is_perfect(P.phi);
  bool blocks = weight_block_check(M);

  out.result["motive"] = motive_json(doc.name, M);
  out.result["connection_form"] = P.connectionForm.str();
  out.result["curvature"] = P.curvature.str();
  out.result["ansatz"] = {{"degree", ns.ansatzDegree}, {"unknowns", ns.unknowns}, {"equations", ns.equations}};
  out.result["pairing"] = {{"rows", P.rowLabels}, {"columns", P.colLabels}, {"matrix", matrix_json(P.phi)}};
  out.result["det"] = rep.det ? Json(to_string(*rep.det)) : Json(nullptr);
  out.result["perfect"] = rep.perfect;
  out.result["unimodular"] = rep.unimodular;
  out.result["weight_blocks"] = blocks;
  out.ok = rep.perfect && rep.unimodular && blocks;

  std::ostringstream t;
  t << "motive " << doc.name << " (r=" << M.r << ", d=" << M.d << ")\n";
  t << "connection form: " << P.connectionForm.str() << "\n";
  t << "curvature: " << P.curvature.str() << "\n";
  t << "pairing, rows (" << join(P.rowLabels) << "), columns (" << join(P.colLabels) << "):\n" << matrix_text(P.phi);
  t << "det: " << (rep.det ? to_string(*rep.det) : "n/a") << "\n";
  t << "perfect: " << (rep.perfect ? "yes" : "no") << ", unimodular: " << (rep.unimodular ? "yes" : "no") << "\n";
  t << "weight blocks: " << (blocks ? "ok" : "FAILED") << "\n";
  out.text = t.str();
  return out;
}

inline CommandResult cmd_extgroups(const MotiveDocument& doc, const Options& opt) {
  CommandResult out;
  auto M = doc.motive();
  auto w = resolve_window(doc, opt, out.notices);
  IntMatrix H = hom_to_gm(M), Hn = hom_nabla(M);
  auto ext = ext_gm(M, w);
  auto nat = nat_ext_group(M, w);

  out.result["motive"] = motive_json(doc.name, M);
  out.result["window"] = window_json(w);
  out.result["hom"] = {{"rank", H.cols()}, {"basis", matrix_json(H)}};
  out.result["hom_nabla"] = {{"rank", Hn.cols()}, {"basis", matrix_json(Hn)}};
  Json e = presentation_json(ext.presentation);
  e["outside_window"] = ext.freePart;
  out.result["ext"] = e;
  out.result["ext_nat"] = presentation_json(nat.presentation);

  std::ostringstream t;
  t << "motive " << doc.name << " (r=" << M.r << ", d=" << M.d << "), window " << w.str() << "\n";
  t << "H(M): rank " << H.cols() << (H.cols() ? ", basis columns\n" + matrix_text(H) : "\n");
  t << "H^nabla(M): rank " << Hn.cols() << "\n";
  t << "Ext(M,Gm) in window: " << ext.presentation.describe() << " on (" << join(ext.presentation.generatorLabels) << ")\n";
  t << "  outside the window: " << ext.freePart << "\n";
  t << "Ext^nat(M,Gm) in window: " << nat.presentation.describe() << " on (" << join(nat.presentation.generatorLabels)
    << ")\n";
  out.text = t.str();
  return out;
}

struct CheckOutcome {
  std::string name;
  bool passed = true;
  std::string detail;
  Json data = nullptr;
};

namespace detail {

inline CheckOutcome run_check(const std::string& name, const std::function<CheckOutcome()>& body) {
  try {
    auto c = body();
    c.name = name;
    return c;
  } catch (const StructuralError& e) {
    return {name, false, e.what(), nullptr};
  } catch (const std::logic_error& e) {
    return {name, false, std::string("internal check failed: ") + e.what(), nullptr};
  }
}

inline CheckOutcome sequence_check(const ExactSequenceReport& rep) {
  std::string detail = rep.all_exact() ? "all junctions exact" : "";
  for (const auto& j : rep.junctions)
    if (!j.exact) detail += (detail.empty() ? "" : "; ") + j.at + ": " + j.detail;
  return {"", rep.all_exact(), detail, sequence_json(rep)};
}

}  // namespace detail

/// Every library-level invariant on one document, in a fixed order.
inline std::vector<CheckOutcome> verify_document(const MotiveDocument& doc, const ApproximationWindow& w,
                                                 const std::string& hash) {
  auto M = doc.motive();
  std::vector<CheckOutcome> checks;
  auto add = [&](const std::string& name, const std::function<CheckOutcome()>& body) {
    checks.push_back(detail::run_check(name, body));
  };

  add("double dual", [&] {
    return CheckOutcome{"", cartier_dual(cartier_dual(M)) == M, "", nullptr};
  });
  add("poincare trivializations agree", [&] {
    auto v = validate(poincare(M));
    return CheckOutcome{"", v.empty(), join(v, "; "), nullptr};
  });
  add("connection closed form", [&] {
    auto B = poincare(M);
    auto ns = canonical_nat_structure(B);
    bool ok = ns.connectionForm == expected_connection_form(B);
    return CheckOutcome{"", ok, ok ? ns.connectionForm.str() : "solved " + ns.connectionForm.str() + ", expected " + expected_connection_form(B).str(),
                        nullptr};
  });
  add("uniqueness with quadratic ansatz", [&] {
    auto B = poincare(M);
    auto ns = canonical_nat_structure(B, 2);
    bool ok = ns.higher_coefficients_vanish() && ns.connectionForm == expected_connection_form(B);
    return CheckOutcome{"", ok, std::to_string(ns.unknowns) + " unknowns, unique solution", nullptr};
  });
  add("pairing perfect and unimodular", [&] {
    auto rep = is_perfect(deligne_pairing(poincare(M)).phi);
    return CheckOutcome{"", rep.perfect && rep.unimodular, "det " + (rep.det ? to_string(*rep.det) : "n/a"), nullptr};
  });
  add("weight blocks", [&] { return CheckOutcome{"", weight_block_check(M), "", nullptr}; });
  add("canonical lift is universal", [&] {
    auto E = universal_extension(M);
    return CheckOutcome{"", is_universal(E) && de_rham(M).dim() == M.r + M.d, "", nullptr};
  });
  add("Lie algebra of the dual torus", [&] { return CheckOutcome{"", lie_dimension_check(M), "", nullptr}; });
  add("adjointness", [&] {
    std::vector<MotiveMorphism> fs{identity_morphism(M)};
    for (const auto& m : doc.morphisms) fs.push_back({M, ToricOneMotive::from_strings(m.r, m.d, m.u), m.fX, m.fT});
    std::string bad;
    auto phi1 = deligne_pairing(poincare(M)).phi;
    for (std::size_t k = 0; k < fs.size(); ++k) {
      auto phi2 = deligne_pairing(poincare(fs[k].target)).phi;
      if (de_rham_map(fs[k]).transpose() * phi2 != phi1 * de_rham_map(dual_morphism(fs[k])))
        bad += (bad.empty() ? "" : ", ") + (k == 0 ? std::string("identity") : doc.morphisms[k - 1].name);
    }
    return CheckOutcome{"", bad.empty(), bad.empty() ? std::to_string(fs.size()) + " morphisms" : "fails for " + bad, nullptr};
  });
  add("points round trip", [&] {
    Rng rng(std::stoull(hash.substr(hash.find(':') + 1), nullptr, 16));
    std::vector<Prime> ps(w.primes.begin(), w.primes.end());
    for (int i = 0; i < 5; ++i) {
      NatPoint p{random_rational_vector(rng, M.r), random_torus_point(rng, M.d, ps)};
      auto fiber = psi_point(M, p);
      if (!(psi_inverse(M, fiber) == p)) return CheckOutcome{"", false, "round trip differs at point " + std::to_string(i), nullptr};
    }
    return CheckOutcome{"", true, "5 points", nullptr};
  });
  add("H^nabla vanishes", [&] { return CheckOutcome{"", hom_nabla(M).cols() == 0, "", nullptr}; });
  add("restriction sequence", [&] { return detail::sequence_check(verify_restriction_sequence(M, w)); });
  add("points of G^nat sequence", [&] { return detail::sequence_check(verify_points_sequence(M, w)); });
  add("Hom/Ext sequence", [&] { return detail::sequence_check(verify_ext_sequence(M, w)); });
  add("intersection of characters", [&] { return CheckOutcome{"", verify_character_intersection(M), "", nullptr}; });
  return checks;
}

inline Json checks_json(const std::vector<CheckOutcome>& checks) {
  Json arr = Json::array();
  for (const auto& c : checks) {
    Json j{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}};
    if (!c.data.is_null()) j["data"] = c.data;
    arr.push_back(j);
  }
  return arr;
}

inline std::string checks_text(const std::vector<CheckOutcome>& checks) {
  std::string s;
  for (const auto& c : checks) s += std::string(c.passed ? "  ok    " : "  FAIL  ") + c.name + (c.detail.empty() ? "" : ": " + c.detail) + "\n";
  return s;
}

/// One loaded input for verify: the document, its hash and display name.
struct LoadedDocument {
  MotiveDocument doc;
  std::string hash;
};

inline CommandResult cmd_verify(const std::vector<LoadedDocument>& docs, const Options& opt) {
  CommandResult out;
  Json list = Json::array();
  std::ostringstream t;
  std::size_t failed = 0;
  for (const auto& ld : docs) {
    std::vector<std::string> notes;
    auto w = resolve_window(ld.doc, opt, notes);
    auto checks = verify_document(ld.doc, w, ld.hash);
    bool ok = std::all_of(checks.begin(), checks.end(), [](const CheckOutcome& c) { return c.passed; });
    failed += ok ? 0 : 1;
    for (const auto& n : notes) out.notices.push_back(ld.doc.name + ": " + n);
    list.push_back({{"name", ld.doc.name},
                    {"hash", ld.hash},
                    {"window", window_json(w)},
                    {"passed", ok},
                    {"checks", checks_json(checks)}});
    t << ld.doc.name << " (r=" << ld.doc.r << ", d=" << ld.doc.d << ", " << w.str() << "): " << (ok ? "ok" : "FAILED") << "\n";
    t << checks_text(checks);
  }
  out.result["documents"] = list;
  out.result["failed"] = failed;
  out.ok = failed == 0;
  t << docs.size() - failed << "/" << docs.size() << " documents verified\n";
  out.text = t.str();
  return out;
}

/// A reproducible random document over the window primes.
inline MotiveDocument random_document(const Options& opt) {
  Rng rng(opt.seed);
  std::vector<Prime> primes = opt.primes ? *opt.primes : std::vector<Prime>{2, 3, 5};
  auto M = random_motive_over(rng, opt.r, opt.d, primes);
  MotiveDocument doc;
  doc.name = "random_r" + std::to_string(opt.r) + "_d" + std::to_string(opt.d) + "_seed" + std::to_string(opt.seed);
  doc.r = opt.r;
  doc.d = opt.d;
  for (std::size_t j = 0; j < M.d; ++j) {
    std::vector<std::string> row;
    for (std::size_t i = 0; i < M.r; ++i) row.push_back(M.u(j, i).str());
    doc.u.push_back(row);
  }
  std::set<Prime> s(primes.begin(), primes.end());
  doc.primes = std::vector<Prime>(s.begin(), s.end());
  if (opt.denominatorBound) doc.denominatorBound = opt.denominatorBound;
  return doc;
}

inline CommandResult cmd_random(const Options& opt) {
  CommandResult out;
  auto doc = random_document(opt);
  out.text = render_document(doc);
  out.result["document"] = out.text;
  out.result["motive"] = motive_json(doc.name, doc.motive());
  out.result["seed"] = std::to_string(opt.seed);
  return out;
}

}  // namespace natmot::cli
