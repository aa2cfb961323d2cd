#pragma once

// JSON and text renderings of library values. Every number that is not a
// small count is serialized as an exact decimal string.

#include "natmot/extgroups.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <string>
#include <vector>

namespace natmot::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "natmot-report/1";

/// 64-bit FNV-1a of the input bytes, as "fnv1a64:<16 hex digits>".
inline std::string input_hash(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

inline Json to_json(const Rational& q) { return to_string(q); }
inline Json to_json(const Integer& n) { return to_string(n); }

template <class T>
Json matrix_json(const Matrix<T>& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

inline Json matrix_json(const QStarMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
    rows.push_back(row);
  }
  return rows;
}

template <class V>
Json vector_json(const V& v) {
  Json out = Json::array();
  for (const auto& x : v) {
    if constexpr (std::is_same_v<std::decay_t<decltype(x)>, QStarElem>)
      out.push_back(x.str());
    else
      out.push_back(to_string(x));
  }
  return out;
}

inline Json motive_json(const std::string& name, const ToricOneMotive& M) {
  Json j;
  if (!name.empty()) j["name"] = name;
  j["r"] = M.r;
  j["d"] = M.d;
  j["u"] = matrix_json(M.u);
  return j;
}

inline Json window_json(const ApproximationWindow& w) {
  return Json{{"primes", w.primes}, {"denominator_bound", to_string(w.denominatorBound)}};
}

inline Json presentation_json(const GroupPresentation& g) {
  Json j;
  j["structure"] = g.describe();
  j["invariant_factors"] = vector_json(g.invariantFactors);
  j["free_rank"] = g.freeRank;
  j["generators"] = g.generatorLabels;
  j["relations"] = matrix_json(g.relations);
  return j;
}

inline Json sequence_json(const ExactSequenceReport& rep) {
  Json j;
  j["sequence"] = rep.title;
  j["groups"] = rep.groups;
  j["arrows"] = rep.arrows;
  j["window"] = window_json(rep.window);
  Json js = Json::array();
  for (const auto& jn : rep.junctions) {
    Json e{{"at", jn.at}, {"exact", jn.exact}, {"detail", jn.detail}};
    if (jn.witness) e["witness"] = vector_json(*jn.witness);
    js.push_back(e);
  }
  j["junctions"] = js;
  j["notes"] = rep.notes;
  j["exact"] = rep.all_exact();
  return j;
}

template <class T>
std::string matrix_text(const Matrix<T>& m, const std::string& indent = "  ") {
  if (m.rows() == 0 || m.cols() == 0) return indent + "(empty " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ")\n";
  std::vector<std::vector<std::string>> cells(m.rows(), std::vector<std::string>(m.cols()));
  std::vector<std::size_t> width(m.cols(), 0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      cells[i][j] = to_string(m(i, j));
      width[j] = std::max(width[j], cells[i][j].size());
    }
  std::string s;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    s += indent + "[";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      s += (j ? "  " : "") + std::string(width[j] - cells[i][j].size(), ' ') + cells[i][j];
    }
    s += "]\n";
  }
  return s;
}

inline std::string qstar_matrix_text(const QStarMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return "(empty " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ")";
  std::string s = "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    s += i ? "; " : "";
    for (std::size_t j = 0; j < m.cols(); ++j) s += (j ? ", " : "") + m(i, j).str();
  }
  return s + "]";
}

inline std::string join(const std::vector<std::string>& xs, const std::string& sep = ", ") {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + xs[i];
  return s;
}

}  // namespace natmot::cli
