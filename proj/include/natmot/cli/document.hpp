#pragma once

// Motive documents: a flat text format, one `key = value` per line with the
// value written as a JSON literal.
//
//   # M = [Z -> Gm], u(1) = 2
//   name = "two"
//   r = 1
//   d = 1
//   u = [["2"]]
//   primes = [2, 3]
//   denominator_bound = 6
//   morphism.square = {"r": 1, "d": 1, "u": [["4"]], "fX": [[1]], "fT": [[2]]}
//
// u lists d rows of r quoted rationals. A morphism block names a target
// motive and the blocks fX (r2 x r), fT (d2 x d) of a map out of the
// document's motive.

#include "natmot/motive.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace natmot::cli {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column),
        message_(message) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t line_, column_;
  std::string message_;
};

using EntryRows = std::vector<std::vector<std::string>>;

struct MorphismSpec {
  std::string name;
  std::size_t r = 0;
  std::size_t d = 0;
  EntryRows u;
  IntMatrix fX;
  IntMatrix fT;

  friend bool operator==(const MorphismSpec&, const MorphismSpec&) = default;
};

struct MotiveDocument {
  std::string name;
  std::size_t r = 0;
  std::size_t d = 0;
  EntryRows u;
  std::optional<std::vector<Prime>> primes;
  std::optional<Integer> denominatorBound;
  std::vector<MorphismSpec> morphisms;

  ToricOneMotive motive() const { return ToricOneMotive::from_strings(r, d, u); }

  friend bool operator==(const MotiveDocument&, const MotiveDocument&) = default;
};

namespace detail {

using json = nlohmann::json;

struct Located {
  std::size_t line;
  std::size_t column;  // of the value
};

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::size_t to_size(const json& v, const Located& at, const std::string& key) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
    throw ParseError(at.line, at.column, key + " must be a non-negative integer");
  return v.get<std::size_t>();
}

inline EntryRows to_entries(const json& v, std::size_t r, std::size_t d, const Located& at, const std::string& what) {
  if (!v.is_array()) throw ParseError(at.line, at.column, what + " must be an array of rows");
  if (v.size() != d)
    throw ParseError(at.line, at.column, what + " has " + std::to_string(v.size()) + " rows, expected d = " + std::to_string(d));
  EntryRows rows;
  for (std::size_t j = 0; j < d; ++j) {
    const auto& row = v[j];
    if (!row.is_array() || row.size() != r)
      throw ParseError(at.line, at.column, what + " row " + std::to_string(j + 1) + " must hold r = " + std::to_string(r) + " entries");
    std::vector<std::string> out;
    for (const auto& e : row) {
      if (!e.is_string()) throw ParseError(at.line, at.column, what + " entries must be quoted rationals such as \"-3/5\"");
      auto s = e.get<std::string>();
      try {
        if (parse_rational(s) == 0) throw ParseError(at.line, at.column, what + " entry \"" + s + "\" is zero, not a unit");
        parse_qstar(s);
      } catch (const DomainError& err) {
        throw ParseError(at.line, at.column, what + " entry \"" + s + "\": " + err.what());
      }
      out.push_back(s);
    }
    rows.push_back(std::move(out));
  }
  return rows;
}

inline IntMatrix to_int_matrix(const json& v, std::size_t rows, std::size_t cols, const Located& at, const std::string& what) {
  if (!v.is_array() || v.size() != rows)
    throw ParseError(at.line, at.column, what + " must have " + std::to_string(rows) + " rows");
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!v[i].is_array() || v[i].size() != cols)
      throw ParseError(at.line, at.column, what + " row " + std::to_string(i + 1) + " must have " + std::to_string(cols) + " entries");
    for (std::size_t j = 0; j < cols; ++j) {
      const auto& e = v[i][j];
      if (e.is_number_integer()) {
        m(i, j) = e.get<std::int64_t>();
      } else if (e.is_string()) {
        try {
          Rational q = parse_rational(e.get<std::string>());
          if (!is_integral(q)) throw DomainError("not an integer");
          m(i, j) = numerator(q);
        } catch (const DomainError&) {
          throw ParseError(at.line, at.column, what + " entries must be integers");
        }
      } else {
        throw ParseError(at.line, at.column, what + " entries must be integers");
      }
    }
  }
  return m;
}

}  // namespace detail

/// Parses a document; every error carries the 1-based line and column.
inline MotiveDocument parse_document(const std::string& text) {
  using detail::json;
  MotiveDocument doc;
  std::map<std::string, std::pair<json, detail::Located>> values;
  std::vector<std::string> morphism_order;

  std::istringstream in(text);
  std::string raw;
  for (std::size_t lineno = 1; std::getline(in, raw); ++lineno) {
    std::string line = detail::trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto eq = raw.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, 1, "expected `key = value`");
    std::string key = detail::trim(raw.substr(0, eq));
    std::size_t key_col = raw.find_first_not_of(" \t") + 1;
    if (key.empty()) throw ParseError(lineno, key_col, "missing key before `=`");
    for (char c : key)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-'))
        throw ParseError(lineno, key_col, "invalid character in key `" + key + "`");
    std::string rest = raw.substr(eq + 1);
    std::size_t value_col = eq + 2 + (rest.find_first_not_of(" \t") == std::string::npos ? 0 : rest.find_first_not_of(" \t"));
    json value;
    try {
      value = json::parse(rest);
    } catch (const json::parse_error& err) {
      std::size_t offset = err.byte > 0 ? err.byte - 1 : 0;
      throw ParseError(lineno, eq + 2 + offset, "malformed value: " + std::string(err.what()).substr(std::string(err.what()).find(':') + 2));
    }
    bool known = key == "name" || key == "r" || key == "d" || key == "u" || key == "primes" || key == "denominator_bound" ||
                 (key.rfind("morphism.", 0) == 0 && key.size() > 9);
    if (!known) throw ParseError(lineno, key_col, "unknown key `" + key + "`");
    if (values.count(key)) throw ParseError(lineno, key_col, "duplicate key `" + key + "`");
    if (key.rfind("morphism.", 0) == 0) morphism_order.push_back(key);
    values.emplace(key, std::make_pair(std::move(value), detail::Located{lineno, value_col}));
  }

  auto end_of_input = [&](const std::string& key) {
    return ParseError(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) + 1, 1, "missing required key `" + key + "`");
  };
  for (const char* k : {"r", "d", "u"})
    if (!values.count(k)) throw end_of_input(k);

  if (auto it = values.find("name"); it != values.end()) {
    if (!it->second.first.is_string()) throw ParseError(it->second.second.line, it->second.second.column, "name must be a string");
    doc.name = it->second.first.get<std::string>();
  }
  doc.r = detail::to_size(values["r"].first, values["r"].second, "r");
  doc.d = detail::to_size(values["d"].first, values["d"].second, "d");
  doc.u = detail::to_entries(values["u"].first, doc.r, doc.d, values["u"].second, "u");

  if (auto it = values.find("primes"); it != values.end()) {
    const auto& [v, at] = it->second;
    if (!v.is_array()) throw ParseError(at.line, at.column, "primes must be an array of integers");
    std::vector<Prime> ps;
    for (const auto& p : v) {
      if (!p.is_number_unsigned() || !natmot::detail::is_prime_u64(p.get<std::uint64_t>()))
        throw ParseError(at.line, at.column, "primes must list prime numbers");
      ps.push_back(p.get<std::uint64_t>());
    }
    doc.primes = ps;
  }
  if (auto it = values.find("denominator_bound"); it != values.end()) {
    const auto& [v, at] = it->second;
    if (!v.is_number_integer() || v.get<std::int64_t>() < 1)
      throw ParseError(at.line, at.column, "denominator_bound must be a positive integer");
    doc.denominatorBound = Integer(v.get<std::int64_t>());
  }

  auto source = doc.motive();
  for (const auto& key : morphism_order) {
    const auto& [v, at] = values[key];
    if (!v.is_object()) throw ParseError(at.line, at.column, "morphism must be an object with r, d, u, fX, fT");
    for (const auto& [field, _] : v.items())
      if (field != "r" && field != "d" && field != "u" && field != "fX" && field != "fT")
        throw ParseError(at.line, at.column, "unknown morphism field `" + field + "`");
    for (const char* f : {"r", "d", "u", "fX", "fT"})
      if (!v.contains(f)) throw ParseError(at.line, at.column, std::string("morphism is missing `") + f + "`");
    MorphismSpec m;
    m.name = key.substr(9);
    m.r = detail::to_size(v["r"], at, "morphism r");
    m.d = detail::to_size(v["d"], at, "morphism d");
    m.u = detail::to_entries(v["u"], m.r, m.d, at, "morphism u");
    m.fX = detail::to_int_matrix(v["fX"], m.r, doc.r, at, "fX");
    m.fT = detail::to_int_matrix(v["fT"], m.d, doc.d, at, "fT");
    MotiveMorphism f{source, ToricOneMotive::from_strings(m.r, m.d, m.u), m.fX, m.fT};
    if (!is_valid(f)) throw ParseError(at.line, at.column, "morphism `" + m.name + "` does not commute with the structure maps");
    doc.morphisms.push_back(std::move(m));
  }
  return doc;
}

namespace detail {

inline std::string entries_literal(const EntryRows& rows) {
  std::string s = "[";
  for (std::size_t j = 0; j < rows.size(); ++j) {
    s += j ? ", [" : "[";
    for (std::size_t i = 0; i < rows[j].size(); ++i) s += (i ? ", " : "") + json(rows[j][i]).dump();
    s += "]";
  }
  return s + "]";
}

inline std::string int_matrix_literal(const IntMatrix& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    s += i ? ", [" : "[";
    for (std::size_t j = 0; j < m.cols(); ++j) s += (j ? ", " : "") + to_string(m(i, j));
    s += "]";
  }
  return s + "]";
}

}  // namespace detail

/// Text form that parse_document reads back to an equal document.
inline std::string render_document(const MotiveDocument& doc) {
  std::ostringstream os;
  if (!doc.name.empty()) os << "name = " << detail::json(doc.name).dump() << "\n";
  os << "r = " << doc.r << "\n";
  os << "d = " << doc.d << "\n";
  os << "u = " << detail::entries_literal(doc.u) << "\n";
  if (doc.primes) {
    os << "primes = [";
    for (std::size_t i = 0; i < doc.primes->size(); ++i) os << (i ? ", " : "") << (*doc.primes)[i];
    os << "]\n";
  }
  if (doc.denominatorBound) os << "denominator_bound = " << *doc.denominatorBound << "\n";
  for (const auto& m : doc.morphisms)
    os << "morphism." << m.name << " = {\"r\": " << m.r << ", \"d\": " << m.d << ", \"u\": " << detail::entries_literal(m.u)
       << ", \"fX\": " << detail::int_matrix_literal(m.fX) << ", \"fT\": " << detail::int_matrix_literal(m.fT) << "}\n";
  return os.str();
}

}  // namespace natmot::cli
