#pragma once

// Symbolic differential forms of degree 1 and 2 on products of Ga and Gm
// factors over Q. Toric directions use the logarithmic covector dlog t, so an
// invariant form has constant coefficients in this basis.

#include "natmot/qlinalg.hpp"
#include "natmot/ratmult.hpp"

#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace natmot {

enum class VarKind { Additive, Toric };
enum class FactorTag { None, Left, Right };

struct Variable {
  std::string name;
  VarKind kind = VarKind::Additive;
  FactorTag tag = FactorTag::None;

  friend bool operator==(const Variable&, const Variable&) = default;
};

class CoordSystem {
 public:
  CoordSystem() = default;
  explicit CoordSystem(std::vector<Variable> vars) : vars_(std::move(vars)) {
    for (std::size_t i = 0; i < vars_.size(); ++i)
      for (std::size_t j = i + 1; j < vars_.size(); ++j)
        require(vars_[i].name != vars_[j].name, "duplicate coordinate name " + vars_[i].name);
  }

  std::size_t size() const { return vars_.size(); }
  const Variable& operator[](std::size_t i) const { return vars_[i]; }
  const std::vector<Variable>& vars() const { return vars_; }

  std::size_t index_of(const std::string& name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i].name == name) return i;
    throw ContractViolation("no coordinate named " + name);
  }

  std::vector<std::size_t> indices(VarKind kind, std::optional<FactorTag> tag = std::nullopt) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i].kind == kind && (!tag || vars_[i].tag == *tag)) out.push_back(i);
    return out;
  }

  friend bool operator==(const CoordSystem&, const CoordSystem&) = default;

 private:
  std::vector<Variable> vars_;
};

using Coords = std::shared_ptr<const CoordSystem>;

inline Coords make_coords(std::vector<Variable> vars) {
  return std::make_shared<const CoordSystem>(std::move(vars));
}

/// "x" when there is a single variable of the family, otherwise "x1", "x2", ...
inline std::vector<Variable> variable_family(const std::string& stem, std::size_t count, VarKind kind,
                                             FactorTag tag = FactorTag::None) {
  std::vector<Variable> out;
  for (std::size_t i = 0; i < count; ++i)
    out.push_back({count == 1 ? stem : stem + std::to_string(i + 1), kind, tag});
  return out;
}

inline bool same_coords(const Coords& a, const Coords& b) { return a == b || *a == *b; }

using Exponent = std::vector<std::int64_t>;

/// Laurent polynomial over Q; additive variables carry nonnegative exponents.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  explicit LaurentPoly(std::size_t nvars) : nvars_(nvars) {}

  static LaurentPoly constant(std::size_t nvars, const Rational& c) {
    LaurentPoly p(nvars);
    if (c != 0) p.terms_.emplace(Exponent(nvars, 0), c);
    return p;
  }

  static LaurentPoly monomial(const Rational& c, Exponent e) {
    LaurentPoly p(e.size());
    if (c != 0) p.terms_.emplace(std::move(e), c);
    return p;
  }

  static LaurentPoly variable(std::size_t nvars, std::size_t i) {
    Exponent e(nvars, 0);
    e[i] = 1;
    return monomial(1, std::move(e));
  }

  std::size_t nvars() const { return nvars_; }
  const std::map<Exponent, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Exponent& e, const Rational& c) {
    require(e.size() == nvars_, "exponent length mismatch");
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  LaurentPoly& operator+=(const LaurentPoly& o) {
    require(o.nvars_ == nvars_, "polynomial ring mismatch");
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  LaurentPoly& operator-=(const LaurentPoly& o) { return *this += (-1) * o; }

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }

  friend LaurentPoly operator*(const Rational& s, LaurentPoly a) {
    if (s == 0) return LaurentPoly(a.nvars_);
    for (auto& [e, c] : a.terms_) c *= s;
    return a;
  }

  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    require(a.nvars_ == b.nvars_, "polynomial ring mismatch");
    LaurentPoly p(a.nvars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponent e(a.nvars_);
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        p.add_term(e, ca * cb);
      }
    return p;
  }

  LaurentPoly pow(std::int64_t n) const {
    require(n >= 0, "negative power of a polynomial");
    LaurentPoly result = constant(nvars_, 1), base = *this;
    while (n) {
      if (n & 1) result = result * base;
      base = base * base;
      n >>= 1;
    }
    return result;
  }

  /// d/dx_i on additive coordinates, the Euler operator t_i d/dt_i on toric ones.
  LaurentPoly derivative(std::size_t i, VarKind kind) const {
    LaurentPoly p(nvars_);
    for (const auto& [e, c] : terms_) {
      if (e[i] == 0) continue;
      Exponent f = e;
      if (kind == VarKind::Additive) --f[i];
      p.add_term(f, c * e[i]);
    }
    return p;
  }

  /// Value at a point; toric coordinates must be nonzero there.
  Rational evaluate(const RatVector& point) const {
    require(point.size() == nvars_, "evaluation point has wrong length");
    Rational total = 0;
    for (const auto& [e, c] : terms_) {
      Rational term = c;
      for (std::size_t i = 0; i < nvars_; ++i)
        if (e[i] != 0) term *= rpow(point[i], e[i]);
      total += term;
    }
    return total;
  }

  /// Total degree in the given variables (max over terms), -1 for zero.
  std::int64_t degree_in(const std::vector<std::size_t>& vars) const {
    std::int64_t best = -1;
    for (const auto& [e, c] : terms_) {
      std::int64_t d = 0;
      for (auto v : vars) d += e[v];
      best = std::max(best, d);
    }
    return best;
  }

  friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

  std::string str(const CoordSystem& cs) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      Rational mag = abs(c);
      os << (first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "));
      first = false;
      bool has_var = false;
      std::ostringstream vars;
      for (std::size_t i = 0; i < nvars_; ++i) {
        if (e[i] == 0) continue;
        vars << (has_var ? "·" : "") << cs[i].name;
        if (e[i] != 1) vars << '^' << e[i];
        has_var = true;
      }
      if (!has_var) {
        os << to_string(mag);
      } else {
        if (mag != 1) os << to_string(mag) << "·";
        os << vars.str();
      }
    }
    return os.str();
  }

 private:
  std::size_t nvars_ = 0;
  std::map<Exponent, Rational> terms_;
};

inline std::string covector_name(const Variable& v) {
  return v.kind == VarKind::Additive ? "d" + v.name : "dlog " + v.name;
}

namespace detail {

inline std::string scaled_name(const LaurentPoly& c, const std::string& basis, const CoordSystem& cs, bool first) {
  std::string coeff = c.str(cs);
  bool single = c.terms().size() == 1;
  std::string out;
  if (single) {
    bool negative = c.terms().begin()->second < 0;
    if (negative) coeff.erase(0, 1);
    out = first ? (negative ? "-" : "") : (negative ? " - " : " + ");
    out += (coeff == "1") ? basis : coeff + "·" + basis;
  } else {
    out = (first ? "(" : " + (") + coeff + ")·" + basis;
  }
  return out;
}

}  // namespace detail

/// 1-form sum_i f_i e_i with e_i = dx_i (additive) or dlog t_i (toric).
class Form1 {
 public:
  Form1() = default;
  explicit Form1(Coords coords) : coords_(std::move(coords)) {}

  static Form1 basis(Coords coords, std::size_t i, LaurentPoly coeff) {
    Form1 f(std::move(coords));
    f.add(i, coeff);
    return f;
  }

  const Coords& coords() const { return coords_; }
  const std::map<std::size_t, LaurentPoly>& coefficients() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  LaurentPoly coefficient(std::size_t i) const {
    auto it = coeffs_.find(i);
    return it == coeffs_.end() ? LaurentPoly(coords_->size()) : it->second;
  }

  void add(std::size_t i, const LaurentPoly& c) {
    require(i < coords_->size() && c.nvars() == coords_->size(), "covector outside the coordinate system");
    if (c.is_zero()) return;
    auto [it, inserted] = coeffs_.emplace(i, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) coeffs_.erase(it);
    }
  }

  Form1& operator+=(const Form1& o) {
    require(same_coords(coords_, o.coords_), "adding forms on different coordinate systems");
    for (const auto& [i, c] : o.coeffs_) add(i, c);
    return *this;
  }
  friend Form1 operator+(Form1 a, const Form1& b) { return a += b; }
  friend Form1 operator-(Form1 a, const Form1& b) { return a += (-1) * b; }

  friend Form1 operator*(const LaurentPoly& s, const Form1& a) {
    Form1 out(a.coords_);
    for (const auto& [i, c] : a.coeffs_) out.add(i, s * c);
    return out;
  }
  friend Form1 operator*(const Rational& s, const Form1& a) {
    return LaurentPoly::constant(a.coords_->size(), s) * a;
  }

  friend bool operator==(const Form1& a, const Form1& b) {
    return same_coords(a.coords_, b.coords_) && a.coeffs_ == b.coeffs_;
  }

  std::string str() const {
    if (coeffs_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [i, c] : coeffs_) {
      out += detail::scaled_name(c, covector_name((*coords_)[i]), *coords_, first);
      first = false;
    }
    return out;
  }

 private:
  Coords coords_;
  std::map<std::size_t, LaurentPoly> coeffs_;
};

/// 2-form stored on ordered pairs (i < j) of basis covectors.
class Form2 {
 public:
  Form2() = default;
  explicit Form2(Coords coords) : coords_(std::move(coords)) {}

  const Coords& coords() const { return coords_; }
  const std::map<std::pair<std::size_t, std::size_t>, LaurentPoly>& coefficients() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  /// Adds c * e_i ∧ e_j, normalizing to i < j.
  void add(std::size_t i, std::size_t j, const LaurentPoly& c) {
    require(i < coords_->size() && j < coords_->size(), "covector outside the coordinate system");
    if (i == j || c.is_zero()) return;
    LaurentPoly v = i < j ? c : (-1) * c;
    auto key = std::minmax(i, j);
    auto [it, inserted] = coeffs_.emplace(key, v);
    if (!inserted) {
      it->second += v;
      if (it->second.is_zero()) coeffs_.erase(it);
    }
  }

  LaurentPoly coefficient(std::size_t i, std::size_t j) const {
    require(i < j, "coefficient pairs are ordered");
    auto it = coeffs_.find({i, j});
    return it == coeffs_.end() ? LaurentPoly(coords_->size()) : it->second;
  }

  Form2& operator+=(const Form2& o) {
    require(same_coords(coords_, o.coords_), "adding forms on different coordinate systems");
    for (const auto& [k, c] : o.coeffs_) add(k.first, k.second, c);
    return *this;
  }
  friend Form2 operator+(Form2 a, const Form2& b) { return a += b; }

  friend bool operator==(const Form2& a, const Form2& b) {
    return same_coords(a.coords_, b.coords_) && a.coeffs_ == b.coeffs_;
  }

  std::string str() const {
    if (coeffs_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [k, c] : coeffs_) {
      std::string basis = covector_name((*coords_)[k.first]) + " ∧ " + covector_name((*coords_)[k.second]);
      out += detail::scaled_name(c, basis, *coords_, first);
      first = false;
    }
    return out;
  }

 private:
  Coords coords_;
  std::map<std::pair<std::size_t, std::size_t>, LaurentPoly> coeffs_;
};

inline Form2 wedge(const Form1& a, const Form1& b) {
  require(same_coords(a.coords(), b.coords()), "wedge of forms on different coordinate systems");
  Form2 out(a.coords());
  for (const auto& [i, ci] : a.coefficients())
    for (const auto& [j, cj] : b.coefficients()) out.add(i, j, ci * cj);
  return out;
}

/// df for a function f.
inline Form1 differential(const Coords& coords, const LaurentPoly& f) {
  Form1 out(coords);
  for (std::size_t v = 0; v < coords->size(); ++v) out.add(v, f.derivative(v, (*coords)[v].kind));
  return out;
}

/// d(sum f_i e_i) = sum df_i ∧ e_i; the basis covectors are closed.
inline Form2 exterior_d(const Form1& w) {
  Form2 out(w.coords());
  const auto& cs = *w.coords();
  for (const auto& [i, f] : w.coefficients())
    for (std::size_t v = 0; v < cs.size(); ++v) out.add(v, i, f.derivative(v, cs[v].kind));
  return out;
}

/// Rational-affine image of an additive target coordinate.
struct AffineExpr {
  Rational constant = 0;
  std::map<std::size_t, Rational> linear;
};

/// Monomial image c * prod s^e of a toric target coordinate.
struct MonomialExpr {
  QStarElem constant;
  std::map<std::size_t, Integer> exponents;
};

using CoordImage = std::variant<AffineExpr, MonomialExpr>;

/// Morphism of coordinate systems: every target coordinate is written in the
/// source coordinates. Additive targets are affine in additive sources; toric
/// targets are monomials in toric sources (pure constants for sections).
class AffineMonomialMap {
 public:
  AffineMonomialMap(Coords source, Coords target, std::vector<CoordImage> images)
      : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
    require(images_.size() == target_->size(), "one image per target coordinate is required");
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if ((*target_)[i].kind == VarKind::Additive) {
        const auto* a = std::get_if<AffineExpr>(&images_[i]);
        require(a != nullptr, "additive coordinate " + (*target_)[i].name + " needs an affine image");
        for (const auto& [s, c] : a->linear)
          require(s < source_->size() && (*source_)[s].kind == VarKind::Additive,
                  "affine image of " + (*target_)[i].name + " uses a non-additive source");
      } else {
        const auto* m = std::get_if<MonomialExpr>(&images_[i]);
        require(m != nullptr, "toric coordinate " + (*target_)[i].name + " needs a monomial image");
        for (const auto& [s, e] : m->exponents)
          require(s < source_->size() && (*source_)[s].kind == VarKind::Toric,
                  "monomial image of " + (*target_)[i].name + " uses a non-toric source");
      }
    }
    for (std::size_t i = 0; i < images_.size(); ++i) image_polys_.push_back(build_image_poly(i));
  }

  const Coords& source() const { return source_; }
  const Coords& target() const { return target_; }
  const std::vector<CoordImage>& images() const { return images_; }

  /// Image of target coordinate i as a function on the source.
  const LaurentPoly& image_poly(std::size_t i) const { return image_polys_[i]; }

 private:
  LaurentPoly build_image_poly(std::size_t i) const {
    const std::size_t n = source_->size();
    if (const auto* a = std::get_if<AffineExpr>(&images_[i])) {
      LaurentPoly p = LaurentPoly::constant(n, a->constant);
      for (const auto& [s, c] : a->linear) p += c * LaurentPoly::variable(n, s);
      return p;
    }
    const auto& m = std::get<MonomialExpr>(images_[i]);
    Exponent e(n, 0);
    for (const auto& [s, k] : m.exponents) e[s] = k.convert_to<std::int64_t>();
    return LaurentPoly::monomial(m.constant.value(), e);
  }

 public:

  /// Pullback of the basis covector e_i of the target.
  Form1 covector_pullback(std::size_t i) const {
    Form1 out(source_);
    const std::size_t n = source_->size();
    if (const auto* a = std::get_if<AffineExpr>(&images_[i])) {
      for (const auto& [s, c] : a->linear) out.add(s, LaurentPoly::constant(n, c));
    } else {
      // dlog(c * prod s^e) = sum e dlog s; the constant dies.
      for (const auto& [s, k] : std::get<MonomialExpr>(images_[i]).exponents)
        out.add(s, LaurentPoly::constant(n, Rational(k)));
    }
    return out;
  }

  LaurentPoly pullback(const LaurentPoly& f) const {
    require(f.nvars() == target_->size(), "function does not live on the target");
    const std::size_t n = source_->size();
    LaurentPoly out(n);
    const auto& img = image_polys_;
    for (const auto& [e, c] : f.terms()) {
      LaurentPoly term = LaurentPoly::constant(n, c);
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (e[i] > 0) {
          term = term * img[i].pow(e[i]);
        } else {
          // Only toric coordinates carry negative exponents; their images are
          // monomials and hence invertible.
          const auto& [me, mc] = *img[i].terms().begin();
          Exponent inv(me.size());
          for (std::size_t k = 0; k < me.size(); ++k) inv[k] = -me[k];
          term = term * LaurentPoly::monomial(1 / mc, inv).pow(-e[i]);
        }
      }
      out += term;
    }
    return out;
  }

  Form1 pullback(const Form1& w) const {
    require(same_coords(w.coords(), target_), "pullback: form does not live on the target");
    Form1 out(source_);
    for (const auto& [i, c] : w.coefficients()) out += pullback(c) * covector_pullback(i);
    return out;
  }

  Form2 pullback(const Form2& w) const {
    require(same_coords(w.coords(), target_), "pullback: form does not live on the target");
    Form2 out(source_);
    for (const auto& [k, c] : w.coefficients()) {
      Form2 piece = wedge(covector_pullback(k.first), covector_pullback(k.second));
      LaurentPoly pc = pullback(c);
      for (const auto& [kk, cc] : piece.coefficients()) out.add(kk.first, kk.second, pc * cc);
    }
    return out;
  }

 private:
  Coords source_;
  Coords target_;
  std::vector<CoordImage> images_;
  std::vector<LaurentPoly> image_polys_;
};

/// first then second: the map source(first) -> target(second).
inline AffineMonomialMap compose(const AffineMonomialMap& first, const AffineMonomialMap& second) {
  require(same_coords(first.target(), second.source()), "compose: maps are not composable");
  std::vector<CoordImage> images;
  for (const auto& img : second.images()) {
    if (const auto* a = std::get_if<AffineExpr>(&img)) {
      AffineExpr out{a->constant, {}};
      for (const auto& [mid, c] : a->linear) {
        const auto& inner = std::get<AffineExpr>(first.images()[mid]);
        out.constant += c * inner.constant;
        for (const auto& [s, cc] : inner.linear) out.linear[s] += c * cc;
      }
      std::erase_if(out.linear, [](const auto& kv) { return kv.second == 0; });
      images.emplace_back(std::move(out));
    } else {
      const auto& m = std::get<MonomialExpr>(img);
      MonomialExpr out{m.constant, {}};
      for (const auto& [mid, k] : m.exponents) {
        const auto& inner = std::get<MonomialExpr>(first.images()[mid]);
        out.constant = out.constant * inner.constant.pow(k);
        for (const auto& [s, kk] : inner.exponents) out.exponents[s] += k * kk;
      }
      std::erase_if(out.exponents, [](const auto& kv) { return kv.second == 0; });
      images.emplace_back(std::move(out));
    }
  }
  return AffineMonomialMap(first.source(), second.target(), std::move(images));
}

inline AffineMonomialMap identity_map(const Coords& c) {
  std::vector<CoordImage> images;
  for (std::size_t i = 0; i < c->size(); ++i) {
    if ((*c)[i].kind == VarKind::Additive)
      images.emplace_back(AffineExpr{0, {{i, 1}}});
    else
      images.emplace_back(MonomialExpr{QStarElem(), {{i, 1}}});
  }
  return AffineMonomialMap(c, c, std::move(images));
}

inline Form1 pullback(const AffineMonomialMap& f, const Form1& w) { return f.pullback(w); }
inline Form2 pullback(const AffineMonomialMap& f, const Form2& w) { return f.pullback(w); }

/// sum_j m_j dlog t_j over the toric coordinates in order.
inline Form1 dlog_character(const IntVector& m, const Coords& coords) {
  auto toric = coords->indices(VarKind::Toric);
  require(m.size() == toric.size(), "character length must equal the number of toric coordinates");
  Form1 out(coords);
  for (std::size_t k = 0; k < m.size(); ++k) out.add(toric[k], LaurentPoly::constant(coords->size(), Rational(m[k])));
  return out;
}

/// Group law mu and the two projections on G x G, with the copies of each
/// coordinate suffixed "'" and "''".
struct GroupLawMaps {
  Coords product;
  AffineMonomialMap mu, p1, p2;
};

inline GroupLawMaps group_law_maps(const Coords& group) {
  const std::size_t n = group->size();
  std::vector<Variable> vars;
  for (const auto& v : group->vars()) vars.push_back({v.name + "'", v.kind, v.tag});
  for (const auto& v : group->vars()) vars.push_back({v.name + "''", v.kind, v.tag});
  auto prod = make_coords(std::move(vars));
  std::vector<CoordImage> mu, p1, p2;
  for (std::size_t i = 0; i < n; ++i) {
    if ((*group)[i].kind == VarKind::Additive) {
      mu.emplace_back(AffineExpr{0, {{i, 1}, {n + i, 1}}});
      p1.emplace_back(AffineExpr{0, {{i, 1}}});
      p2.emplace_back(AffineExpr{0, {{n + i, 1}}});
    } else {
      mu.emplace_back(MonomialExpr{QStarElem(), {{i, 1}, {n + i, 1}}});
      p1.emplace_back(MonomialExpr{QStarElem(), {{i, 1}}});
      p2.emplace_back(MonomialExpr{QStarElem(), {{n + i, 1}}});
    }
  }
  return {prod, AffineMonomialMap(prod, group, std::move(mu)), AffineMonomialMap(prod, group, std::move(p1)),
          AffineMonomialMap(prod, group, std::move(p2))};
}

/// mu^* w == p1^* w + p2^* w.
inline bool is_invariant(const Form1& w, const Coords& group) {
  require(same_coords(w.coords(), group), "form does not live on the group");
  auto maps = group_law_maps(group);
  return maps.mu.pullback(w) == maps.p1.pullback(w) + maps.p2.pullback(w);
}

/// The identity point: additive coordinates 0, toric coordinates 1.
inline RatVector identity_point(const CoordSystem& cs) {
  RatVector p(cs.size());
  for (std::size_t i = 0; i < cs.size(); ++i) p[i] = cs[i].kind == VarKind::Toric ? 1 : 0;
  return p;
}

/// R(v, w) at the identity, with tangent vectors in the basis dual to the
/// covectors (d/dx, t d/dt).
inline Rational eval_form2_at_identity(const Form2& R, const RatVector& v, const RatVector& w) {
  const auto& cs = *R.coords();
  require(v.size() == cs.size() && w.size() == cs.size(), "tangent vectors have wrong length");
  auto e = identity_point(cs);
  Rational total = 0;
  for (const auto& [k, c] : R.coefficients()) {
    auto [i, j] = k;
    Rational det = v[i] * w[j] - v[j] * w[i];
    if (det != 0) total += c.evaluate(e) * det;
  }
  return total;
}

inline RatVector unit_tangent(std::size_t n, std::size_t i) {
  RatVector v(n, Rational(0));
  v[i] = 1;
  return v;
}

/// A 1-form depending linearly on unknown parameters: sum_k lambda_k basis[k].
struct ParameterizedForm1 {
  Coords coords;
  std::vector<Form1> basis;
  std::vector<std::string> labels;

  Form1 instantiate(const RatVector& values) const {
    require(values.size() == basis.size(), "parameter count mismatch");
    Form1 out(coords);
    for (std::size_t k = 0; k < basis.size(); ++k)
      if (values[k] != 0) out += values[k] * basis[k];
    return out;
  }
};

/// sum_k c_k phi_k^*(w) = target, all phi_k sharing a source.
struct FormEquation {
  std::string label;
  std::vector<std::pair<Rational, AffineMonomialMap>> terms;
  Form1 target;
};

struct UniqueSolution {
  RatVector values;
  Form1 form;
};
struct NoSolution {};
struct NonUnique {
  std::size_t dimension;
};

using FormSolveResult = std::variant<UniqueSolution, NoSolution, NonUnique>;

/// Expands every equation coefficientwise (covector, monomial) and solves the
/// resulting linear system over Q exactly.
inline FormSolveResult solve_linear_form_system(const ParameterizedForm1& ansatz,
                                                const std::vector<FormEquation>& equations) {
  SparseLinearSystem system(ansatz.basis.size());
  for (const auto& eq : equations) {
    require(!eq.terms.empty(), "equation without terms");
    const Coords& src = eq.terms.front().second.source();
    using Key = std::pair<std::size_t, Exponent>;
    std::map<Key, SparseLinearSystem::Row> rows;
    std::map<Key, Rational> rhs;
    for (std::size_t k = 0; k < ansatz.basis.size(); ++k) {
      Form1 image(src);
      for (const auto& [c, phi] : eq.terms) {
        require(same_coords(phi.source(), src), "equation terms disagree on the source");
        image += c * phi.pullback(ansatz.basis[k]);
      }
      for (const auto& [cov, poly] : image.coefficients())
        for (const auto& [e, c] : poly.terms()) rows[{cov, e}][k] += c;
    }
    require(eq.target.is_zero() || same_coords(eq.target.coords(), src), "equation target on the wrong coordinates");
    for (const auto& [cov, poly] : eq.target.coefficients())
      for (const auto& [e, c] : poly.terms()) rhs[{cov, e}] += c;
    for (auto& [key, row] : rows) {
      auto it = rhs.find(key);
      system.add_equation(std::move(row), it == rhs.end() ? Rational(0) : it->second);
    }
    for (const auto& [key, value] : rhs)
      if (!rows.count(key)) system.add_equation({}, value);
    if (system.inconsistent()) return NoSolution{};
  }
  auto outcome = system.solve();
  if (std::holds_alternative<SparseLinearSystem::NoSolution>(outcome)) return NoSolution{};
  if (auto* nu = std::get_if<SparseLinearSystem::NonUnique>(&outcome)) return NonUnique{nu->dimension};
  auto values = std::get<RatVector>(std::move(outcome));
  Form1 form = ansatz.instantiate(values);
  return UniqueSolution{std::move(values), std::move(form)};
}

}  // namespace natmot
