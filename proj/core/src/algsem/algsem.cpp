#include "gplab/algsem.hpp"

#include <algorithm>
#include <map>

#include "gplab/error.hpp"

namespace gplab {

namespace {

using Row = std::vector<Rational>;

// Fully reduced row echelon form, grown one row at a time.
class Echelon {
 public:
  explicit Echelon(std::size_t cols) : cols_(cols) {}

  bool add(Row r) {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Rational c = r[pivots_[i]];
      if (sgn(c) == 0) continue;
      for (std::size_t j = 0; j < cols_; ++j)
        if (sgn(rows_[i][j]) != 0) r[j] -= c * rows_[i][j];
    }
    std::size_t p = 0;
    while (p < cols_ && sgn(r[p]) == 0) ++p;
    if (p == cols_) return false;
    const Rational inv = 1 / r[p];
    for (auto& v : r) v *= inv;
    for (auto& row : rows_) {
      const Rational c = row[p];
      if (sgn(c) == 0) continue;
      for (std::size_t j = 0; j < cols_; ++j)
        if (sgn(r[j]) != 0) row[j] -= c * r[j];
    }
    auto at = std::lower_bound(pivots_.begin(), pivots_.end(), p);
    const auto idx = at - pivots_.begin();
    pivots_.insert(at, p);
    rows_.insert(rows_.begin() + idx, std::move(r));
    return true;
  }

  std::size_t rank() const { return rows_.size(); }
  const std::vector<Row>& rows() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

 private:
  std::size_t cols_;
  std::vector<Row> rows_;
  std::vector<std::size_t> pivots_;
};

// Column c of the coefficient space is the c-th greatest monomial.
std::vector<Monomial> columns(std::size_t dim, unsigned degree) {
  std::vector<Monomial> m = monomials_up_to(dim, degree);
  std::reverse(m.begin(), m.end());
  return m;
}

ExactScalar monomial_value(const Monomial& m, const PointQ& p) {
  ExactScalar v(1);
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m[i]) v *= p[i].pow(m[i]);
  return v;
}

Polynomial from_row(const Row& r, const std::vector<Monomial>& cols) {
  Polynomial f;
  for (std::size_t c = 0; c < cols.size(); ++c)
    if (sgn(r[c]) != 0) f += Polynomial::term(cols[c], r[c]);
  return f;
}

bool vanishes(const Polynomial& f, const PointQ& p, unsigned max_bits = kDefaultMaxBits) {
  return sign(f.evaluate(p), max_bits) == 0;
}

nlohmann::json poly_list(const std::vector<Polynomial>& ps) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& p : ps) out.push_back(p.to_string());
  return out;
}

Polynomial poly_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_polynomial(j.get<std::string>());
  return Polynomial::from_json(j);
}

Rational determinant(Matrix<Rational> m) {
  const std::size_t n = m.rows();
  Rational det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(m(p, c)) == 0) ++p;
    if (p == n) return Rational(0);
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      const Rational f = m(r, c) / m(c, c);
      if (sgn(f) == 0) continue;
      for (std::size_t j = c; j < n; ++j) m(r, j) -= f * m(c, j);
    }
  }
  return det;
}

}  // namespace

IdealBasis vanishing_ideal(const std::vector<PointQ>& points, unsigned degree, std::size_t dim) {
  if (points.empty() && dim == 0) throw DomainError("vanishing_ideal needs points or an explicit dimension");
  if (dim == 0) dim = points.front().size();
  if (degree < 1) throw DomainError("degree bound must be at least 1");
  const std::vector<Monomial> cols = columns(dim, degree);
  Echelon constraints(cols.size());
  for (const auto& p : points) {
    if (p.size() != dim) throw DomainError("point dimension mismatch");
    std::map<std::string, Row> split;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      auto comps = radical_components(monomial_value(cols[c], p));
      if (!comps) throw DomainError("vanishing_ideal needs points in the radical normal form");
      for (const auto& [key, coeff] : *comps) {
        auto& row = split.try_emplace(key, Row(cols.size())).first->second;
        row[c] += coeff;
      }
    }
    for (auto& [key, row] : split) constraints.add(std::move(row));
    if (constraints.rank() == cols.size()) break;
  }
  // null space: one vector per free column, then canonical echelon form
  std::vector<bool> is_pivot(cols.size(), false);
  for (auto p : constraints.pivots()) is_pivot[p] = true;
  Echelon kernel(cols.size());
  for (std::size_t f = 0; f < cols.size(); ++f) {
    if (is_pivot[f]) continue;
    Row v(cols.size());
    v[f] = 1;
    for (std::size_t i = 0; i < constraints.rank(); ++i) v[constraints.pivots()[i]] = -constraints.rows()[i][f];
    kernel.add(std::move(v));
  }
  IdealBasis out;
  out.dim = dim;
  out.degree = degree;
  out.points = points;
  for (const auto& r : kernel.rows()) out.basis.push_back(from_row(r, cols));
  return out;
}

Polynomial IdealBasis::reduce(const Polynomial& f) const {
  Polynomial r = f;
  for (const auto& b : basis) {
    const Rational c = r.coefficient(b.leading_monomial());
    if (sgn(c) != 0) r -= b.scaled(c);
  }
  return r;
}

bool IdealBasis::contains(const Polynomial& f) const {
  return f.total_degree() <= static_cast<int>(degree) && reduce(f).is_zero();
}

nlohmann::json IdealBasis::to_json() const {
  return {{"d", dim}, {"D", degree}, {"order", "grlex"}, {"basis", poly_list(basis)},
          {"basis_terms", [&] {
             nlohmann::json a = nlohmann::json::array();
             for (const auto& b : basis) a.push_back(b.to_json());
             return a;
           }()}};
}

IdealBasis IdealBasis::from_json(const nlohmann::json& j) {
  IdealBasis b;
  b.dim = j.at("d").get<std::size_t>();
  b.degree = j.at("D").get<unsigned>();
  for (const auto& t : j.at("basis_terms")) b.basis.push_back(Polynomial::from_json(t));
  return b;
}

TailReport tail_closure(const std::vector<PointQ>& sequence, const std::vector<std::size_t>& tail_starts,
                        unsigned degree) {
  if (tail_starts.empty()) throw EmptyTail("no tail starts given");
  TailReport rep;
  std::size_t prev = 0;
  for (std::size_t i = 0; i < tail_starts.size(); ++i) {
    const std::size_t n0 = tail_starts[i];
    if (n0 >= sequence.size()) throw EmptyTail("tail starting at " + std::to_string(n0) + " is empty");
    if (i > 0 && n0 <= prev) throw DomainError("tail starts must be increasing");
    prev = n0;
    std::vector<PointQ> tail(sequence.begin() + static_cast<long>(n0), sequence.end());
    rep.starts.push_back(n0);
    rep.bases.push_back(vanishing_ideal(tail, degree, sequence.front().size()));
  }
  for (std::size_t i = 1; i < rep.bases.size(); ++i)
    for (const auto& f : rep.bases[i - 1].basis)
      if (!rep.bases[i].contains(f)) rep.increasing = false;
  rep.stable_from = rep.bases.size() - 1;
  while (rep.stable_from > 0 && rep.bases[rep.stable_from - 1] == rep.bases.back()) --rep.stable_from;
  return rep;
}

nlohmann::json TailReport::to_json() const {
  nlohmann::json tails = nlohmann::json::array();
  for (std::size_t i = 0; i < bases.size(); ++i)
    tails.push_back({{"start", starts[i]}, {"dimension", bases[i].basis.size()}, {"basis", poly_list(bases[i].basis)}});
  return {{"tails", tails},
          {"increasing", increasing},
          {"stabilized", stabilized()},
          {"stable_from", starts.empty() ? 0 : starts[stable_from]},
          {"ideal", bases.empty() ? nlohmann::json() : bases.back().to_json()}};
}

bool translation_check(const IdealBasis& b, const std::vector<Rational>& v) {
  if (v.size() != b.dim) throw DomainError("translation dimension mismatch");
  std::vector<Polynomial> images;
  for (std::size_t i = 0; i < b.dim; ++i) images.push_back(Polynomial::variable(i) - Polynomial(v[i]));
  for (const auto& f : b.basis)
    if (!b.contains(f.substitute(images))) return false;
  return true;
}

PolyMap affine_map(const Matrix<Rational>& m, const std::vector<Rational>& c) {
  PolyMap t;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Polynomial p(c.empty() ? Rational(0) : c[i]);
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (sgn(m(i, j)) != 0) p += Polynomial::variable(j).scaled(m(i, j));
    t.push_back(p);
  }
  return t;
}

bool affine_image_check(const IdealBasis& v, const IdealBasis& u, const PolyMap& t, unsigned degree_cap) {
  if (t.size() != u.dim) throw DomainError("map target dimension mismatch");
  for (const auto& f : u.basis) {
    Polynomial g = f.substitute(t);
    if (g.total_degree() > static_cast<int>(degree_cap))
      throw DegreeOverflow("composed degree " + std::to_string(g.total_degree()) + " exceeds cap " +
                           std::to_string(degree_cap));
    for (const auto& p : v.points)
      if (!vanishes(g, p)) return false;
    if (g.total_degree() <= static_cast<int>(v.degree) && !v.contains(g)) return false;
  }
  return true;
}

bool membership(const SemialgebraicSet& s, const PointQ& x, unsigned max_bits, PrecisionStats* stats) {
  if (x.size() != s.dim) throw DomainError("point dimension mismatch");
  for (const auto& piece : s.pieces) {
    bool in = true;
    for (const auto& f : piece.equalities)
      if (sign(f.evaluate(x), max_bits, stats) != 0) {
        in = false;
        break;
      }
    if (!in) continue;
    for (const auto& g : piece.inequalities)
      if (sign(g.evaluate(x), max_bits, stats) <= 0) {
        in = false;
        break;
      }
    if (in) return true;
  }
  return false;
}

unsigned complexity(const SemialgebraicSet& s) {
  unsigned total = 0;
  for (const auto& piece : s.pieces) {
    for (const auto& f : piece.equalities) total += static_cast<unsigned>(std::max(0, f.total_degree()));
    for (const auto& g : piece.inequalities) total += static_cast<unsigned>(std::max(0, g.total_degree()));
  }
  return total;
}

nlohmann::json SemialgebraicSet::to_json() const {
  nlohmann::json ps = nlohmann::json::array();
  for (const auto& p : pieces) ps.push_back({{"F", poly_list(p.equalities)}, {"G", poly_list(p.inequalities)}});
  return {{"dim", dim}, {"pieces", ps}};
}

SemialgebraicSet SemialgebraicSet::from_json(const nlohmann::json& j) {
  SemialgebraicSet s;
  s.dim = j.at("dim").get<std::size_t>();
  for (const auto& p : j.at("pieces")) {
    BasicPiece piece;
    if (p.contains("F"))
      for (const auto& f : p.at("F")) piece.equalities.push_back(poly_from_json(f));
    if (p.contains("G"))
      for (const auto& g : p.at("G")) piece.inequalities.push_back(poly_from_json(g));
    s.pieces.push_back(std::move(piece));
  }
  return s;
}

bool change_basis_membership(const SemialgebraicSet& s_prime, const Matrix<Integer>& t, const PointQ& x,
                             unsigned max_bits) {
  if (t.rows() != t.cols() || t.rows() != x.size()) throw DomainError("change of basis shape mismatch");
  Rational det = determinant(t.map([](const Integer& v) { return Rational(v); }));
  if (abs(det) != 1) throw DomainError("change of basis must be unimodular");
  PointQ y;
  for (const auto& v : gplab::apply(t, x)) y.push_back(frac_exact(v, max_bits));
  return membership(s_prime, y, max_bits);
}

SemialgebraicSet InequalityFamily::at(long n) const {
  std::vector<Polynomial> images;
  for (std::size_t i = 0; i < dim; ++i) images.push_back(Polynomial::variable(i));
  images.push_back(parameter == FamilyParameter::N ? Polynomial(Rational(n)) : Polynomial(Rational(1, n)));
  BasicPiece piece;
  for (const auto& g : inequalities) piece.inequalities.push_back(g.substitute(images));
  return {dim, {piece}};
}

Sandwich limit_sandwich(const InequalityFamily& family) {
  Sandwich out;
  Polynomial product(1);
  for (const auto& g : family.inequalities) {
    if (g.is_zero()) throw NonConvergentCoefficients("inequality family is identically zero");
    std::map<unsigned, Polynomial> by_power;
    for (const auto& [m, c] : g.terms()) {
      const unsigned e = m.size() > family.dim ? m[family.dim] : 0;
      Monomial base(m.begin(), m.begin() + static_cast<long>(std::min(m.size(), family.dim)));
      by_power[e] += Polynomial::term(base, c);
    }
    const Polynomial& lim =
        family.parameter == FamilyParameter::InverseN ? by_power.begin()->second : by_power.rbegin()->second;
    out.limits.push_back(lim);
    product *= lim;
  }
  out.r = {family.dim, {BasicPiece{{}, out.limits}}};
  out.u = {family.dim, {BasicPiece{{product}, {}}}};
  return out;
}

SandwichReport check_sandwich(const InequalityFamily& family, const Sandwich& s, const std::vector<PointQ>& grid,
                              long n_lo, long n_hi) {
  if (n_lo < 1 || n_hi < n_lo) throw DomainError("invalid window for the sandwich check");
  std::vector<SemialgebraicSet> members;
  for (long n = n_lo; n <= n_hi; ++n) members.push_back(family.at(n));
  SandwichReport rep;
  for (const auto& x : grid) {
    ++rep.samples;
    bool eventual = std::all_of(members.begin(), members.end(), [&](const auto& sn) { return membership(sn, x); });
    const bool in_r = membership(s.r, x);
    const bool in_u = membership(s.u, x);
    if (eventual) ++rep.eventual;
    if (in_r && !eventual) ++rep.r_not_eventual;
    if (eventual && !in_r && !in_u) ++rep.eventual_outside;
  }
  return rep;
}

nlohmann::json SandwichReport::to_json() const {
  return {{"samples", samples},
          {"eventual", eventual},
          {"r_not_eventual", r_not_eventual},
          {"eventual_outside", eventual_outside},
          {"holds", holds()}};
}

}  // namespace gplab
