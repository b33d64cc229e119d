#include "numbers/radical.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <sstream>

#include "gplab/error.hpp"

namespace gplab::detail {

namespace {

constexpr unsigned long kTrialLimit = 100000;
constexpr std::size_t kMaxGroupSize = 256;
constexpr unsigned kGuardBits = 16;

Integer pow2(unsigned long e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

unsigned long bit_length(const Integer& z) {
  if (sgn(z) == 0) return 0;
  return mpz_sizeinbase(z.get_mpz_t(), 2);
}

// Floor of the n-th root of a nonnegative integer; `exact` reports whether
// the root is exact.
Integer floor_root(const Integer& z, unsigned long n, bool* exact = nullptr) {
  Integer r;
  int ex = mpz_root(r.get_mpz_t(), z.get_mpz_t(), n);
  if (exact) *exact = ex != 0;
  return r;
}

using Factorization = std::map<Integer, unsigned long>;

bool factor_into(Integer n, unsigned long mult, Factorization& out);

bool factor_cofactor(const Integer& c, unsigned long mult, Factorization& out) {
  if (c == 1) return true;
  if (c < Integer(kTrialLimit) * Integer(kTrialLimit) || mpz_probab_prime_p(c.get_mpz_t(), 30) > 0) {
    out[c] += mult;
    return true;
  }
  if (mpz_perfect_power_p(c.get_mpz_t())) {
    unsigned long bits = bit_length(c);
    for (unsigned long k = bits; k >= 2; --k) {
      bool exact = false;
      Integer b = floor_root(c, k, &exact);
      if (exact) return factor_into(b, mult * k, out);
    }
  }
  return false;
}

bool factor_into(Integer n, unsigned long mult, Factorization& out) {
  auto strip = [&](unsigned long p) {
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
      out[Integer(p)] += mult;
    }
  };
  strip(2);
  strip(3);
  for (unsigned long p = 5; p <= kTrialLimit; p += 6) {
    if (Integer(p) * Integer(p) > n) break;
    strip(p);
    strip(p + 2);
  }
  return factor_cofactor(n, mult, out);
}

Rational ipow_rational(const Integer& p, long e) {
  Integer q;
  mpz_pow_ui(q.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? Rational(Integer(1), q) : Rational(q);
}

// Adds exponent `e` to prime `p` in an accumulating map and returns the
// integer part pulled out as a coefficient factor.
void accumulate(std::map<Integer, Rational>& acc, const Integer& p, const Rational& e) {
  acc[p] += e;
}

std::pair<Rational, RadicalMonomial> normalise(const std::map<Integer, Rational>& acc) {
  Rational coef(1);
  RadicalMonomial m;
  for (const auto& [p, e] : acc) {
    Integer fl = floor_of(e);
    Rational rest = e - Rational(fl);
    if (fl != 0) coef *= ipow_rational(p, fl.get_si());
    if (sgn(rest) != 0) m.factors.emplace_back(p, rest);
  }
  coef.canonicalize();
  return {coef, m};
}

struct EnclosureCache {
  std::mutex mu;
  std::map<std::pair<RadicalMonomial, unsigned>, Interval> entries;
};

EnclosureCache& cache() {
  static EnclosureCache c;
  return c;
}

Interval interval_mul(const Interval& a, const Interval& b) {
  Rational p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

Interval round_out(const Interval& v, unsigned bits) { return {round_down(v.lo, bits), round_up(v.hi, bits)}; }

// Rational n-th root enclosure of a nonnegative rational at `bits`.
Interval root_interval(const Interval& v, unsigned n, unsigned bits) {
  Rational lo = v.lo < 0 ? Rational(0) : v.lo;
  Rational hi = v.hi < 0 ? Rational(0) : v.hi;
  Integer scale = pow2(static_cast<unsigned long>(bits) * n);
  Integer lo_num = floor_of(Rational(lo * scale));
  Integer hi_num = ceil_of(Rational(hi * scale));
  Integer den = pow2(bits);
  bool exact = false;
  Integer lo_root = floor_root(lo_num, n);
  Integer hi_root = floor_root(hi_num, n, &exact);
  if (!exact) hi_root += 1;
  return {Rational(lo_root, den), Rational(hi_root, den)};
}

}  // namespace

Integer floor_of(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer ceil_of(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Rational round_down(const Rational& q, unsigned bits) {
  if (q.get_den() == 1) return q;
  Integer s = pow2(bits);
  Rational r(floor_of(Rational(q * s)), s);
  r.canonicalize();
  return r;
}

Rational round_up(const Rational& q, unsigned bits) {
  if (q.get_den() == 1) return q;
  Integer s = pow2(bits);
  Rational r(ceil_of(Rational(q * s)), s);
  r.canonicalize();
  return r;
}

bool operator<(const RadicalMonomial& a, const RadicalMonomial& b) {
  return std::lexicographical_compare(a.factors.begin(), a.factors.end(), b.factors.begin(), b.factors.end(),
                                      [](const auto& x, const auto& y) {
                                        if (x.first != y.first) return x.first < y.first;
                                        return x.second < y.second;
                                      });
}

bool operator==(const RadicalMonomial& a, const RadicalMonomial& b) { return a.factors == b.factors; }

std::pair<Integer, unsigned long> RadicalMonomial::as_root() const {
  unsigned long lcm = 1;
  for (const auto& f : factors) lcm = std::lcm(lcm, f.second.get_den().get_ui());
  Integer n(1);
  for (const auto& [p, e] : factors) {
    Integer power;
    unsigned long k = (Rational(e * Integer(lcm))).get_num().get_ui();
    mpz_pow_ui(power.get_mpz_t(), p.get_mpz_t(), k);
    n *= power;
  }
  return {n, lcm};
}

std::string RadicalMonomial::to_string() const {
  auto [n, l] = as_root();
  if (l == 2) return "sqrt(" + n.get_str() + ")";
  return "root(" + n.get_str() + ", " + std::to_string(l) + ")";
}

std::pair<Rational, RadicalMonomial> multiply(const RadicalMonomial& a, const RadicalMonomial& b) {
  std::map<Integer, Rational> acc;
  for (const auto& [p, e] : a.factors) accumulate(acc, p, e);
  for (const auto& [p, e] : b.factors) accumulate(acc, p, e);
  return normalise(acc);
}

std::pair<Rational, RadicalMonomial> inverse(const RadicalMonomial& m) {
  std::map<Integer, Rational> acc;
  for (const auto& [p, e] : m.factors) accumulate(acc, p, Rational(-e));
  return normalise(acc);
}

RadicalMonomial nth_root(const RadicalMonomial& m, unsigned n) {
  RadicalMonomial r;
  for (const auto& [p, e] : m.factors) {
    Rational ne = e / Rational(n);
    ne.canonicalize();
    r.factors.emplace_back(p, ne);
  }
  return r;
}

std::optional<std::pair<Rational, RadicalMonomial>> root_of_rational(const Rational& q, unsigned n) {
  if (sgn(q) <= 0) return std::nullopt;
  Factorization num;
  Factorization den;
  if (!factor_into(Integer(q.get_num()), 1, num) || !factor_into(Integer(q.get_den()), 1, den)) return std::nullopt;
  std::map<Integer, Rational> acc;
  for (const auto& [p, k] : num) accumulate(acc, p, Rational(static_cast<long>(k), static_cast<long>(n)));
  for (const auto& [p, k] : den) accumulate(acc, p, Rational(-static_cast<long>(k), static_cast<long>(n)));
  for (auto& [p, e] : acc) e.canonicalize();
  return normalise(acc);
}

Interval monomial_enclosure(const RadicalMonomial& m, unsigned bits) {
  if (m.is_unit()) return {Rational(1), Rational(1)};
  auto key = std::make_pair(m, bits);
  {
    std::lock_guard<std::mutex> lock(cache().mu);
    auto it = cache().entries.find(key);
    if (it != cache().entries.end()) return it->second;
  }
  auto [n, l] = m.as_root();
  Integer scaled = n * pow2(static_cast<unsigned long>(bits) * l);
  bool exact = false;
  Integer r = floor_root(scaled, l, &exact);
  Integer den = pow2(bits);
  Interval out{Rational(r, den), Rational(exact ? r : Integer(r + 1), den)};
  out.lo.canonicalize();
  out.hi.canonicalize();
  std::lock_guard<std::mutex> lock(cache().mu);
  if (cache().entries.size() > 8192) cache().entries.clear();
  cache().entries.emplace(std::move(key), out);
  return out;
}

RadicalSum RadicalSum::from_rational(const Rational& q) {
  RadicalSum s;
  if (sgn(q) != 0) s.terms.emplace(RadicalMonomial{}, q);
  return s;
}

bool RadicalSum::is_rational() const { return terms.empty() || (terms.size() == 1 && terms.begin()->first.is_unit()); }

Rational RadicalSum::rational_part() const {
  auto it = terms.find(RadicalMonomial{});
  return it == terms.end() ? Rational(0) : it->second;
}

namespace {
void add_term(RadicalSum& s, const RadicalMonomial& m, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = s.terms.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) s.terms.erase(it);
  }
}
}  // namespace

RadicalSum operator+(const RadicalSum& a, const RadicalSum& b) {
  RadicalSum r = a;
  for (const auto& [m, c] : b.terms) add_term(r, m, c);
  return r;
}

RadicalSum operator-(const RadicalSum& a, const RadicalSum& b) {
  RadicalSum r = a;
  for (const auto& [m, c] : b.terms) add_term(r, m, Rational(-c));
  return r;
}

RadicalSum operator*(const RadicalSum& a, const RadicalSum& b) {
  RadicalSum r;
  for (const auto& [ma, ca] : a.terms) {
    for (const auto& [mb, cb] : b.terms) {
      if (ma.is_unit()) {
        add_term(r, mb, Rational(ca * cb));
      } else if (mb.is_unit()) {
        add_term(r, ma, Rational(ca * cb));
      } else {
        auto [coef, m] = multiply(ma, mb);
        add_term(r, m, Rational(ca * cb * coef));
      }
    }
  }
  return r;
}

RadicalSum RadicalSum::negated() const { return scaled(Rational(-1)); }

RadicalSum RadicalSum::scaled(const Rational& c) const {
  RadicalSum r;
  if (sgn(c) == 0) return r;
  for (const auto& [m, v] : terms) r.terms.emplace(m, Rational(v * c));
  return r;
}

std::optional<RadicalSum> RadicalSum::inverse() const {
  if (terms.empty()) throw DomainError("division by zero");
  if (terms.size() == 1) {
    const auto& [m, c] = *terms.begin();
    auto [coef, inv] = detail::inverse(m);
    RadicalSum r;
    r.terms.emplace(inv, Rational(coef / c));
    return r;
  }
  // Close the monomial set under multiplication by the generators.
  std::vector<RadicalMonomial> basis{RadicalMonomial{}};
  std::map<RadicalMonomial, std::size_t> index{{RadicalMonomial{}, 0}};
  std::vector<RadicalMonomial> gens;
  for (const auto& [m, c] : terms)
    if (!m.is_unit()) gens.push_back(m);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (const auto& g : gens) {
      RadicalMonomial prod = multiply(basis[i], g).second;
      if (!index.count(prod)) {
        if (basis.size() >= kMaxGroupSize) return std::nullopt;
        index.emplace(prod, basis.size());
        basis.push_back(prod);
      }
    }
  }
  const std::size_t n = basis.size();
  // Column j holds the coordinates of this * basis[j]; solve M y = e_0.
  std::vector<std::vector<Rational>> mat(n, std::vector<Rational>(n + 1, Rational(0)));
  for (std::size_t j = 0; j < n; ++j) {
    for (const auto& [m, c] : terms) {
      auto [coef, prod] = multiply(m, basis[j]);
      mat[index.at(prod)][j] += c * coef;
    }
  }
  mat[0][n] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && sgn(mat[piv][col]) == 0) ++piv;
    if (piv == n) throw DomainError("singular multiplication matrix in radical inverse");
    std::swap(mat[piv], mat[col]);
    Rational inv = 1 / mat[col][col];
    for (std::size_t k = col; k <= n; ++k) mat[col][k] *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || sgn(mat[r][col]) == 0) continue;
      Rational f = mat[r][col];
      for (std::size_t k = col; k <= n; ++k) mat[r][k] -= f * mat[col][k];
    }
  }
  RadicalSum out;
  for (std::size_t j = 0; j < n; ++j) add_term(out, basis[j], mat[j][n]);
  return out;
}

std::optional<RadicalSum> RadicalSum::nth_root(unsigned n) const {
  if (terms.empty()) return RadicalSum{};
  if (terms.size() != 1) return std::nullopt;
  const auto& [m, c] = *terms.begin();
  bool negative = sgn(c) < 0;
  if (negative && n % 2 == 0) throw DomainError("even root of a negative number");
  auto rc = root_of_rational(negative ? Rational(-c) : c, n);
  if (!rc) return std::nullopt;
  auto [coef, prod] = multiply(rc->second, detail::nth_root(m, n));
  Rational total = rc->first * coef;
  if (negative) total = -total;
  RadicalSum r;
  r.terms.emplace(prod, total);
  return r;
}

std::optional<Interval> RadicalSum::enclosure(unsigned bits) const {
  Interval acc{Rational(0), Rational(0)};
  for (const auto& [m, c] : terms) {
    if (m.is_unit()) {
      acc.lo += c;
      acc.hi += c;
      continue;
    }
    // Scale the monomial precision by the coefficient size so the absolute
    // error of c*m stays near 2^-bits.
    Integer cnum = abs(c.get_num());
    unsigned extra = static_cast<unsigned>(bit_length(cnum)) + 2;
    Interval mi = monomial_enclosure(m, bits + extra);
    Interval ti = sgn(c) > 0 ? Interval{c * mi.lo, c * mi.hi} : Interval{c * mi.hi, c * mi.lo};
    acc.lo += ti.lo;
    acc.hi += ti.hi;
  }
  return acc;
}

std::string RadicalSum::to_string() const {
  if (terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms) {
    Rational mag = first ? c : Rational(abs(c));
    std::string piece;
    if (m.is_unit()) {
      piece = gplab::to_string(mag);
    } else if (mag == 1) {
      piece = m.to_string();
    } else if (mag == -1) {
      piece = "-" + m.to_string();
    } else {
      piece = gplab::to_string(mag) + "*" + m.to_string();
    }
    if (first) {
      out = piece;
    } else {
      out += sgn(c) < 0 ? " - " : " + ";
      out += piece;
    }
    first = false;
  }
  return out;
}

ExprPtr make_leaf(RadicalSum s) {
  auto e = std::make_shared<Expr>();
  e->op = Expr::Op::Leaf;
  e->leaf = std::move(s);
  return e;
}

std::optional<Interval> Expr::enclosure(unsigned bits) const {
  const unsigned work = bits + kGuardBits;
  switch (op) {
    case Op::Leaf:
      return leaf.enclosure(work);
    case Op::Neg: {
      auto x = a->enclosure(bits);
      if (!x) return std::nullopt;
      return Interval{Rational(-x->hi), Rational(-x->lo)};
    }
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: {
      auto x = a->enclosure(bits);
      auto y = b->enclosure(bits);
      if (!x || !y) return std::nullopt;
      Interval r;
      if (op == Op::Add) {
        r = {x->lo + y->lo, x->hi + y->hi};
      } else if (op == Op::Sub) {
        r = {x->lo - y->hi, x->hi - y->lo};
      } else if (op == Op::Mul) {
        r = interval_mul(*x, *y);
      } else {
        if (y->contains(Rational(0))) return std::nullopt;
        Interval recip{Rational(1 / y->hi), Rational(1 / y->lo)};
        r = interval_mul(*x, recip);
      }
      return round_out(r, work);
    }
    case Op::Root: {
      auto x = a->enclosure(bits);
      if (!x) return std::nullopt;
      if (degree % 2 == 1 && x->hi < 0) {
        Interval neg{Rational(-x->hi), Rational(-x->lo)};
        Interval rr = root_interval(neg, degree, work);
        return Interval{Rational(-rr.hi), Rational(-rr.lo)};
      }
      if (degree % 2 == 1 && x->lo < 0) {
        // Odd root of an interval straddling zero.
        Interval neg{Rational(0), Rational(-x->lo)};
        Interval pos{Rational(0), x->hi};
        Interval rn = root_interval(neg, degree, work);
        Interval rp = root_interval(pos, degree, work);
        return Interval{Rational(-rn.hi), rp.hi};
      }
      return root_interval(*x, degree, work);
    }
  }
  return std::nullopt;
}

std::string Expr::to_string() const {
  auto wrap = [](const Expr& e) { return "(" + e.to_string() + ")"; };
  switch (op) {
    case Op::Leaf:
      return leaf.to_string();
    case Op::Neg:
      return "-" + wrap(*a);
    case Op::Add:
      return wrap(*a) + " + " + wrap(*b);
    case Op::Sub:
      return wrap(*a) + " - " + wrap(*b);
    case Op::Mul:
      return wrap(*a) + "*" + wrap(*b);
    case Op::Div:
      return wrap(*a) + "/" + wrap(*b);
    case Op::Root:
      if (degree == 2) return "sqrt(" + a->to_string() + ")";
      return "root(" + a->to_string() + ", " + std::to_string(degree) + ")";
  }
  return "?";
}

bool operator==(const Expr& x, const Expr& y) {
  if (x.op != y.op) return false;
  switch (x.op) {
    case Expr::Op::Leaf:
      return x.leaf == y.leaf;
    case Expr::Op::Neg:
      return *x.a == *y.a;
    case Expr::Op::Root:
      return x.degree == y.degree && *x.a == *y.a;
    default:
      return *x.a == *y.a && *x.b == *y.b;
  }
}

}  // namespace gplab::detail
