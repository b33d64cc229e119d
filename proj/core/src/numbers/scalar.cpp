#include <algorithm>
#include <functional>

#include "gplab/error.hpp"
#include "gplab/numbers.hpp"
#include "numbers/radical.hpp"

namespace gplab {

using detail::ConstructedRep;
using detail::Expr;
using detail::ExprPtr;
using detail::RadicalSum;

namespace {

ExprPtr expr_of(const ExactScalar& s) {
  if (s.is_rational()) return detail::make_leaf(RadicalSum::from_rational(s.rational()));
  return s.constructed_rep()->expr;
}

std::optional<RadicalSum> normal_of(const ExactScalar& s) {
  if (s.is_rational()) return RadicalSum::from_rational(s.rational());
  const auto& e = s.constructed_rep()->expr;
  if (e->op == Expr::Op::Leaf) return e->leaf;
  return std::nullopt;
}

ExactScalar from_expr(ExprPtr e) {
  auto rep = std::make_shared<ConstructedRep>();
  rep->expr = std::move(e);
  return ExactScalar(std::shared_ptr<const ConstructedRep>(std::move(rep)));
}

ExactScalar from_sum(RadicalSum s) {
  if (s.is_rational()) return ExactScalar(s.rational_part());
  return from_expr(detail::make_leaf(std::move(s)));
}

ExactScalar from_child(const ExprPtr& e) {
  if (e->op == Expr::Op::Leaf) return from_sum(e->leaf);
  return from_expr(e);
}

// (root(x, d))^e with d | e collapses to x^(e/d).
std::optional<ExactScalar> collapse_root_power(const ExactScalar& base, long e) {
  if (base.is_rational()) return std::nullopt;
  const auto& ex = base.constructed_rep()->expr;
  if (ex->op != Expr::Op::Root || e % static_cast<long>(ex->degree) != 0) return std::nullopt;
  return from_child(ex->a).pow(e / static_cast<long>(ex->degree));
}

ExactScalar node(Expr::Op op, const ExactScalar& a, const ExactScalar* b = nullptr, unsigned degree = 0) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->a = expr_of(a);
  if (b) e->b = expr_of(*b);
  e->degree = degree;
  return from_expr(std::move(e));
}

}  // namespace

const char* to_string(Ordering o) {
  switch (o) {
    case Ordering::LT:
      return "LT";
    case Ordering::EQ:
      return "EQ";
    case Ordering::GT:
      return "GT";
  }
  return "?";
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Integer ipow(const Integer& base, unsigned long exponent) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
  return r;
}

ExactScalar::ExactScalar(const Rational& v) : rep_(v) { std::get<Rational>(rep_).canonicalize(); }

ExactScalar ExactScalar::fraction(long num, long den) {
  if (den == 0) throw DomainError("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return ExactScalar(q);
}

const Rational& ExactScalar::rational() const {
  if (!is_rational()) throw DomainError("value is not rational: " + to_string());
  return std::get<Rational>(rep_);
}

bool ExactScalar::is_integer() const { return is_rational() && rational().get_den() == 1; }

bool ExactScalar::has_normal_form() const { return normal_of(*this).has_value(); }

std::optional<std::vector<std::pair<std::string, Rational>>> radical_components(const ExactScalar& s) {
  auto n = normal_of(s);
  if (!n) return std::nullopt;
  std::vector<std::pair<std::string, Rational>> out;
  for (const auto& [m, c] : n->terms) out.emplace_back(m.is_unit() ? std::string("1") : m.to_string(), c);
  return out;
}

std::optional<Interval> ExactScalar::enclosure_at(unsigned bits) const {
  if (is_rational()) return Interval{rational(), rational()};
  return constructed_rep()->expr->enclosure(bits);
}

Interval ExactScalar::enclosure() const {
  if (is_rational()) return Interval{rational(), rational()};
  const auto& rep = constructed_rep();
  if (rep->cached) return *rep->cached;
  for (unsigned bits = kInitialBits; bits <= kDefaultMaxBits; bits *= 2) {
    if (auto iv = enclosure_at(bits)) return *iv;
  }
  throw IndeterminateComparison("no enclosure could separate a divisor from zero", kDefaultMaxBits);
}

unsigned ExactScalar::precision() const {
  if (is_rational()) return 0;
  const auto& rep = constructed_rep();
  return rep->cached ? rep->bits : kInitialBits;
}

ExactScalar ExactScalar::refined(unsigned bits) const {
  if (is_rational()) return *this;
  const auto& rep = constructed_rep();
  auto fresh = enclosure_at(bits);
  if (!fresh) return *this;
  Interval iv = *fresh;
  if (rep->cached) {
    iv.lo = std::max(iv.lo, rep->cached->lo);
    iv.hi = std::min(iv.hi, rep->cached->hi);
  }
  auto out = std::make_shared<ConstructedRep>();
  out->expr = rep->expr;
  out->cached = iv;
  out->bits = std::max(bits, rep->cached ? rep->bits : 0u);
  return ExactScalar(std::shared_ptr<const ConstructedRep>(std::move(out)));
}

std::string ExactScalar::to_string() const {
  if (is_rational()) return gplab::to_string(rational());
  return constructed_rep()->expr->to_string();
}

std::string ExactScalar::to_decimal(unsigned digits) const {
  Rational v;
  if (is_rational()) {
    v = rational();
  } else {
    unsigned bits = static_cast<unsigned>(digits * 3.33) + 16;
    std::optional<Interval> iv;
    while (!(iv = enclosure_at(bits)) && bits < kDefaultMaxBits) bits *= 2;
    if (!iv) throw IndeterminateComparison("cannot approximate value", bits);
    v = (iv->lo + iv->hi) / 2;
  }
  Integer scale = ipow(Integer(10), digits);
  Rational scaled = v * scale + Rational(1, 2);
  Integer r = detail::floor_of(scaled);
  bool negative = r < 0;
  if (negative) r = -r;
  std::string s = r.get_str();
  if (digits > 0) {
    if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
    s.insert(s.size() - digits, ".");
  }
  return (negative ? "-" : "") + s;
}

ExactScalar operator+(const ExactScalar& a, const ExactScalar& b) {
  if (a.is_rational() && b.is_rational()) return ExactScalar(Rational(a.rational() + b.rational()));
  auto na = normal_of(a);
  auto nb = normal_of(b);
  if (na && nb) return from_sum(*na + *nb);
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return node(Expr::Op::Add, a, &b);
}

ExactScalar operator-(const ExactScalar& a, const ExactScalar& b) {
  if (a.is_rational() && b.is_rational()) return ExactScalar(Rational(a.rational() - b.rational()));
  auto na = normal_of(a);
  auto nb = normal_of(b);
  if (na && nb) return from_sum(*na - *nb);
  if (b.is_zero()) return a;
  if (a == b) return ExactScalar(0);
  return node(Expr::Op::Sub, a, &b);
}

ExactScalar operator*(const ExactScalar& a, const ExactScalar& b) {
  if (a.is_rational() && b.is_rational()) return ExactScalar(Rational(a.rational() * b.rational()));
  if (a.is_zero() || b.is_zero()) return ExactScalar(0);
  auto na = normal_of(a);
  auto nb = normal_of(b);
  if (na && nb) return from_sum(*na * *nb);
  if (a.is_rational() && a.rational() == 1) return b;
  if (b.is_rational() && b.rational() == 1) return a;
  if (a == b) {
    if (auto c = collapse_root_power(a, 2)) return *c;
  }
  return node(Expr::Op::Mul, a, &b);
}

ExactScalar operator/(const ExactScalar& a, const ExactScalar& b) {
  if (b.is_zero()) throw DomainError("division by zero");
  if (a.is_rational() && b.is_rational()) return ExactScalar(Rational(a.rational() / b.rational()));
  if (a.is_zero()) return ExactScalar(0);
  auto na = normal_of(a);
  auto nb = normal_of(b);
  if (nb) {
    if (auto inv = nb->inverse()) {
      if (na) return from_sum(*na * *inv);
      return a * from_sum(*inv);
    }
  }
  if (b.is_rational() && b.rational() == 1) return a;
  return node(Expr::Op::Div, a, &b);
}

ExactScalar operator-(const ExactScalar& a) {
  if (a.is_rational()) return ExactScalar(Rational(-a.rational()));
  if (auto na = normal_of(a)) return from_sum(na->negated());
  return node(Expr::Op::Neg, a);
}

ExactScalar ExactScalar::root(const ExactScalar& x, unsigned n) {
  if (n == 0) throw DomainError("root of degree 0");
  if (n == 1 || x.is_zero()) return x;
  if (x.is_rational() && x.rational() == 1) return x;
  int s = sign(x);
  if (s < 0 && n % 2 == 0) throw DomainError("even root of a negative number");
  if (auto nx = normal_of(x)) {
    if (auto r = nx->nth_root(n)) return from_sum(*r);
  }
  return node(Expr::Op::Root, x, nullptr, n);
}

ExactScalar ExactScalar::pow(long exponent) const {
  if (exponent < 0) return ExactScalar(1) / pow(-exponent);
  if (exponent > 0) {
    if (auto c = collapse_root_power(*this, exponent)) return *c;
  }
  ExactScalar result(1);
  ExactScalar base = *this;
  auto e = static_cast<unsigned long>(exponent);
  while (e) {
    if (e & 1UL) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

bool operator==(const ExactScalar& a, const ExactScalar& b) {
  if (a.is_rational() != b.is_rational()) return false;
  if (a.is_rational()) return a.rational() == b.rational();
  const auto& ea = a.constructed_rep()->expr;
  const auto& eb = b.constructed_rep()->expr;
  return ea == eb || *ea == *eb;
}

std::size_t ExactScalar::hash() const { return std::hash<std::string>{}(to_string()); }

namespace {

// Refines `s` until `done(lo, hi)` holds. Returns the final enclosure.
template <typename Done>
std::optional<Interval> refine_until(const ExactScalar& s, unsigned max_bits, PrecisionStats* stats, Done done) {
  if (s.is_rational()) {
    Interval iv{s.rational(), s.rational()};
    return done(iv) ? std::optional<Interval>(iv) : std::nullopt;
  }
  unsigned start = std::max(kInitialBits, s.precision());
  std::optional<Interval> cached = s.constructed_rep()->cached;
  for (unsigned bits = start;; bits = std::min(max_bits, bits * 2)) {
    auto iv = s.enclosure_at(bits);
    if (stats) {
      stats->note(bits);
      ++stats->refinements;
    }
    if (iv && cached) {
      iv->lo = std::max(iv->lo, cached->lo);
      iv->hi = std::min(iv->hi, cached->hi);
    }
    if (iv && done(*iv)) return iv;
    if (bits >= max_bits) break;
  }
  if (stats) ++stats->indeterminate_events;
  return std::nullopt;
}

}  // namespace

Integer floor_exact(const ExactScalar& s, unsigned max_bits, PrecisionStats* stats) {
  if (s.is_rational()) return detail::floor_of(s.rational());
  auto iv = refine_until(s, max_bits, stats, [](const Interval& v) {
    Integer flo = detail::floor_of(v.lo);
    Integer fhi = detail::floor_of(v.hi);
    if (flo != fhi) return false;
    // hi sitting exactly on an integer could still be that integer.
    return v.hi.get_den() != 1 || v.lo == v.hi;
  });
  if (!iv) throw IndeterminateFloor("cannot decide floor of " + s.to_string(), max_bits);
  return detail::floor_of(iv->lo);
}

ExactScalar frac_exact(const ExactScalar& s, unsigned max_bits, PrecisionStats* stats) {
  if (s.is_rational()) return ExactScalar(Rational(s.rational() - Rational(detail::floor_of(s.rational()))));
  return s - ExactScalar(floor_exact(s, max_bits, stats));
}

int sign(const ExactScalar& s, unsigned max_bits, PrecisionStats* stats) {
  if (s.is_rational()) return sgn(s.rational());
  auto iv = refine_until(s, max_bits, stats, [](const Interval& v) { return v.lo > 0 || v.hi < 0; });
  if (!iv) throw IndeterminateComparison("cannot decide sign of " + s.to_string(), max_bits);
  return iv->lo > 0 ? 1 : -1;
}

Ordering compare(const ExactScalar& a, const ExactScalar& b, unsigned max_bits, PrecisionStats* stats) {
  ExactScalar d = a - b;
  if (d.is_zero()) return Ordering::EQ;
  int s = sign(d, max_bits, stats);
  return s < 0 ? Ordering::LT : Ordering::GT;
}

}  // namespace gplab
