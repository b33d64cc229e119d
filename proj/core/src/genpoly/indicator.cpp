#include <algorithm>
#include <unordered_map>

#include "gplab/error.hpp"
#include "gplab/genpoly.hpp"

namespace gplab {

namespace {

using Coeffs = std::vector<GenPoly>;

void trim(Coeffs& c) {
  while (c.size() > 1 && c.back().is_constant(0)) c.pop_back();
}

Coeffs add_coeffs(const Coeffs& a, const Coeffs& b) {
  Coeffs r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i < a.size() && i < b.size()) {
      r[i] = a[i] + b[i];
    } else {
      r[i] = i < a.size() ? a[i] : b[i];
    }
  }
  trim(r);
  return r;
}

Coeffs mul_coeffs(const Coeffs& a, const Coeffs& b) {
  std::vector<std::vector<GenPoly>> parts(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_constant(0)) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (b[j].is_constant(0)) continue;
      parts[i + j].push_back(a[i] * b[j]);
    }
  }
  Coeffs r(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) r[i] = GenPoly::add(std::move(parts[i]));
  trim(r);
  return r;
}

class Expander {
 public:
  explicit Expander(std::size_t var) : var_(var) {}

  const Coeffs& run(const GenPoly& g) {
    auto it = memo_.find(g.id());
    if (it != memo_.end()) return it->second;
    Coeffs c = compute(g);
    return memo_.emplace(g.id(), std::move(c)).first->second;
  }

 private:
  Coeffs compute(const GenPoly& g) {
    using K = GenPoly::Kind;
    switch (g.kind()) {
      case K::Var:
        if (g.var_index() != var_) throw DomainError("expansion requires a univariate expression");
        return {GenPoly(), GenPoly::constant(ExactScalar(1))};
      case K::Const:
        return {g};
      case K::Add: {
        Coeffs acc{GenPoly()};
        for (const auto& c : g.children()) acc = add_coeffs(acc, run(c));
        return acc;
      }
      case K::Mul: {
        Coeffs acc{GenPoly::constant(ExactScalar(1))};
        for (const auto& c : g.children()) acc = mul_coeffs(acc, run(c));
        return acc;
      }
      case K::IntPow: {
        Coeffs base = run(g.children()[0]);
        Coeffs acc{GenPoly::constant(ExactScalar(1))};
        for (unsigned i = 0; i < g.exponent(); ++i) acc = mul_coeffs(acc, base);
        return acc;
      }
      case K::Floor: {
        // floor(y) = y - frac(y)
        Coeffs acc = run(g.children()[0]);
        acc[0] = acc[0] - GenPoly::frac(g.children()[0]);
        trim(acc);
        return acc;
      }
      case K::Frac:
        return {g};
    }
    return {GenPoly()};
  }

  std::size_t var_;
  std::unordered_map<const void*, Coeffs> memo_;
};

Interval interval_mul(const Interval& a, const Interval& b) {
  Rational p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

Integer floor_q(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

class Bounder {
 public:
  Interval run(const GenPoly& g) {
    auto it = memo_.find(g.id());
    if (it != memo_.end()) return it->second;
    Interval v = compute(g);
    memo_.emplace(g.id(), v);
    return v;
  }

 private:
  Interval compute(const GenPoly& g) {
    using K = GenPoly::Kind;
    switch (g.kind()) {
      case K::Var:
        throw UnboundedCoefficient("variable outside every fractional part: " + unparse(g));
      case K::Const:
        return g.constant_value().enclosure();
      case K::Add: {
        Interval acc{Rational(0), Rational(0)};
        for (const auto& c : g.children()) {
          Interval v = run(c);
          acc = {acc.lo + v.lo, acc.hi + v.hi};
        }
        return acc;
      }
      case K::Mul: {
        Interval acc{Rational(1), Rational(1)};
        for (const auto& c : g.children()) acc = interval_mul(acc, run(c));
        return acc;
      }
      case K::IntPow: {
        Interval base = run(g.children()[0]);
        Interval acc{Rational(1), Rational(1)};
        for (unsigned i = 0; i < g.exponent(); ++i) acc = interval_mul(acc, base);
        return acc;
      }
      case K::Floor: {
        Interval v = run(g.children()[0]);
        return {Rational(floor_q(v.lo)), Rational(floor_q(v.hi))};
      }
      case K::Frac:
        return {Rational(0), Rational(1)};
    }
    return {Rational(0), Rational(0)};
  }

  std::unordered_map<const void*, Interval> memo_;
};

GenPoly c(const Rational& q) { return GenPoly::constant(ExactScalar(q)); }

// [[h >= 0]] for |h| <= bound: 1 - floor(2 {h / 2M}) with M = bound + 1.
GenPoly bounded_ge0(const GenPoly& h, const Rational& bound) {
  Rational m = bound + 1;
  GenPoly scaled = c(Rational(1 / (2 * m))) * h;
  return c(Rational(1)) - GenPoly::floor(c(Rational(2)) * GenPoly::frac(scaled));
}

GenPoly ge0_from_expansion(Coeffs h, std::vector<Rational> bounds) {
  const std::size_t d = h.size() - 1;
  if (d == 0) return bounded_ge0(h[0], bounds[0]);
  Rational cap(1);
  for (std::size_t i = 0; i < d; ++i) cap += bounds[i];
  const GenPoly n = GenPoly::var(0);
  const GenPoly nh = n * h[d];
  const Rational inv2c = 1 / (2 * cap);
  // Gate q = [[-C <= n h_d < C]] = [[w = 0]] for the integer w below; the
  // zero test of an integer runs through {sqrt(2) w}, which vanishes only at 0.
  GenPoly w = GenPoly::floor(c(inv2c) * (nh + c(cap)));
  GenPoly rot = GenPoly::frac(GenPoly::constant(ExactScalar::sqrt(ExactScalar(2))) * w);
  GenPoly q = GenPoly::floor(c(Rational(1)) - c(Rational(1, 4)) * rot);
  // On the gate, n h_d = 2C({n h_d / 2C + 1/2} - 1/2) and the right side is bounded.
  GenPoly folded = c(Rational(2) * cap) * (GenPoly::frac(c(inv2c) * nh + c(Rational(1, 2))) - c(Rational(1, 2)));
  Coeffs lower(h.begin(), h.end() - 1);
  std::vector<Rational> lower_bounds(bounds.begin(), bounds.end() - 1);
  lower[d - 1] = lower[d - 1] + folded;
  lower_bounds[d - 1] += cap;
  trim(lower);
  lower_bounds.resize(lower.size());
  GenPoly rest = ge0_from_expansion(std::move(lower), std::move(lower_bounds));
  GenPoly lead = bounded_ge0(h[d], bounds[d]);
  return GenPoly::mul({c(Rational(1)) - q, lead}) + GenPoly::mul({q, rest});
}

void require_univariate(const GenPoly& g) {
  if (g.arity() > 1) throw DomainError("indicator construction requires a univariate expression");
}

}  // namespace

PolyInNExpansion expand_in_var(const GenPoly& g, std::size_t var) {
  Expander ex(var);
  PolyInNExpansion out;
  out.coefficients = ex.run(g);
  Bounder b;
  for (const auto& h : out.coefficients) {
    Interval iv = b.run(h);
    out.bounds.push_back(std::max(Rational(abs(iv.lo)), Rational(abs(iv.hi))));
  }
  return out;
}

Rational sup_bound(const GenPoly& g) {
  Interval iv = Bounder().run(g);
  return std::max(Rational(abs(iv.lo)), Rational(abs(iv.hi)));
}

GenPoly indicator_ge0(const GenPoly& g) {
  require_univariate(g);
  PolyInNExpansion e = expand_in_var(g, 0);
  return ge0_from_expansion(std::move(e.coefficients), std::move(e.bounds));
}

GenPoly indicator_interval(const GenPoly& g, const ExactScalar& a, const ExactScalar& b) {
  if (compare(a, b) != Ordering::LT) throw DomainError("indicator_interval requires a < b");
  GenPoly lo = indicator_ge0(g - GenPoly::constant(a));
  GenPoly hi = indicator_ge0(g - GenPoly::constant(b));
  return GenPoly::mul({lo, GenPoly::constant(ExactScalar(1)) - hi});
}

GenPoly indicator_zero(const GenPoly& g) { return GenPoly::mul({indicator_ge0(g), indicator_ge0(-g)}); }

}  // namespace gplab
