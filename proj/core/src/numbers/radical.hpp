#pragma once

// Radical normal form: finite Q-linear combinations of monomials
// prod p^{e_p} with distinct primes p and rational exponents e_p in (0,1).
// Distinct such monomials are linearly independent over Q, so the form is
// canonical and zero-testing is syntactic.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gplab/numbers.hpp"

namespace gplab::detail {

struct RadicalMonomial {
  // Sorted by prime; every exponent lies strictly inside (0,1).
  std::vector<std::pair<Integer, Rational>> factors;

  bool is_unit() const { return factors.empty(); }
  friend bool operator<(const RadicalMonomial& a, const RadicalMonomial& b);
  friend bool operator==(const RadicalMonomial& a, const RadicalMonomial& b);

  /// Least common denominator L of the exponents and N = prod p^{e_p L},
  /// so the monomial equals N^{1/L}.
  std::pair<Integer, unsigned long> as_root() const;
  std::string to_string() const;
};

/// a*b = coefficient * monomial.
std::pair<Rational, RadicalMonomial> multiply(const RadicalMonomial& a, const RadicalMonomial& b);
/// m^{-1} = coefficient * monomial.
std::pair<Rational, RadicalMonomial> inverse(const RadicalMonomial& m);
/// m^{1/n}; exponents stay inside (0,1).
RadicalMonomial nth_root(const RadicalMonomial& m, unsigned n);

/// q^{1/n} for q > 0, or nullopt when q cannot be factored cheaply.
std::optional<std::pair<Rational, RadicalMonomial>> root_of_rational(const Rational& q, unsigned n);

/// Enclosure [lo, lo + 2^-bits] of a monomial (memoised, thread-safe).
Interval monomial_enclosure(const RadicalMonomial& m, unsigned bits);

struct RadicalSum {
  std::map<RadicalMonomial, Rational> terms;  // nonzero coefficients only

  static RadicalSum from_rational(const Rational& q);
  bool is_rational() const;
  Rational rational_part() const;
  bool is_single_term() const { return terms.size() == 1; }

  friend RadicalSum operator+(const RadicalSum& a, const RadicalSum& b);
  friend RadicalSum operator-(const RadicalSum& a, const RadicalSum& b);
  friend RadicalSum operator*(const RadicalSum& a, const RadicalSum& b);
  RadicalSum negated() const;
  RadicalSum scaled(const Rational& c) const;
  friend bool operator==(const RadicalSum& a, const RadicalSum& b) { return a.terms == b.terms; }

  /// Multiplicative inverse inside the field spanned by the monomial group
  /// of this element; nullopt if the group is too large to handle.
  std::optional<RadicalSum> inverse() const;
  /// n-th root when this is a single positive term (or negative with odd n).
  std::optional<RadicalSum> nth_root(unsigned n) const;

  std::optional<Interval> enclosure(unsigned bits) const;
  std::string to_string() const;
};

/// Opaque expression tree for values that leave the normal form (roots of
/// non-monomial sums and anything built from them).
struct Expr {
  enum class Op { Leaf, Add, Sub, Mul, Div, Neg, Root };
  Op op = Op::Leaf;
  RadicalSum leaf;
  std::shared_ptr<const Expr> a;
  std::shared_ptr<const Expr> b;
  unsigned degree = 0;  // root degree for Op::Root

  std::optional<Interval> enclosure(unsigned bits) const;
  std::string to_string() const;
  friend bool operator==(const Expr& x, const Expr& y);
};

using ExprPtr = std::shared_ptr<const Expr>;

struct ConstructedRep {
  ExprPtr expr;
  std::optional<Interval> cached;  // current enclosure
  unsigned bits = 0;               // precision of `cached`
};

ExprPtr make_leaf(RadicalSum s);

// Interval helpers shared with the tree evaluator.
Rational round_down(const Rational& q, unsigned bits);
Rational round_up(const Rational& q, unsigned bits);
Integer floor_of(const Rational& q);
Integer ceil_of(const Rational& q);

}  // namespace gplab::detail
