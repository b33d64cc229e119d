#pragma once

// Sparse multivariate polynomials over Q. Monomials are exponent vectors
// without trailing zeros, ordered by graded lexicographic order.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gplab/numbers.hpp"

namespace gplab {

using Monomial = std::vector<unsigned>;

unsigned total_degree(const Monomial& m);
/// Graded lexicographic: total degree first, then lexicographic with x_1 > x_2 > ...
bool grlex_less(const Monomial& a, const Monomial& b);
Monomial monomial_product(const Monomial& a, const Monomial& b);

struct GrlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return grlex_less(a, b); }
};

/// All monomials in `nvars` variables of total degree <= max_degree, grlex ascending.
std::vector<Monomial> monomials_up_to(std::size_t nvars, unsigned max_degree);

class Polynomial {
 public:
  using Terms = std::map<Monomial, Rational, GrlexLess>;

  Polynomial() = default;
  Polynomial(const Rational& c);  // NOLINT(google-explicit-constructor)
  Polynomial(long c) : Polynomial(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  Polynomial(int c) : Polynomial(Rational(c)) {}   // NOLINT(google-explicit-constructor)

  /// x_{i+1} (zero-based index).
  static Polynomial variable(std::size_t i);
  static Polynomial term(Monomial m, const Rational& c);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;
  Rational coefficient(const Monomial& m) const;
  /// -1 for the zero polynomial.
  int total_degree() const;
  /// Largest variable index used, plus one.
  std::size_t num_vars() const;
  /// Greatest monomial in grlex order; requires nonzero.
  const Monomial& leading_monomial() const;
  const Rational& leading_coefficient() const;
  /// Degree in variable i.
  unsigned degree_in(std::size_t i) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a);
  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  Polynomial pow(unsigned e) const;
  Polynomial scaled(const Rational& c) const;
  /// Leading coefficient scaled to 1; zero stays zero.
  Polynomial monic() const;

  ExactScalar evaluate(const std::vector<ExactScalar>& point) const;
  Rational evaluate(const std::vector<Rational>& point) const;
  /// Substitute x_i := images[i]; missing images leave x_i in place.
  Polynomial substitute(const std::vector<Polynomial>& images) const;

  /// Human-readable form using `names` (defaults to x_1, x_2, ...).
  std::string to_string(const std::vector<std::string>& names = {}) const;

  /// {"e1,e2,...": "p/q"}, zero exponents included up to num_vars.
  nlohmann::json to_json() const;
  static Polynomial from_json(const nlohmann::json& j);

 private:
  void add_term(const Monomial& m, const Rational& c);
  Terms terms_;
};

/// Maps an identifier to a zero-based variable index, or nullopt if unknown.
using VariableResolver = std::function<std::optional<std::size_t>(std::string_view)>;

/// Accepts x_1, x_2, ... (one-based in text).
std::optional<std::size_t> default_variable_resolver(std::string_view name);

/// Grammar: sums/products/differences of numbers, variables, parentheses,
/// `^` with nonnegative integer exponents, and division by constants.
Polynomial parse_polynomial(std::string_view text, const VariableResolver& resolver = default_variable_resolver);

}  // namespace gplab
