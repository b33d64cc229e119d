#pragma once

// Exact scalar tower: arbitrary-size rationals plus constructed reals
// (field operations and integer roots over the rationals) with rigorous
// enclosure refinement. Floor and fractional part are decided exactly or
// reported as indeterminate; there is no floating-point fallback.

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace gplab {

using Integer = mpz_class;
using Rational = mpq_class;

inline constexpr unsigned kDefaultMaxBits = 4096;
inline constexpr unsigned kInitialBits = 64;

/// Closed interval [lo, hi] with rational (in practice dyadic) endpoints.
struct Interval {
  Rational lo;
  Rational hi;

  bool contains(const Rational& v) const { return lo <= v && v <= hi; }
  bool subset_of(const Interval& other) const { return other.lo <= lo && hi <= other.hi; }
  Rational width() const { return Rational(hi - lo); }
};

enum class Ordering { LT, EQ, GT };

const char* to_string(Ordering o);

/// Running record of how much precision exact decisions needed.
struct PrecisionStats {
  unsigned max_bits_used = 0;
  std::size_t refinements = 0;
  std::size_t indeterminate_events = 0;

  void note(unsigned bits) {
    if (bits > max_bits_used) max_bits_used = bits;
  }
  void merge(const PrecisionStats& o) {
    note(o.max_bits_used);
    refinements += o.refinements;
    indeterminate_events += o.indeterminate_events;
  }
};

namespace detail {
struct ConstructedRep;
}

class ExactScalar {
 public:
  enum class Kind { Rational, Constructed };

  ExactScalar() : rep_(Rational(0)) {}
  ExactScalar(long v) : rep_(Rational(v)) {}  // NOLINT(google-explicit-constructor)
  ExactScalar(int v) : rep_(Rational(v)) {}   // NOLINT(google-explicit-constructor)
  ExactScalar(const Integer& v) : rep_(Rational(v)) {}  // NOLINT(google-explicit-constructor)
  ExactScalar(const Rational& v);                      // NOLINT(google-explicit-constructor)

  static ExactScalar fraction(long num, long den);
  /// Principal n-th root; even roots require a nonnegative radicand.
  static ExactScalar root(const ExactScalar& x, unsigned n);
  static ExactScalar sqrt(const ExactScalar& x) { return root(x, 2); }

  Kind kind() const { return std::holds_alternative<Rational>(rep_) ? Kind::Rational : Kind::Constructed; }
  bool is_rational() const { return kind() == Kind::Rational; }
  /// Throws DomainError for constructed values.
  const Rational& rational() const;
  bool is_integer() const;
  /// Symbolic zero. Constructed values are never zero (they would have
  /// normalised to the rational 0) unless they leave the radical normal form.
  bool is_zero() const { return is_rational() && sgn(std::get<Rational>(rep_)) == 0; }
  /// True when the value lives in the canonical radical normal form (every
  /// rational does). Equality of normal forms is equality of values.
  bool has_normal_form() const;

  /// Current enclosure and its working precision. Rationals have a
  /// degenerate enclosure and report precision 0.
  Interval enclosure() const;
  unsigned precision() const;
  /// New value carrying an enclosure at `bits`, intersected with the
  /// current one so refinement is monotone.
  ExactScalar refined(unsigned bits) const;
  /// Fresh enclosure at `bits`; nullopt when a division could not be
  /// separated from zero at that precision.
  std::optional<Interval> enclosure_at(unsigned bits) const;

  /// Exact textual form: `p/q` for rationals, a field expression with
  /// `sqrt(..)` / `root(..,n)` otherwise. Re-parses to an equal value.
  std::string to_string() const;
  /// Rounded decimal with `digits` fractional digits (inexact by nature).
  std::string to_decimal(unsigned digits) const;

  friend ExactScalar operator+(const ExactScalar& a, const ExactScalar& b);
  friend ExactScalar operator-(const ExactScalar& a, const ExactScalar& b);
  friend ExactScalar operator*(const ExactScalar& a, const ExactScalar& b);
  friend ExactScalar operator/(const ExactScalar& a, const ExactScalar& b);
  friend ExactScalar operator-(const ExactScalar& a);
  ExactScalar& operator+=(const ExactScalar& o) { return *this = *this + o; }
  ExactScalar& operator-=(const ExactScalar& o) { return *this = *this - o; }
  ExactScalar& operator*=(const ExactScalar& o) { return *this = *this * o; }
  ExactScalar& operator/=(const ExactScalar& o) { return *this = *this / o; }

  ExactScalar pow(long exponent) const;

  /// Structural equality; coincides with value equality on normal forms.
  friend bool operator==(const ExactScalar& a, const ExactScalar& b);
  friend bool operator!=(const ExactScalar& a, const ExactScalar& b) { return !(a == b); }

  std::size_t hash() const;

  const std::shared_ptr<const detail::ConstructedRep>& constructed_rep() const {
    return std::get<std::shared_ptr<const detail::ConstructedRep>>(rep_);
  }
  explicit ExactScalar(std::shared_ptr<const detail::ConstructedRep> rep) : rep_(std::move(rep)) {}

 private:
  std::variant<Rational, std::shared_ptr<const detail::ConstructedRep>> rep_;
};

/// floor(s). Rationals never enter the precision loop.
Integer floor_exact(const ExactScalar& s, unsigned max_bits = kDefaultMaxBits, PrecisionStats* stats = nullptr);
/// s - floor(s), in [0,1). Rational in, rational out.
ExactScalar frac_exact(const ExactScalar& s, unsigned max_bits = kDefaultMaxBits, PrecisionStats* stats = nullptr);
Ordering compare(const ExactScalar& a, const ExactScalar& b, unsigned max_bits = kDefaultMaxBits,
                 PrecisionStats* stats = nullptr);
/// -1, 0, +1.
int sign(const ExactScalar& s, unsigned max_bits = kDefaultMaxBits, PrecisionStats* stats = nullptr);

/// Coordinates over Q of a normal-form value: pairs (radical monomial text,
/// coefficient), with "1" for the rational part. nullopt outside the normal form.
std::optional<std::vector<std::pair<std::string, Rational>>> radical_components(const ExactScalar& s);

/// Literal grammar: integers, decimals, `p/q`, `sqrt(x)`, `root(x, n)`,
/// `+ - * / ^int` and parentheses.
ExactScalar parse_scalar(std::string_view text);

std::string to_string(const Rational& q);
Rational parse_rational(std::string_view text);
Integer ipow(const Integer& base, unsigned long exponent);

}  // namespace gplab

template <>
struct std::hash<gplab::ExactScalar> {
  std::size_t operator()(const gplab::ExactScalar& s) const { return s.hash(); }
};
