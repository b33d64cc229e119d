#pragma once

// Degree-bounded vanishing ideals, stabiliser checks and semialgebraic
// sets over Q.

#include <cstddef>
#include <vector>

#include <nlohmann/json.hpp>

#include "gplab/linalg/matrix.hpp"
#include "gplab/numbers.hpp"
#include "gplab/polynomial.hpp"

namespace gplab {

using PointQ = std::vector<ExactScalar>;

/// Degree <= D slice of the vanishing ideal of a finite point set, as a
/// reduced echelon basis: the leading (grlex-greatest) monomials are
/// distinct and carry coefficient 1, and no basis element uses another's
/// leading monomial.
struct IdealBasis {
  std::size_t dim = 0;
  unsigned degree = 0;
  std::vector<Polynomial> basis;
  std::vector<PointQ> points;

  bool contains(const Polynomial& f) const;
  /// f minus its projection along the echelon basis.
  Polynomial reduce(const Polynomial& f) const;
  nlohmann::json to_json() const;
  /// Restores dim, degree and basis; generating points are not serialised.
  static IdealBasis from_json(const nlohmann::json& j);
  friend bool operator==(const IdealBasis& a, const IdealBasis& b) { return a.basis == b.basis; }
};

/// Points may be irrational as long as they stay in the radical normal form;
/// every evaluation is split into rational coordinates.
IdealBasis vanishing_ideal(const std::vector<PointQ>& points, unsigned degree, std::size_t dim = 0);

struct TailReport {
  std::vector<std::size_t> starts;
  std::vector<IdealBasis> bases;
  /// Every later basis spans a superspace of the earlier one.
  bool increasing = true;
  /// All bases from `stable_from` on coincide (index into starts).
  std::size_t stable_from = 0;
  bool stabilized() const { return stable_from + 1 < bases.size() || bases.size() == 1; }
  nlohmann::json to_json() const;
};

/// Vanishing ideal of each tail {x_n : n >= N0}; throws EmptyTail.
TailReport tail_closure(const std::vector<PointQ>& sequence, const std::vector<std::size_t>& tail_starts, unsigned degree);

/// V + v = V within the degree slice.
bool translation_check(const IdealBasis& b, const std::vector<Rational>& v);

/// Polynomial map x -> (T_1(x), ..., T_d(x)); affine maps have degree 1.
using PolyMap = std::vector<Polynomial>;
PolyMap affine_map(const Matrix<Rational>& m, const std::vector<Rational>& c);

/// T(V) within U: every f in U's basis composed with T vanishes on V's
/// generating points (and lies in V's slice when the degree fits).
/// Throws DegreeOverflow when deg(f o T) exceeds `degree_cap`.
bool affine_image_check(const IdealBasis& v, const IdealBasis& u, const PolyMap& t, unsigned degree_cap = 12);

struct BasicPiece {
  std::vector<Polynomial> equalities;    // f = 0
  std::vector<Polynomial> inequalities;  // g > 0
};

struct SemialgebraicSet {
  std::size_t dim = 0;
  std::vector<BasicPiece> pieces;
  nlohmann::json to_json() const;
  static SemialgebraicSet from_json(const nlohmann::json& j);
};

bool membership(const SemialgebraicSet& s, const PointQ& x, unsigned max_bits = kDefaultMaxBits,
                PrecisionStats* stats = nullptr);

/// Sum of degrees over the given representation (an upper bound for the
/// minimum over representations).
unsigned complexity(const SemialgebraicSet& s);

/// {T x} in S' for unimodular integer T; DomainError if det T != +-1.
bool change_basis_membership(const SemialgebraicSet& s_prime, const Matrix<Integer>& t, const PointQ& x,
                             unsigned max_bits = kDefaultMaxBits);

/// Families g(x, s) > 0 with the parameter as the last variable, either
/// s = n or s = 1/n.
enum class FamilyParameter { N, InverseN };

struct InequalityFamily {
  std::size_t dim = 0;
  FamilyParameter parameter = FamilyParameter::InverseN;
  std::vector<Polynomial> inequalities;  // in dim + 1 variables

  /// The member S_n as a one-piece semialgebraic set.
  SemialgebraicSet at(long n) const;
};

struct Sandwich {
  std::vector<Polynomial> limits;  // normalised limit directions
  SemialgebraicSet r;              // {limit_j > 0 for all j}
  SemialgebraicSet u;              // {prod_j limit_j = 0}
};

/// Limit directions by the dominant power of the parameter. Throws
/// NonConvergentCoefficients for a vanishing family.
Sandwich limit_sandwich(const InequalityFamily& family);

struct SandwichReport {
  std::size_t samples = 0;
  std::size_t eventual = 0;           // points in S_n for every n of the window
  std::size_t r_not_eventual = 0;     // violations of R within eventual
  std::size_t eventual_outside = 0;   // violations of eventual within R u U
  bool holds() const { return r_not_eventual == 0 && eventual_outside == 0; }
  nlohmann::json to_json() const;
};

/// Checks R within (eventual intersection) within R u U on the given points,
/// with "eventually" meaning every n in [n_lo, n_hi].
SandwichReport check_sandwich(const InequalityFamily& family, const Sandwich& s, const std::vector<PointQ>& grid,
                              long n_lo, long n_hi);

}  // namespace gplab
