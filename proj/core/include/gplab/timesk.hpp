#pragma once

// Generalised multiplication-by-k maps on R^D and [0,1)^D: the integer
// matrices A_k(x), the lifts S_k(x) = A_k(x) x, the reductions
// T_k(x) = {S_k(x)} and their affine (augmented) forms.

#include <vector>

#include <nlohmann/json.hpp>

#include "gplab/brackets.hpp"
#include "gplab/genpoly.hpp"
#include "gplab/linalg/matrix.hpp"
#include "gplab/numbers.hpp"

namespace gplab {

using IntMatrix = Matrix<Integer>;
using Point = std::vector<ExactScalar>;

/// -floor(sum_tau A_{lambda,tau} {x_tau}) using the already built row of lambda.
Integer correction_term(const IndexSet& d, const IntMatrix& partial, std::size_t lambda, const Point& x,
                        unsigned max_bits = kDefaultMaxBits, PrecisionStats* stats = nullptr);

/// A_k(x), row by row in order of increasing degree. Every bracketed factor
/// of a member must itself be a member (NotDownwardClosed otherwise).
IntMatrix build_A(const IndexSet& d, const Integer& k, const Point& x, unsigned max_bits = kDefaultMaxBits,
                  PrecisionStats* stats = nullptr);

/// Delta_k = diag(k^{d_mu}).
IntMatrix delta(const IndexSet& d, const Integer& k);

Point S_k(const IndexSet& d, const Integer& k, const Point& x, unsigned max_bits = kDefaultMaxBits,
          PrecisionStats* stats = nullptr);

struct AffineStep {
  IntMatrix A;              // A_k(x)
  std::vector<Integer> b;   // b_k(x) = floor(S_k(x))
  IntMatrix A_bar;          // [[1, 0], [-b, A]]
  Point y;                  // T_k(x) = {S_k(x)}
};

/// Requires every coordinate of x in [0,1) (DomainError otherwise).
AffineStep T_k(const IndexSet& d, const Integer& k, const Point& x, unsigned max_bits = kDefaultMaxBits,
               PrecisionStats* stats = nullptr);

/// Rebuilds A_k(x), b_k(x) and the augmented matrix from x and y = T_k(x)
/// with polynomial formulas only. Throws InconsistentPair if a quantity that
/// must be an integer is not.
AffineStep A_from_pair(const IndexSet& d, const Integer& k, const Point& x, const Point& y);

/// x^0, ..., x^N with x^{n+1} = T_k(x^n). IndeterminateFloor is annotated
/// with the failing step.
std::vector<Point> iterate_T(const IndexSet& d, const Point& x0, const Integer& k, std::size_t steps,
                             unsigned max_bits = kDefaultMaxBits, PrecisionStats* stats = nullptr);

/// A_k(x) as generalised polynomials in (k, x_{mu_1}, ..., x_{mu_n}): variable
/// 0 is k and variable 1 + i is the i-th coordinate.
Matrix<GenPoly> symbolic_A(const IndexSet& d);

/// Augmented matrix [[1,0],[-b, A]].
IntMatrix augment(const IntMatrix& a, const std::vector<Integer>& b);

nlohmann::json matrix_to_json(const IndexSet& d, const Integer& k, const IntMatrix& a, const Point& x,
                              const std::vector<Integer>& b);

}  // namespace gplab
