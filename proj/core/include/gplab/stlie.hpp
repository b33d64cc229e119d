#pragma once

// Graded lower-triangular matrix groups ST(D), ST'(D) and their Lie
// algebras: exact exp/log, graded exponential in the symbol E = e^t,
// matrix powers and diagonalisation.
//
// Matrices are plain Matrix<T> whose rows and columns follow a GradedLayout.
// T is ExactScalar, Rational or Polynomial; E stays symbolic when T is
// Polynomial.

#include <string>
#include <vector>

#include "gplab/brackets.hpp"
#include "gplab/error.hpp"
#include "gplab/linalg/matrix.hpp"
#include "gplab/numbers.hpp"
#include "gplab/polynomial.hpp"

namespace gplab {

/// Degrees and the strict partial order on coordinate positions. Positions
/// must extend the order (j < i whenever j precedes i).
class GradedLayout {
 public:
  GradedLayout(std::vector<unsigned> degrees, std::vector<std::vector<bool>> precedes,
               std::vector<std::string> labels = {});

  static GradedLayout of(const IndexSet& d);
  /// D with an extra coordinate 0 (degree 0) in front, below every member.
  static GradedLayout augmented(const IndexSet& d);

  std::size_t size() const { return degrees_.size(); }
  unsigned degree(std::size_t i) const { return degrees_[i]; }
  unsigned max_degree() const;
  /// position j strictly precedes position i
  bool precedes(std::size_t j, std::size_t i) const { return precedes_[i][j]; }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  /// Length of the longest chain i = k_1 > ... > k_r = j (0 if j does not precede i).
  std::size_t longest_path(std::size_t i, std::size_t j) const { return longest_[i][j]; }

 private:
  std::vector<unsigned> degrees_;
  std::vector<std::vector<bool>> precedes_;
  std::vector<std::string> labels_;
  std::vector<std::vector<std::size_t>> longest_;
};

namespace stlie_detail {

template <typename T>
bool is_zero(const T& v) {
  return v == ring_zero<T>();
}

template <typename T>
T ring_pow(const T& base, unsigned e) {
  T r = ring_one<T>();
  for (unsigned i = 0; i < e; ++i) r = r * base;
  return r;
}

template <typename T>
T from_rational(const Rational& q) {
  if constexpr (std::is_same_v<T, Rational>) return q;
  else return T(q);
}

template <typename T>
Matrix<T> scaled(const Matrix<T>& m, const Rational& q) {
  return from_rational<T>(q) * m;
}

/// b_i = 1 / prod_{j != i} (d_i - d_j).
std::vector<Rational> chain_coefficients(const std::vector<unsigned>& degrees);

// Visits every chain start = k_1 > ... > k_r (r >= 2) through nonzero
// entries of z, calling f(end, product of z entries, degrees along chain).
template <typename T, typename F>
void for_each_chain(const GradedLayout& layout, const Matrix<T>& z, std::size_t start, F&& f) {
  std::vector<unsigned> degs{layout.degree(start)};
  auto walk = [&](auto&& self, std::size_t cur, const T& prod) -> void {
    for (std::size_t next = 0; next < cur; ++next) {
      if (is_zero(z(cur, next))) continue;
      T p = prod * z(cur, next);
      degs.push_back(layout.degree(next));
      f(next, p, degs);
      self(self, next, p);
      degs.pop_back();
    }
  };
  walk(walk, start, ring_one<T>());
}

}  // namespace stlie_detail

template <typename T>
bool is_lower_triangular(const GradedLayout& layout, const Matrix<T>& m) {
  for (std::size_t i = 0; i < layout.size(); ++i)
    for (std::size_t j = 0; j < layout.size(); ++j)
      if (i != j && !layout.precedes(j, i) && !stlie_detail::is_zero(m(i, j))) return false;
  return true;
}

template <typename T>
bool is_strictly_lower(const GradedLayout& layout, const Matrix<T>& m) {
  if (!is_lower_triangular(layout, m)) return false;
  for (std::size_t i = 0; i < layout.size(); ++i)
    if (!stlie_detail::is_zero(m(i, i))) return false;
  return true;
}

template <typename T>
bool is_unipotent(const GradedLayout& layout, const Matrix<T>& m) {
  if (!is_lower_triangular(layout, m)) return false;
  for (std::size_t i = 0; i < layout.size(); ++i)
    if (!(m(i, i) == ring_one<T>())) return false;
  return true;
}

/// exp(Z) for strictly lower Z; a finite sum.
template <typename T>
Matrix<T> exp_nilpotent(const GradedLayout& layout, const Matrix<T>& z) {
  if (z.rows() != layout.size() || !is_strictly_lower(layout, z)) throw NotStrictlyLower("exp_nilpotent needs a strictly lower matrix");
  Matrix<T> acc = Matrix<T>::identity(layout.size());
  Matrix<T> term = acc;
  for (std::size_t n = 1; n < layout.size(); ++n) {
    term = stlie_detail::scaled(term * z, Rational(1, static_cast<long>(n)));
    acc = acc + term;
  }
  return acc;
}

/// log(A) for unipotent A; a finite sum.
template <typename T>
Matrix<T> log_unipotent(const GradedLayout& layout, const Matrix<T>& a) {
  if (a.rows() != layout.size() || !is_unipotent(layout, a)) throw NotUnipotent("log_unipotent needs a unipotent matrix");
  const Matrix<T> id = Matrix<T>::identity(layout.size());
  const Matrix<T> n = a - id;
  Matrix<T> acc(layout.size(), layout.size());
  Matrix<T> power = id;
  for (std::size_t k = 1; k < layout.size(); ++k) {
    power = power * n;
    acc = acc + stlie_detail::scaled(power, Rational(k % 2 ? 1 : -1, static_cast<long>(k)));
  }
  return acc;
}

/// exp(t(Lambda + Z)) with E = e^t: diagonal E^{d_mu} plus, for each chain
/// through nonzero entries of Z, Z(chain) * sum_i b_i E^{d_i}.
template <typename T>
Matrix<T> exp_graded(const GradedLayout& layout, const T& e, const Matrix<T>& z) {
  if (z.rows() != layout.size() || !is_strictly_lower(layout, z)) throw NotStrictlyLower("exp_graded needs a strictly lower matrix");
  std::vector<T> epow{ring_one<T>()};
  for (unsigned d = 1; d <= layout.max_degree(); ++d) epow.push_back(epow.back() * e);
  Matrix<T> out(layout.size(), layout.size());
  for (std::size_t i = 0; i < layout.size(); ++i) {
    out(i, i) = epow[layout.degree(i)];
    stlie_detail::for_each_chain(layout, z, i, [&](std::size_t end, const T& prod, const std::vector<unsigned>& degs) {
      std::vector<Rational> b = stlie_detail::chain_coefficients(degs);
      T s = ring_zero<T>();
      for (std::size_t k = 0; k < degs.size(); ++k) s = s + stlie_detail::from_rational<T>(b[k]) * epow[degs[k]];
      out(i, end) = out(i, end) + prod * s;
    });
  }
  return out;
}

/// Common diagonal scale t with A_{mu,mu} = t^{d_mu}; throws InconsistentDiagonal.
ExactScalar standard_scale(const GradedLayout& layout, const Matrix<ExactScalar>& a);

struct GradedLog {
  ExactScalar scale;        // E = e^t
  Matrix<ExactScalar> z;    // strictly lower
};

/// Inverse of exp_graded on ST(D) minus ST'(D). Throws ScaleIsOne for unipotent A.
GradedLog log_graded(const GradedLayout& layout, const Matrix<ExactScalar>& a);

/// A^t = exp(t log A) for standard A; rational t with representable roots.
Matrix<ExactScalar> power(const GradedLayout& layout, const Matrix<ExactScalar>& a, const Rational& t);

/// Unipotent A: entries of A^t as polynomials in t (variable x_1).
Matrix<Polynomial> unipotent_power(const GradedLayout& layout, const Matrix<ExactScalar>& a);

/// Unipotent P with P^{-1} A P = diag(A_{mu,mu}). Throws ScaleIsOne.
Matrix<ExactScalar> diagonalize(const GradedLayout& layout, const Matrix<ExactScalar>& a);

/// Inverse of an invertible lower-triangular matrix by forward substitution.
Matrix<ExactScalar> inverse_lower(const Matrix<ExactScalar>& a);

}  // namespace gplab
