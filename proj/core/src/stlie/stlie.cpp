#include "gplab/stlie.hpp"

#include <algorithm>

namespace gplab {

GradedLayout::GradedLayout(std::vector<unsigned> degrees, std::vector<std::vector<bool>> precedes,
                           std::vector<std::string> labels)
    : degrees_(std::move(degrees)), precedes_(std::move(precedes)), labels_(std::move(labels)) {
  const std::size_t n = degrees_.size();
  if (precedes_.size() != n) throw DomainError("layout relation has the wrong size");
  for (std::size_t i = 0; i < n; ++i) {
    if (precedes_[i].size() != n) throw DomainError("layout relation has the wrong size");
    for (std::size_t j = 0; j < n; ++j)
      if (precedes_[i][j] && j >= i) throw DomainError("layout positions must extend the order");
  }
  if (labels_.empty())
    for (std::size_t i = 0; i < n; ++i) labels_.push_back(std::to_string(i));
  longest_.assign(n, std::vector<std::size_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j-- > 0;) {
      if (!precedes_[i][j]) continue;
      std::size_t best = 2;
      for (std::size_t m = j + 1; m < i; ++m)
        if (precedes_[i][m] && precedes_[m][j]) best = std::max(best, longest_[m][j] + 1);
      longest_[i][j] = best;
    }
}

GradedLayout GradedLayout::of(const IndexSet& d) {
  const std::size_t n = d.size();
  std::vector<unsigned> deg(n);
  std::vector<std::vector<bool>> rel(n, std::vector<bool>(n, false));
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) {
    deg[i] = d.degree(i);
    labels.push_back(d.at(i).to_string());
    for (std::size_t j = 0; j < n; ++j) rel[i][j] = i != j && d.below(j, i);
  }
  return GradedLayout(std::move(deg), std::move(rel), std::move(labels));
}

GradedLayout GradedLayout::augmented(const IndexSet& d) {
  const std::size_t n = d.size() + 1;
  std::vector<unsigned> deg(n, 0);
  std::vector<std::vector<bool>> rel(n, std::vector<bool>(n, false));
  std::vector<std::string> labels{"0"};
  for (std::size_t i = 1; i < n; ++i) {
    deg[i] = d.degree(i - 1);
    labels.push_back(d.at(i - 1).to_string());
    rel[i][0] = true;
    for (std::size_t j = 1; j < n; ++j) rel[i][j] = i != j && d.below(j - 1, i - 1);
  }
  return GradedLayout(std::move(deg), std::move(rel), std::move(labels));
}

unsigned GradedLayout::max_degree() const {
  return degrees_.empty() ? 0 : *std::max_element(degrees_.begin(), degrees_.end());
}

namespace stlie_detail {

std::vector<Rational> chain_coefficients(const std::vector<unsigned>& degrees) {
  std::vector<Rational> out;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    Rational p(1);
    for (std::size_t j = 0; j < degrees.size(); ++j) {
      if (i == j) continue;
      if (degrees[i] == degrees[j]) throw RepeatedDegreeOnChain("degree " + std::to_string(degrees[i]) + " repeats along a chain");
      p *= Rational(static_cast<long>(degrees[i]) - static_cast<long>(degrees[j]));
    }
    out.push_back(1 / p);
  }
  return out;
}

}  // namespace stlie_detail

namespace {

bool is_one(const ExactScalar& v) { return compare(v, ExactScalar(1)) == Ordering::EQ; }

}  // namespace

ExactScalar standard_scale(const GradedLayout& layout, const Matrix<ExactScalar>& a) {
  if (!is_lower_triangular(layout, a)) throw InconsistentDiagonal("matrix is not lower triangular for the layout");
  std::size_t ref = layout.size();
  for (std::size_t i = 0; i < layout.size(); ++i)
    if (layout.degree(i) > 0 && (ref == layout.size() || layout.degree(i) < layout.degree(ref))) ref = i;
  if (ref == layout.size()) throw InconsistentDiagonal("layout has no coordinate of positive degree");
  if (sign(a(ref, ref)) <= 0) throw InconsistentDiagonal("diagonal entries must be positive");
  ExactScalar e = ExactScalar::root(a(ref, ref), layout.degree(ref));
  for (std::size_t i = 0; i < layout.size(); ++i)
    if (compare(e.pow(layout.degree(i)), a(i, i)) != Ordering::EQ)
      throw InconsistentDiagonal("diagonal entry at " + layout.label(i) + " is not scale^" + std::to_string(layout.degree(i)));
  return e;
}

GradedLog log_graded(const GradedLayout& layout, const Matrix<ExactScalar>& a) {
  ExactScalar e = standard_scale(layout, a);
  if (is_one(e)) throw ScaleIsOne("log_graded needs a non-unipotent matrix; use log_unipotent");
  const std::size_t n = layout.size();
  std::vector<ExactScalar> epow{ExactScalar(1)};
  for (unsigned d = 1; d <= layout.max_degree(); ++d) epow.push_back(epow.back() * e);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (layout.precedes(j, i)) pairs.emplace_back(i, j);
  std::stable_sort(pairs.begin(), pairs.end(), [&](const auto& p, const auto& q) {
    return layout.longest_path(p.first, p.second) < layout.longest_path(q.first, q.second);
  });

  Matrix<ExactScalar> z(n, n);
  for (auto [k, l] : pairs) {
    // contributions of chains of length >= 3, all of whose links are already known
    ExactScalar rest(0);
    stlie_detail::for_each_chain(layout, z, k, [&](std::size_t end, const ExactScalar& prod, const std::vector<unsigned>& degs) {
      if (end != l || degs.size() < 3) return;
      std::vector<Rational> b = stlie_detail::chain_coefficients(degs);
      ExactScalar s(0);
      for (std::size_t i = 0; i < degs.size(); ++i) s += ExactScalar(b[i]) * epow[degs[i]];
      rest += prod * s;
    });
    const long dk = layout.degree(k), dl = layout.degree(l);
    ExactScalar lead = (epow[dk] - epow[dl]) / ExactScalar(dk - dl);
    z(k, l) = (a(k, l) - rest) / lead;
  }
  return {e, z};
}

Matrix<Polynomial> unipotent_power(const GradedLayout& layout, const Matrix<ExactScalar>& a) {
  Matrix<ExactScalar> l = log_unipotent(layout, a);
  const Polynomial t = Polynomial::variable(0);
  Matrix<Polynomial> lt = l.map([&](const ExactScalar& v) {
    if (!v.is_rational()) throw DomainError("unipotent_power needs rational entries");
    return Polynomial(v.rational()) * t;
  });
  return exp_nilpotent(layout, lt);
}

Matrix<ExactScalar> power(const GradedLayout& layout, const Matrix<ExactScalar>& a, const Rational& t) {
  if (is_unipotent(layout, a)) {
    Matrix<ExactScalar> l = log_unipotent(layout, a);
    return exp_nilpotent(layout, ExactScalar(t) * l);
  }
  GradedLog lg = log_graded(layout, a);
  if (!t.get_num().fits_slong_p() || !t.get_den().fits_uint_p()) throw DomainError("exponent too large");
  const long p = t.get_num().get_si();
  const unsigned long q = t.get_den().get_ui();
  ExactScalar et = lg.scale.pow(p);
  if (q != 1) et = ExactScalar::root(et, static_cast<unsigned>(q));
  return exp_graded(layout, et, lg.z);
}

Matrix<ExactScalar> diagonalize(const GradedLayout& layout, const Matrix<ExactScalar>& a) {
  ExactScalar e = standard_scale(layout, a);
  if (is_one(e)) throw ScaleIsOne("diagonalize needs a non-unipotent matrix");
  const std::size_t n = layout.size();
  Matrix<ExactScalar> p(n, n);
  for (std::size_t mu = 0; mu < n; ++mu) {
    // eigenvector e_mu + sum over rho above mu
    p(mu, mu) = ExactScalar(1);
    for (std::size_t rho = mu + 1; rho < n; ++rho) {
      if (!layout.precedes(mu, rho)) continue;
      ExactScalar acc(0);
      for (std::size_t sigma = mu; sigma < rho; ++sigma)
        if (!p(sigma, mu).is_zero() && !a(rho, sigma).is_zero()) acc += a(rho, sigma) * p(sigma, mu);
      p(rho, mu) = -acc / (a(rho, rho) - a(mu, mu));
    }
  }
  return p;
}

Matrix<ExactScalar> inverse_lower(const Matrix<ExactScalar>& a) {
  const std::size_t n = a.rows();
  Matrix<ExactScalar> inv(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    if (a(c, c).is_zero()) throw DomainError("singular triangular matrix");
    inv(c, c) = ExactScalar(1) / a(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      ExactScalar acc(0);
      for (std::size_t k = c; k < r; ++k)
        if (!a(r, k).is_zero() && !inv(k, c).is_zero()) acc += a(r, k) * inv(k, c);
      inv(r, c) = -acc / a(r, r);
    }
  }
  return inv;
}

}  // namespace gplab
