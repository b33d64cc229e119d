#include "gplab/timesk.hpp"

#include <algorithm>
#include <numeric>

#include "gplab/error.hpp"

namespace gplab {

namespace {

void require_point(const IndexSet& d, const Point& x) {
  if (x.size() != d.size())
    throw DomainError("point has " + std::to_string(x.size()) + " coordinates, index set has " +
                      std::to_string(d.size()));
}

// Rows in order of increasing degree; kappa and lambda of a split always
// have strictly smaller degree than mu.
std::vector<std::size_t> build_order(const IndexSet& d) {
  std::vector<std::size_t> idx(d.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return d.degree(a) < d.degree(b); });
  return idx;
}

struct Split {
  std::size_t kappa;
  std::size_t lambda;
};

Split split_of(const IndexSet& d, std::size_t mu) {
  auto [kappa, lambda] = d.at(mu).split();
  auto pk = d.position(kappa);
  auto pl = d.position(lambda);
  if (!pk) throw NotDownwardClosed(kappa.to_string() + " missing for " + d.at(mu).to_string());
  if (!pl) throw NotDownwardClosed("factor " + lambda.to_string() + " of " + d.at(mu).to_string() + " is not a member");
  return {*pk, *pl};
}

// Generic row recursion shared by the numeric and symbolic builders.
// `corr(lambda)` returns the correction term for the built row lambda.
template <typename T, typename Leaf, typename Corr>
Matrix<T> generic_build(const IndexSet& d, Leaf leaf_entry, Corr corr) {
  const std::size_t n = d.size();
  Matrix<T> a(n, n);
  for (std::size_t mu : build_order(d)) {
    if (d.at(mu).is_leaf()) {
      a(mu, mu) = leaf_entry(mu);
      continue;
    }
    Split s = split_of(d, mu);
    for (std::size_t sigma = 0; sigma < n; ++sigma) {
      if (a(s.kappa, sigma) == ring_zero<T>()) continue;
      for (std::size_t tau = 0; tau < n; ++tau) {
        if (a(s.lambda, tau) == ring_zero<T>()) continue;
        BracketIndex nu = d.at(sigma).with_factor(d.at(tau));
        auto pn = d.position(nu);
        if (!pn) throw NotDownwardClosed(nu.to_string() + " is derivable from " + d.at(mu).to_string() + " but missing");
        a(mu, *pn) = a(mu, *pn) + a(s.kappa, sigma) * a(s.lambda, tau);
      }
    }
    T c = corr(a, s.lambda);
    if (!(c == ring_zero<T>()))
      for (std::size_t nu = 0; nu < n; ++nu)
        if (!(a(s.kappa, nu) == ring_zero<T>())) a(mu, nu) = a(mu, nu) + a(s.kappa, nu) * c;
  }
  return a;
}

bool in_unit_interval(const ExactScalar& v) {
  return compare(v, ExactScalar(0)) != Ordering::LT && compare(v, ExactScalar(1)) == Ordering::LT;
}

Integer as_integer(const ExactScalar& v, const char* what) {
  if (!v.is_integer()) throw InconsistentPair(std::string(what) + " is not an integer: " + v.to_string());
  return v.rational().get_num();
}

}  // namespace

Integer correction_term(const IndexSet& d, const IntMatrix& partial, std::size_t lambda, const Point& x,
                        unsigned max_bits, PrecisionStats* stats) {
  require_point(d, x);
  ExactScalar acc(0);
  for (std::size_t tau = 0; tau < d.size(); ++tau)
    if (partial(lambda, tau) != 0) acc += ExactScalar(partial(lambda, tau)) * frac_exact(x[tau], max_bits, stats);
  return -floor_exact(acc, max_bits, stats);
}

IntMatrix build_A(const IndexSet& d, const Integer& k, const Point& x, unsigned max_bits, PrecisionStats* stats) {
  require_point(d, x);
  if (k < 1) throw DomainError("k must be a positive integer");
  Point fx;
  fx.reserve(x.size());
  for (const auto& v : x) fx.push_back(frac_exact(v, max_bits, stats));
  return generic_build<Integer>(
      d, [&](std::size_t mu) { return ipow(k, d.degree(mu)); },
      [&](const IntMatrix& a, std::size_t lambda) {
        ExactScalar acc(0);
        for (std::size_t tau = 0; tau < d.size(); ++tau)
          if (a(lambda, tau) != 0) acc += ExactScalar(a(lambda, tau)) * fx[tau];
        return Integer(-floor_exact(acc, max_bits, stats));
      });
}

IntMatrix delta(const IndexSet& d, const Integer& k) {
  IntMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = ipow(k, d.degree(i));
  return m;
}

Point S_k(const IndexSet& d, const Integer& k, const Point& x, unsigned max_bits, PrecisionStats* stats) {
  return gplab::apply(build_A(d, k, x, max_bits, stats), x);
}

IntMatrix augment(const IntMatrix& a, const std::vector<Integer>& b) {
  const std::size_t n = a.rows();
  IntMatrix m(n + 1, n + 1);
  m(0, 0) = 1;
  for (std::size_t i = 0; i < n; ++i) {
    m(i + 1, 0) = -b[i];
    for (std::size_t j = 0; j < n; ++j) m(i + 1, j + 1) = a(i, j);
  }
  return m;
}

AffineStep T_k(const IndexSet& d, const Integer& k, const Point& x, unsigned max_bits, PrecisionStats* stats) {
  require_point(d, x);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!in_unit_interval(x[i]))
      throw DomainError("T_k needs a point of [0,1)^D; coordinate " + d.at(i).to_string() + " = " + x[i].to_string());
  AffineStep out;
  out.A = build_A(d, k, x, max_bits, stats);
  Point s = gplab::apply(out.A, x);
  for (const auto& v : s) {
    Integer f = floor_exact(v, max_bits, stats);
    out.b.push_back(f);
    out.y.push_back(v - ExactScalar(f));
  }
  out.A_bar = augment(out.A, out.b);
  return out;
}

AffineStep A_from_pair(const IndexSet& d, const Integer& k, const Point& x, const Point& y) {
  require_point(d, x);
  require_point(d, y);
  AffineStep out;
  out.A = generic_build<Integer>(
      d, [&](std::size_t mu) { return ipow(k, d.degree(mu)); },
      [&](const IntMatrix& a, std::size_t lambda) {
        ExactScalar acc = y[lambda];
        for (std::size_t tau = 0; tau < d.size(); ++tau)
          if (a(lambda, tau) != 0) acc -= ExactScalar(a(lambda, tau)) * x[tau];
        return as_integer(acc, "correction term");
      });
  Point s = gplab::apply(out.A, x);
  for (std::size_t i = 0; i < d.size(); ++i) out.b.push_back(as_integer(s[i] - y[i], "translation"));
  out.A_bar = augment(out.A, out.b);
  out.y = y;
  return out;
}

std::vector<Point> iterate_T(const IndexSet& d, const Point& x0, const Integer& k, std::size_t steps, unsigned max_bits,
                             PrecisionStats* stats) {
  std::vector<Point> orbit{x0};
  orbit.reserve(steps + 1);
  for (std::size_t n = 0; n < steps; ++n) {
    try {
      orbit.push_back(T_k(d, k, orbit.back(), max_bits, stats).y);
    } catch (const IndeterminateFloor& e) {
      throw e.with_step(static_cast<long>(n));
    }
  }
  return orbit;
}

Matrix<GenPoly> symbolic_A(const IndexSet& d) {
  const GenPoly k = GenPoly::var(0);
  return generic_build<GenPoly>(
      d, [&](std::size_t mu) { return GenPoly::pow(k, d.degree(mu)); },
      [&](const Matrix<GenPoly>& a, std::size_t lambda) {
        std::vector<GenPoly> terms;
        for (std::size_t tau = 0; tau < d.size(); ++tau)
          if (!a(lambda, tau).is_constant(0)) terms.push_back(a(lambda, tau) * GenPoly::frac(GenPoly::var(1 + tau)));
        return -GenPoly::floor(GenPoly::add(std::move(terms)));
      });
}

nlohmann::json matrix_to_json(const IndexSet& d, const Integer& k, const IntMatrix& a, const Point& x,
                              const std::vector<Integer>& b) {
  nlohmann::json order = nlohmann::json::array();
  for (const auto& m : d.members()) order.push_back(m.to_string());
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < a.cols(); ++j) row.push_back(a(i, j).get_str());
    entries.push_back(row);
  }
  nlohmann::json xs = nlohmann::json::array();
  for (const auto& v : x) xs.push_back(v.to_string());
  nlohmann::json bs = nlohmann::json::array();
  for (const auto& v : b) bs.push_back(v.get_str());
  return {{"D", order}, {"grading", d.to_json().at("grading")}, {"k", k.get_str()},
          {"entries", entries}, {"x", xs}, {"b", bs}};
}

}  // namespace gplab
