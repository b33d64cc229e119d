#include <gtest/gtest.h>

#include <random>

#include "gplab/stlie.hpp"
#include "gplab/timesk.hpp"

using namespace gplab;

namespace {

using SMatrix = Matrix<ExactScalar>;

const IndexSet& running() {
  static const IndexSet d = IndexSet::running_example();
  return d;
}

// augmented running layout: 0, 1, 2, 1[2], 2[1], 3
std::size_t apos(const char* s) { return s == std::string("0") ? 0 : running().index_of(parse_index(s)) + 1; }

SMatrix random_strict(const GradedLayout& g, std::mt19937& rng, long den_max, double density = 0.8) {
  std::uniform_int_distribution<long> den(1, den_max), num(-20, 20);
  std::bernoulli_distribution keep(density);
  SMatrix z(g.size(), g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (g.precedes(j, i) && keep(rng)) z(i, j) = ExactScalar(Rational(num(rng), den(rng)));
  return z;
}

template <typename T>
Matrix<T> series_exp(const Matrix<T>& z, std::size_t terms) {
  // independent oracle: Taylor series with explicit factorials
  Matrix<T> acc = Matrix<T>::identity(z.rows()), p = acc;
  Rational fact(1);
  for (std::size_t n = 1; n <= terms; ++n) {
    p = p * z;
    fact *= Rational(static_cast<long>(n));
    acc = acc + T(1 / fact) * p;
  }
  return acc;
}

SMatrix diag_of(const SMatrix& a) {
  SMatrix d(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) d(i, i) = a(i, i);
  return d;
}

}  // namespace

TEST(StLie, LayoutLongestPath) {
  GradedLayout g = GradedLayout::augmented(running());
  EXPECT_EQ(g.size(), 6u);
  EXPECT_EQ(g.degree(0), 0u);
  EXPECT_TRUE(g.precedes(apos("1"), apos("1[2]")));
  EXPECT_FALSE(g.precedes(apos("2"), apos("1[2]")));
  EXPECT_EQ(g.longest_path(apos("1[2]"), apos("0")), 3u);
  EXPECT_EQ(g.longest_path(apos("3"), apos("0")), 2u);
}

TEST(StLie, ExpNilpotentRunningExample) {
  GradedLayout g = GradedLayout::augmented(running());
  // symbolic entries: variables numbered by position pair
  Matrix<Polynomial> z(6, 6);
  std::size_t next = 0;
  std::map<std::pair<std::size_t, std::size_t>, Polynomial> var;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (g.precedes(j, i)) z(i, j) = var[{i, j}] = Polynomial::variable(next++);
  Matrix<Polynomial> y = exp_nilpotent(g, z);
  auto Z = [&](const char* a, const char* b) { return var.at({apos(a), apos(b)}); };
  EXPECT_EQ(y(apos("1[2]"), apos("0")), Z("1[2]", "0") + Polynomial(Rational(1, 2)) * Z("1[2]", "1") * Z("1", "0"));
  EXPECT_EQ(y(apos("2[1]"), apos("0")), Z("2[1]", "0") + Polynomial(Rational(1, 2)) * Z("2[1]", "2") * Z("2", "0"));
  EXPECT_EQ(y(apos("1"), apos("0")), Z("1", "0"));
  EXPECT_EQ(y(apos("3"), apos("0")), Z("3", "0"));
  EXPECT_EQ(y(apos("1[2]"), apos("1")), Z("1[2]", "1"));
  EXPECT_EQ(exp_nilpotent(g, Matrix<Polynomial>(6, 6)), Matrix<Polynomial>::identity(6));
  EXPECT_EQ(log_unipotent(g, y), z);
}

TEST(StLie, ExpGradedRunningExampleSymbolic) {
  GradedLayout g = GradedLayout::augmented(running());
  const Polynomial e = Polynomial::variable(0);
  Matrix<Polynomial> z(6, 6);
  std::size_t next = 1;
  std::map<std::pair<std::size_t, std::size_t>, Polynomial> var;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (g.precedes(j, i)) z(i, j) = var[{i, j}] = Polynomial::variable(next++);
  auto Z = [&](const char* a, const char* b) { return var.at({apos(a), apos(b)}); };
  Matrix<Polynomial> y = exp_graded(g, e, z);
  const Polynomial one(1), half(Rational(1, 2));
  EXPECT_EQ(y(apos("1"), apos("0")), (e - one) * Z("1", "0"));
  EXPECT_EQ(y(apos("2"), apos("0")), (e - one) * Z("2", "0"));
  EXPECT_EQ(y(apos("1[2]"), apos("1")), e * (e - one) * Z("1[2]", "1"));
  EXPECT_EQ(y(apos("2[1]"), apos("2")), e * (e - one) * Z("2[1]", "2"));
  EXPECT_EQ(y(apos("1[2]"), apos("0")),
            half * (e * e - one) * Z("1[2]", "0") + half * (e - one).pow(2) * Z("1[2]", "1") * Z("1", "0"));
  EXPECT_EQ(y(apos("2[1]"), apos("0")),
            half * (e * e - one) * Z("2[1]", "0") + half * (e - one).pow(2) * Z("2[1]", "2") * Z("2", "0"));
  // 2x2 block [[0, 0], [z, 2]]: exp entry is z (E^2 - 1) / 2
  EXPECT_EQ(y(apos("3"), apos("0")), half * (e * e - one) * Z("3", "0"));
  EXPECT_EQ(y(apos("3"), apos("3")), e * e);
  EXPECT_EQ(y(apos("0"), apos("0")), one);
  EXPECT_EQ(exp_graded(g, e, Matrix<Polynomial>(6, 6))(apos("1[2]"), apos("1[2]")), e * e);
}

TEST(StLie, ExpGradedOneParameterSubgroup) {
  // exp((s + t)(Lambda + Z)) = exp(s(Lambda + Z)) exp(t(Lambda + Z))
  GradedLayout g = GradedLayout::augmented(running());
  std::mt19937 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    SMatrix z = random_strict(g, rng, 9);
    ExactScalar e1(2 + trial % 3), e2(Rational(3, 2));
    EXPECT_EQ(exp_graded(g, e1, z) * exp_graded(g, e2, z), exp_graded(g, e1 * e2, z));
    EXPECT_EQ(exp_graded(g, ExactScalar(1), z), SMatrix::identity(6));
  }
}

TEST(StLie, NilpotentRoundTrips) {
  std::mt19937 rng(5);
  IndexSet deep = IndexSet::closure_of({parse_index("1[2][1[2]]"), parse_index("2[1][1]")}, {{1, 1}, {2, 2}});
  std::vector<GradedLayout> layouts{GradedLayout::augmented(running()), GradedLayout::of(deep),
                                    GradedLayout::augmented(deep)};
  for (int trial = 0; trial < 250; ++trial) {
    const GradedLayout& g = layouts[trial % layouts.size()];
    SMatrix z = random_strict(g, rng, 12);
    SMatrix y = exp_nilpotent(g, z);
    EXPECT_TRUE(is_unipotent(g, y));
    EXPECT_EQ(y, series_exp(z, g.size() + 2));
    EXPECT_EQ(log_unipotent(g, y), z);
  }
}

TEST(StLie, GradedRoundTrips) {
  std::mt19937 rng(7);
  IndexSet deep = IndexSet::closure_of({parse_index("1[2][1[2]]"), parse_index("2[1][1]")}, {{1, 1}, {2, 2}});
  std::vector<GradedLayout> layouts{GradedLayout::augmented(running()), GradedLayout::of(running()),
                                    GradedLayout::of(deep)};
  const long scales[] = {2, 3, 5};
  for (int trial = 0; trial < 250; ++trial) {
    const GradedLayout& g = layouts[trial % layouts.size()];
    ExactScalar e(scales[trial % 3]);
    SMatrix z = random_strict(g, rng, 10);
    SMatrix a = exp_graded(g, e, z);
    EXPECT_TRUE(is_lower_triangular(g, a));
    GradedLog lg = log_graded(g, a);
    EXPECT_EQ(lg.scale, e);
    EXPECT_EQ(lg.z, z);
  }
}

TEST(StLie, LogOfDeltaAndTimesK) {
  const auto& d = running();
  GradedLayout g = GradedLayout::of(d);
  for (long k : {2L, 3L, 7L}) {
    SMatrix delta_k = delta(d, k).map([](const Integer& v) { return ExactScalar(v); });
    GradedLog lg = log_graded(g, delta_k);
    EXPECT_EQ(lg.scale, ExactScalar(k));
    EXPECT_EQ(lg.z, SMatrix(d.size(), d.size()));
  }
  IndexSet deep = IndexSet::closure_of({parse_index("1[2][1[2]]"), parse_index("2")}, {{1, 1}, {2, 1}});
  GradedLayout gd = GradedLayout::of(deep);
  std::mt19937 rng(11);
  std::uniform_int_distribution<long> num(-40, 40), den(1, 13);
  for (int trial = 0; trial < 30; ++trial) {
    Point x;
    for (std::size_t i = 0; i < deep.size(); ++i) x.emplace_back(Rational(num(rng), den(rng)));
    long k = 2 + trial % 2;
    SMatrix a = build_A(deep, k, x).map([](const Integer& v) { return ExactScalar(v); });
    GradedLog lg = log_graded(gd, a);
    EXPECT_EQ(lg.scale, ExactScalar(k));
    for (std::size_t i = 0; i < deep.size(); ++i)
      for (std::size_t j = 0; j < deep.size(); ++j) EXPECT_TRUE(lg.z(i, j).is_rational());
    EXPECT_EQ(exp_graded(gd, lg.scale, lg.z), a);
  }
}

TEST(StLie, Powers) {
  const auto& d = running();
  GradedLayout g = GradedLayout::of(d);
  SMatrix d4 = delta(d, 4).map([](const Integer& v) { return ExactScalar(v); });
  SMatrix d2 = delta(d, 2).map([](const Integer& v) { return ExactScalar(v); });
  EXPECT_EQ(power(g, d4, Rational(1, 2)), d2);
  std::mt19937 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    SMatrix a = exp_graded(g, ExactScalar(4), random_strict(g, rng, 7));
    EXPECT_EQ(power(g, a, Rational(1)), a);
    EXPECT_EQ(power(g, a, Rational(2)), a * a);
    SMatrix h = power(g, a, Rational(1, 2));
    EXPECT_EQ(h * h, a);
    EXPECT_EQ(power(g, a, Rational(3, 2)), h * a);
    EXPECT_EQ(power(g, a, Rational(-1)) * a, SMatrix::identity(d.size()));
    EXPECT_EQ(power(g, a, Rational(0)), SMatrix::identity(d.size()));
  }
  GradedLayout ga = GradedLayout::augmented(d);
  for (int trial = 0; trial < 20; ++trial) {
    SMatrix u = exp_nilpotent(ga, random_strict(ga, rng, 6));
    Matrix<Polynomial> ut = unipotent_power(ga, u);
    for (long t = -2; t <= 3; ++t) {
      SMatrix expect = SMatrix::identity(ga.size());
      SMatrix base = t >= 0 ? u : inverse_lower(u);
      for (long s = 0; s < std::labs(t); ++s) expect = expect * base;
      SMatrix got = ut.map([&](const Polynomial& p) { return p.evaluate(std::vector<ExactScalar>{ExactScalar(t)}); });
      EXPECT_EQ(got, expect);
      EXPECT_EQ(power(ga, u, Rational(t)), expect);
    }
    EXPECT_EQ(power(ga, u, Rational(-1)) * u, SMatrix::identity(ga.size()));
  }
}

TEST(StLie, Diagonalize) {
  const auto& d = running();
  GradedLayout g = GradedLayout::of(d);
  SMatrix d3 = delta(d, 3).map([](const Integer& v) { return ExactScalar(v); });
  EXPECT_EQ(diagonalize(g, d3), SMatrix::identity(d.size()));

  IndexSet two({parse_index("1"), parse_index("1[1]")}, {{1, 1}});
  GradedLayout g2 = GradedLayout::of(two);
  for (long k : {2L, 3L, 5L}) {
    ExactScalar a(Rational(7, 3));
    SMatrix m(2, 2);
    m(0, 0) = ExactScalar(k);
    m(1, 0) = a;
    m(1, 1) = ExactScalar(k * k);
    SMatrix p = diagonalize(g2, m);
    EXPECT_EQ(p(1, 0), -a / ExactScalar(k * k - k));
    EXPECT_EQ(inverse_lower(p) * m * p, diag_of(m));
  }

  std::mt19937 rng(17);
  IndexSet deep = IndexSet::closure_of({parse_index("1[2][1[2]]"), parse_index("2[1][1]")}, {{1, 1}, {2, 2}});
  for (const GradedLayout& gl : {GradedLayout::augmented(running()), GradedLayout::of(deep)}) {
    for (int trial = 0; trial < 20; ++trial) {
      SMatrix a = exp_graded(gl, ExactScalar(2), random_strict(gl, rng, 9));
      SMatrix p = diagonalize(gl, a);
      EXPECT_TRUE(is_unipotent(gl, p));
      EXPECT_EQ(inverse_lower(p) * a * p, diag_of(a));
    }
  }
}

TEST(StLie, GroupClosure) {
  GradedLayout g = GradedLayout::augmented(running());
  std::mt19937 rng(19);
  for (int trial = 0; trial < 30; ++trial) {
    SMatrix a = exp_graded(g, ExactScalar(3), random_strict(g, rng, 5));
    SMatrix b = exp_graded(g, ExactScalar(Rational(1, 2)), random_strict(g, rng, 5));
    SMatrix ab = a * b;
    EXPECT_TRUE(is_lower_triangular(g, ab));
    EXPECT_EQ(standard_scale(g, ab), ExactScalar(Rational(3, 2)));
    EXPECT_EQ(standard_scale(g, inverse_lower(a)), ExactScalar(Rational(1, 3)));
    SMatrix u = exp_nilpotent(g, random_strict(g, rng, 5));
    SMatrix v = exp_nilpotent(g, random_strict(g, rng, 5));
    EXPECT_TRUE(is_unipotent(g, u * v));
    EXPECT_TRUE(is_unipotent(g, inverse_lower(u)));
  }
}

TEST(StLie, Errors) {
  GradedLayout g = GradedLayout::of(running());
  SMatrix id = SMatrix::identity(5);
  EXPECT_THROW(exp_nilpotent(g, id), NotStrictlyLower);
  SMatrix upper(5, 5);
  upper(0, 3) = ExactScalar(1);
  EXPECT_THROW(exp_nilpotent(g, upper), NotStrictlyLower);
  EXPECT_THROW(log_unipotent(g, SMatrix(5, 5)), NotUnipotent);
  EXPECT_THROW(log_graded(g, id), ScaleIsOne);
  EXPECT_THROW(diagonalize(g, id), ScaleIsOne);
  SMatrix bad = SMatrix::identity(5);
  bad(0, 0) = ExactScalar(2);
  EXPECT_THROW(log_graded(g, bad), InconsistentDiagonal);
  EXPECT_THROW(stlie_detail::chain_coefficients({2, 1, 2}), RepeatedDegreeOnChain);
}
