#include <gtest/gtest.h>

#include <random>

#include "gplab/algsem.hpp"
#include "gplab/error.hpp"

using namespace gplab;

namespace {

Polynomial P(const char* s) { return parse_polynomial(s); }

PointQ pt(std::initializer_list<Rational> xs) {
  PointQ p;
  for (const auto& x : xs) p.emplace_back(x);
  return p;
}

// Independent rank: Gaussian elimination on a dense copy, column by column.
std::size_t rank_of(std::vector<std::vector<Rational>> m) {
  std::size_t r = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && sgn(m[p][c]) == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = r + 1; i < m.size(); ++i) {
      Rational f = m[i][c] / m[r][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

std::vector<std::vector<Rational>> eval_matrix(const std::vector<PointQ>& pts, std::size_t dim, unsigned d) {
  auto mons = monomials_up_to(dim, d);
  std::vector<std::vector<Rational>> m;
  for (const auto& p : pts) {
    std::vector<Rational> row;
    for (const auto& mon : mons) row.push_back(Polynomial::term(mon, 1).evaluate(p).rational());
    m.push_back(row);
  }
  return m;
}

}  // namespace

TEST(AlgSem, CollinearPoints) {
  std::vector<PointQ> pts{pt({0, 0}), pt({1, 1}), pt({2, 2}), pt({3, 3})};
  IdealBasis b = vanishing_ideal(pts, 1);
  ASSERT_EQ(b.basis.size(), 1u);
  EXPECT_EQ(b.basis[0], P("x_1 - x_2"));
}

TEST(AlgSem, ParabolaPoints) {
  std::vector<PointQ> pts;
  for (long x = -2; x <= 2; ++x) pts.push_back(pt({x, x * x}));
  IdealBasis b = vanishing_ideal(pts, 2);
  ASSERT_EQ(b.basis.size(), 1u);
  EXPECT_EQ(b.basis[0], P("x_1^2 - x_2"));
  EXPECT_TRUE(b.contains(P("x_2 - x_1^2")));
  EXPECT_EQ(b.basis.size(), 6 - rank_of(eval_matrix(pts, 2, 2)));
}

TEST(AlgSem, GenericPointsHaveEmptyLinearIdeal) {
  std::mt19937 rng(1);
  std::uniform_int_distribution<long> num(-50, 50), den(1, 9);
  for (std::size_t d = 1; d <= 4; ++d) {
    std::vector<PointQ> pts;
    for (std::size_t i = 0; i < d + 2; ++i) {
      PointQ p;
      for (std::size_t j = 0; j < d; ++j) p.emplace_back(Rational(num(rng), den(rng)));
      pts.push_back(p);
    }
    IdealBasis b = vanishing_ideal(pts, 1);
    EXPECT_EQ(b.basis.size(), (d + 1) - rank_of(eval_matrix(pts, d, 1)));
    EXPECT_TRUE(b.basis.empty());
  }
}

TEST(AlgSem, DimensionMatchesIndependentRank) {
  std::mt19937 rng(2);
  std::uniform_int_distribution<long> num(-4, 4), cnt(1, 14);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<PointQ> pts;
    long n = cnt(rng);
    for (long i = 0; i < n; ++i) pts.push_back(pt({num(rng), num(rng)}));
    for (unsigned d = 1; d <= 3; ++d) {
      IdealBasis b = vanishing_ideal(pts, d);
      EXPECT_EQ(b.basis.size(), monomials_up_to(2, d).size() - rank_of(eval_matrix(pts, 2, d)));
      for (const auto& f : b.basis)
        for (const auto& p : pts) EXPECT_TRUE(f.evaluate(p).is_zero());
    }
  }
}

TEST(AlgSem, PlantedQuadricRecovery) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<long> c(-3, 3);
  for (int trial = 0; trial < 10; ++trial) {
    // x_2 = q(x_1) for random quadratic q, 3 * 6 points
    Polynomial q = Polynomial(Rational(c(rng))) + P("x_1").scaled(c(rng)) + P("x_1^2").scaled(c(rng) == 0 ? 1 : 2);
    std::vector<PointQ> pts;
    for (long i = 0; i < 18; ++i) {
      Rational x(i - 9, 1 + i % 4);
      pts.push_back({ExactScalar(x), q.evaluate(std::vector<Rational>{x})});
    }
    IdealBasis b = vanishing_ideal(pts, 2);
    ASSERT_EQ(b.basis.size(), 1u);
    EXPECT_TRUE(b.contains(P("x_2") - q));
  }
}

TEST(AlgSem, IrrationalPointsOnParabola) {
  std::vector<PointQ> seq;
  ExactScalar s2 = ExactScalar::sqrt(ExactScalar(2));
  for (long n = 1; n <= 30; ++n) {
    ExactScalar f = frac_exact(ExactScalar(n) * s2);
    seq.push_back({f, f * f});
  }
  TailReport rep = tail_closure(seq, {0, 5, 10, 20}, 2);
  EXPECT_TRUE(rep.stabilized());
  EXPECT_TRUE(rep.increasing);
  ASSERT_EQ(rep.bases.back().basis.size(), 1u);
  EXPECT_EQ(rep.bases.back().basis[0], P("x_1^2 - x_2"));
}

TEST(AlgSem, PeriodicOrbitTail) {
  // x -> {2x} from 1/7: period 3
  std::vector<PointQ> seq;
  Rational x(1, 7);
  for (int n = 0; n < 40; ++n) {
    seq.push_back(pt({x}));
    x = 2 * x;
    if (x >= 1) x -= 1;
  }
  TailReport rep = tail_closure(seq, {0, 10, 20, 30}, 3);
  EXPECT_TRUE(rep.stabilized());
  EXPECT_EQ(rep.stable_from, 0u);
  ASSERT_EQ(rep.bases.back().basis.size(), 1u);
  EXPECT_EQ(rep.bases.back().basis[0], P("(x_1 - 1/7)*(x_1 - 2/7)*(x_1 - 4/7)"));

  std::vector<PointQ> three;
  Rational y(1, 7);
  for (int n = 0; n < 24; ++n) {
    three.push_back(pt({y}));
    y = 3 * y;
    while (y >= 1) y -= 1;
  }
  TailReport rep6 = tail_closure(three, {0, 6, 12}, 6);
  ASSERT_EQ(rep6.bases.back().basis.size(), 1u);
  EXPECT_EQ(rep6.bases.back().basis[0].total_degree(), 6);

  std::vector<PointQ> constant(10, pt({Rational(1, 2), Rational(3)}));
  TailReport rc = tail_closure(constant, {0, 5}, 1);
  EXPECT_EQ(rc.bases.back().basis.size(), 2u);
  EXPECT_THROW(tail_closure(constant, {10}, 1), EmptyTail);
}

TEST(AlgSem, Translations) {
  IdealBasis line = vanishing_ideal({pt({0, 0}), pt({1, 1}), pt({2, 2})}, 1);
  EXPECT_TRUE(translation_check(line, {1, 1}));
  EXPECT_FALSE(translation_check(line, {1, 0}));
  std::vector<PointQ> par;
  for (long x = -3; x <= 3; ++x) par.push_back(pt({x, x * x}));
  IdealBasis pb = vanishing_ideal(par, 2);
  EXPECT_FALSE(translation_check(pb, {0, 5}));
  EXPECT_TRUE(translation_check(pb, {0, 0}));
}

TEST(AlgSem, AffineImages) {
  IdealBasis line = vanishing_ideal({pt({0, 0}), pt({1, 1}), pt({2, 2})}, 1);
  Matrix<Rational> three(2, 2);
  three(0, 0) = 3;
  three(1, 1) = 3;
  EXPECT_TRUE(affine_image_check(line, line, affine_map(three, {})));
  std::vector<PointQ> par;
  for (long x = -3; x <= 3; ++x) par.push_back(pt({x, x * x}));
  IdealBasis pb = vanishing_ideal(par, 2);
  Matrix<Rational> s(2, 2);
  s(0, 0) = 2;
  s(1, 1) = 4;
  EXPECT_TRUE(affine_image_check(pb, pb, affine_map(s, {})));
  EXPECT_FALSE(affine_image_check(pb, pb, affine_map(Matrix<Rational>::identity(2), {1, 0})));
  PolyMap cube{P("x_1^3"), P("x_2")};
  EXPECT_THROW(affine_image_check(pb, pb, cube, 5), DegreeOverflow);
}

TEST(AlgSem, Membership) {
  SemialgebraicSet pos{1, {BasicPiece{{}, {P("x_1")}}}};
  EXPECT_TRUE(membership(pos, pt({Rational(1, 2)})));
  EXPECT_FALSE(membership(pos, pt({0})));
  EXPECT_EQ(complexity(pos), 1u);
  SemialgebraicSet disc{1, {BasicPiece{{}, {P("1 - x_1^2")}}}};
  EXPECT_FALSE(membership(disc, pt({1})));
  EXPECT_TRUE(membership(disc, {ExactScalar::sqrt(ExactScalar(2)) - ExactScalar(1)}));
  SemialgebraicSet arc{2, {BasicPiece{{P("x_2 - x_1^2")}, {P("x_1"), P("1 - x_1")}}}};
  EXPECT_TRUE(membership(arc, pt({Rational(1, 2), Rational(1, 4)})));
  EXPECT_FALSE(membership(arc, pt({Rational(1, 2), Rational(1, 3)})));
  SemialgebraicSet two{2, {BasicPiece{{}, {P("x_1^2 - x_2")}}, BasicPiece{{P("x_1*x_2")}, {}}}};
  EXPECT_EQ(complexity(two), 4u);
  auto j = arc.to_json();
  SemialgebraicSet back = SemialgebraicSet::from_json(j);
  EXPECT_TRUE(membership(back, pt({Rational(1, 2), Rational(1, 4)})));
}

TEST(AlgSem, ParametrisedComplexityIsUniform) {
  // S(y) = {x : x_1 - y > 0, x_2^2 - y^2 x_1 > 0}; degrees do not depend on y
  for (long y = -3; y <= 3; ++y) {
    Polynomial yy{Rational(y)};
    SemialgebraicSet s{2, {BasicPiece{{}, {P("x_1") - yy, P("x_2^2") - yy * yy * P("x_1")}}}};
    EXPECT_LE(complexity(s), 3u);
  }
}

TEST(AlgSem, ChangeOfBasis) {
  SemialgebraicSet half{2, {BasicPiece{{}, {P("1/2 - x_1")}}}};
  Matrix<Integer> shear(2, 2);
  shear(0, 0) = 1;
  shear(0, 1) = 1;
  shear(1, 1) = 1;
  EXPECT_FALSE(change_basis_membership(half, shear, pt({Rational(3, 4), Rational(3, 4)})));
  EXPECT_TRUE(change_basis_membership(half, shear, pt({Rational(1, 8), Rational(1, 4)})));
  EXPECT_TRUE(change_basis_membership(half, Matrix<Integer>::identity(2), pt({Rational(1, 4), Rational(3, 4)})));
  Matrix<Integer> two = Matrix<Integer>::identity(2);
  two(0, 0) = 2;
  EXPECT_THROW(change_basis_membership(half, two, pt({0, 0})), DomainError);
}

TEST(AlgSem, LimitSandwich) {
  std::vector<PointQ> grid;
  for (long i = -50; i < 50; ++i) grid.push_back(pt({Rational(i, 50)}));
  // variable x_2 is the parameter s = 1/n
  InequalityFamily shrink{1, FamilyParameter::InverseN, {P("x_2 - x_1^2")}};
  Sandwich a = limit_sandwich(shrink);
  EXPECT_EQ(a.limits[0], P("-x_1^2"));
  EXPECT_FALSE(membership(a.r, pt({0})));
  EXPECT_TRUE(membership(a.u, pt({0})));
  EXPECT_TRUE(membership(shrink.at(1000), pt({0})));
  SandwichReport ra = check_sandwich(shrink, a, grid, 3000, 3200);
  EXPECT_TRUE(ra.holds());
  EXPECT_EQ(ra.eventual, 1u);

  InequalityFamily constant{1, FamilyParameter::InverseN, {P("1/4 - x_1^2")}};
  Sandwich b = limit_sandwich(constant);
  EXPECT_EQ(b.limits[0], P("1/4 - x_1^2"));
  EXPECT_TRUE(check_sandwich(constant, b, grid, 1, 50).holds());

  InequalityFamily shift{1, FamilyParameter::InverseN, {P("x_1 - x_2")}};
  Sandwich c = limit_sandwich(shift);
  EXPECT_EQ(c.limits[0], P("x_1"));
  SandwichReport rc = check_sandwich(shift, c, grid, 100, 300);
  EXPECT_TRUE(rc.holds());
  EXPECT_EQ(rc.eventual, 49u);

  InequalityFamily grow{1, FamilyParameter::N, {P("x_2*x_1 - 1")}};
  EXPECT_EQ(limit_sandwich(grow).limits[0], P("x_1"));
  EXPECT_THROW(limit_sandwich(InequalityFamily{1, FamilyParameter::N, {Polynomial()}}), NonConvergentCoefficients);
}
