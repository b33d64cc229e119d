#include "gplab/orbitlab.hpp"

#include <gtest/gtest.h>

#include "gplab/error.hpp"
#include "gplab/polynomial.hpp"

using namespace gplab;

namespace {

Polynomial P(const char* s) { return parse_polynomial(s); }

SemialgebraicSet interval(const Rational& a, const Rational& b) {
  Polynomial x = Polynomial::variable(0);
  return {1, {BasicPiece{{}, {x - Polynomial(a), Polynomial(b) - x}}}};
}

const ExactScalar kSqrt2 = ExactScalar::sqrt(2);

// Sign of {M sqrt 2} - p/q with integers only: f = isqrt(2 M^2) is the
// floor, and q(M sqrt 2 - f) - p has the sign of 2 q^2 M^2 - (q f + p)^2
// whenever q f + p >= 0.
int sqrt2_frac_cmp(const Integer& m, const Rational& r) {
  Integer two_m2 = 2 * m * m;
  Integer f;
  mpz_sqrt(f.get_mpz_t(), two_m2.get_mpz_t());
  Integer p = r.get_num(), q = r.get_den();
  Integer rhs = q * f + p;
  if (rhs < 0) return 1;
  Integer diff = 2 * q * q * m * m - rhs * rhs;
  return sgn(diff);
}

bool sqrt2_frac_in(const Integer& m, const Rational& a, const Rational& b) {
  return sqrt2_frac_cmp(m, a) > 0 && sqrt2_frac_cmp(m, b) < 0;
}

}  // namespace

TEST(Orbit, RationalPeriodThree) {
  auto orb = torus_orbit({ExactScalar::fraction(1, 7)}, 2, 6);
  ASSERT_EQ(orb.size(), 7u);
  const long nums[] = {1, 2, 4, 1, 2, 4, 1};
  for (std::size_t n = 0; n < orb.size(); ++n) EXPECT_EQ(orb[n][0], ExactScalar::fraction(nums[n], 7));
}

TEST(Orbit, ZeroStaysZero) {
  for (const auto& p : torus_orbit({ExactScalar(0), ExactScalar(0)}, 5, 8))
    for (const auto& c : p) EXPECT_TRUE(c.is_zero());
}

TEST(Orbit, IrrationalMatchesIntegerOracle) {
  auto orb = torus_orbit({kSqrt2 - ExactScalar(1)}, 2, 10);
  for (std::size_t n = 0; n <= 10; ++n) {
    Integer m = ipow(Integer(2), n);
    Integer f;
    Integer two_m2 = 2 * m * m;
    mpz_sqrt(f.get_mpz_t(), two_m2.get_mpz_t());
    EXPECT_EQ(orb[n][0], ExactScalar(m) * kSqrt2 - ExactScalar(f)) << n;
  }
}

TEST(Orbit, RejectsStartOutsideTorus) {
  EXPECT_THROW(torus_orbit({ExactScalar(1)}, 2, 3), DomainError);
  EXPECT_THROW(torus_orbit({ExactScalar(-1) / ExactScalar(3)}, 2, 3), DomainError);
}

TEST(Hitting, WholeEmptyAndHalf) {
  auto orb = torus_orbit({ExactScalar::fraction(1, 7)}, 2, 8);
  SemialgebraicSet all{1, {BasicPiece{}}};
  SemialgebraicSet none{1, {BasicPiece{{}, {P("0 - 1")}}}};
  EXPECT_EQ(hitting_times(orb, all).hits.size(), orb.size());
  EXPECT_TRUE(hitting_times(orb, none).hits.empty());
  SemialgebraicSet half{1, {BasicPiece{{}, {P("1/2 - x_1")}}}};
  std::vector<std::size_t> expect;
  for (std::size_t n = 0; n <= 8; ++n)
    if (n % 3 != 2) expect.push_back(n);
  EXPECT_EQ(hitting_times(orb, half).hits, expect);
}

TEST(Density, MultiplesOfThree) {
  auto st = density_stats(DensityWindow::from_predicate(3000, [](long n) { return n % 3 == 0; }));
  ASSERT_TRUE(st.natural.has_value());
  EXPECT_LE(abs(*st.natural - Rational(1, 3)), Rational(1, 1000));
  EXPECT_LE(st.lower, *st.natural);
  EXPECT_GE(st.upper, *st.natural);
}

TEST(Density, PowersOfTwoAreSparse) {
  const std::size_t n = 1u << 15;
  auto w = DensityWindow::from_predicate(n, [](long v) { return (v & (v - 1)) == 0; });
  w.window = 256;
  auto st = density_stats(w);
  EXPECT_LE(st.upper, Rational(16, n / 2));
  EXPECT_LE(st.banach_upper, Rational(2, 256));
}

TEST(Density, PlantedIntervalMaximisesBanach) {
  const long m0 = 5000, wlen = 400;
  auto w = DensityWindow::from_predicate(20000, [&](long v) {
    long r = static_cast<long>(std::sqrt(static_cast<double>(v)));
    while (r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r * r == v || (v >= m0 && v < m0 + wlen);
  });
  w.window = wlen;
  auto st = density_stats(w);
  EXPECT_EQ(st.banach_upper, Rational(1));
  EXPECT_EQ(st.banach_offset, static_cast<std::size_t>(m0));
}

TEST(Density, ArithmeticProgressionsWithinOneOverN) {
  const std::size_t n = 10000;
  for (long a = 1; a <= 10; ++a)
    for (long b = 0; b < a; ++b) {
      auto st = density_stats(DensityWindow::from_predicate(n, [&](long v) { return v % a == b; }));
      ASSERT_TRUE(st.natural.has_value()) << a << " " << b;
      EXPECT_LT(abs(*st.natural - Rational(1, a)), Rational(1, n)) << a << " " << b;
    }
}

TEST(Density, EmptyWindowRejected) { EXPECT_THROW(density_stats(DensityWindow{}), DomainError); }

TEST(FiniteSums, Examples) {
  EXPECT_EQ(fs_set({1, 2, 4}), (std::set<long>{1, 2, 3, 4, 5, 6, 7}));
  EXPECT_EQ(fs_set({5}), (std::set<long>{5}));
  EXPECT_EQ(fs_set({3, 3}), (std::set<long>{3, 6}));
  EXPECT_THROW(fs_set(std::vector<long>(21, 1)), DomainError);
}

TEST(FiniteSums, SearchFindsWitnessesOrProvesNone) {
  std::set<long> all, odds, threes;
  for (long v = 1; v <= 100; ++v) {
    all.insert(v);
    if (v % 2) odds.insert(v);
    if (v % 3 == 0) threes.insert(v);
  }
  auto check = [](const std::set<long>& e, const std::optional<std::vector<long>>& g, std::size_t r) {
    ASSERT_TRUE(g.has_value());
    ASSERT_EQ(g->size(), r);
    for (long s : fs_set(*g)) EXPECT_TRUE(e.count(s)) << s;
  };
  check(all, find_fs_subset(all, 3, 100), 3);
  check(threes, find_fs_subset(threes, 3, 100), 3);
  check(all, find_fs_subset(all, 6, 100), 6);
  EXPECT_FALSE(find_fs_subset(odds, 2, 100).has_value());
  // 1 + 2 + ... + 14 = 105 > 100.
  EXPECT_FALSE(find_fs_subset(all, 14, 100).has_value());
}

TEST(FiniteSums, BudgetIsReported) {
  std::set<long> odds;
  for (long v = 1; v <= 2000; v += 2) odds.insert(v);
  bool exhausted = false;
  EXPECT_FALSE(find_fs_subset(odds, 2, 2000, 50, &exhausted).has_value());
  EXPECT_TRUE(exhausted);
}

TEST(MultiplierSearch, MatchesIntegerBruteForce) {
  const Rational a(1, 100), b(83, 100);
  SearchOptions opt;
  opt.jobs = 3;
  auto rep = multiplier_search_torus({kSqrt2 - ExactScalar(1)}, interval(a, b), 2, 0, 10, 2000, opt);
  EXPECT_TRUE(rep.premise_holds);
  EXPECT_TRUE(rep.reverify_failures.empty());
  EXPECT_TRUE(rep.indeterminate.empty());
  std::vector<long> brute;
  for (long l = 1; l <= 2000; ++l) {
    bool all = true;
    for (unsigned n = 0; n <= 10 && all; ++n) all = sqrt2_frac_in(Integer(l) * ipow(Integer(2), n), a, b);
    if (all) brute.push_back(l);
  }
  EXPECT_EQ(rep.multipliers, brute);
  ASSERT_FALSE(rep.multipliers.empty());
  EXPECT_EQ(rep.multipliers.front(), 1);
}

TEST(MultiplierSearch, ThreadCountDoesNotChangeResult) {
  auto s = interval(Rational(1, 10), Rational(9, 10));
  TorusPoint x{kSqrt2 - ExactScalar(1)};
  SearchOptions one, many;
  many.jobs = 4;
  EXPECT_EQ(multiplier_search_torus(x, s, 3, 0, 5, 500, one).multipliers,
            multiplier_search_torus(x, s, 3, 0, 5, 500, many).multipliers);
}

TEST(MultiplierSearch, OrbitShiftClosure) {
  auto s = interval(Rational(1, 100), Rational(83, 100));
  TorusPoint x{kSqrt2 - ExactScalar(1)};
  auto wide = multiplier_search_torus(x, s, 2, 0, 9, 400);
  auto narrow = multiplier_search_torus(x, s, 2, 0, 8, 800);
  std::set<long> narrow_set(narrow.multipliers.begin(), narrow.multipliers.end());
  for (long l : wide.multipliers) EXPECT_TRUE(narrow_set.count(2 * l)) << l;
}

TEST(MultiplierSearch, PremiseViolationIsFlagged) {
  auto rep = multiplier_search_torus({kSqrt2 - ExactScalar(1)}, interval(Rational(55, 100), Rational(61, 100)), 2, 0,
                                     10, 100);
  EXPECT_FALSE(rep.premise_holds);
  EXPECT_FALSE(rep.premise_failures.empty());
  EXPECT_TRUE(rep.multipliers.empty() || rep.multipliers.front() != 1);
}

TEST(MultiplierSearch, RationalPointTwoDimensional) {
  TorusPoint x{ExactScalar::fraction(1, 5), ExactScalar::fraction(2, 3)};
  SemialgebraicSet s{2, {BasicPiece{{}, {P("x_1 + x_2 - 1/2")}}}};
  auto rep = multiplier_search_torus(x, s, 2, 0, 4, 60);
  std::vector<long> brute;
  for (long l = 1; l <= 60; ++l) {
    bool all = true;
    for (int n = 0; n <= 4 && all; ++n) {
      long t = l << n;
      Rational y1((t * 1) % 5, 5), y2((t * 2) % 3, 3);
      y1.canonicalize();
      y2.canonicalize();
      all = y1 + y2 > Rational(1, 2);
    }
    if (all) brute.push_back(l);
  }
  EXPECT_EQ(rep.multipliers, brute);
}

TEST(TheoremA, EverythingGivesAllNonMultiples) {
  auto d = IndexSet::running_example();
  SemialgebraicSet all{d.size(), {BasicPiece{}}};
  std::map<unsigned, ExactScalar> alpha{{1, ExactScalar::fraction(1, 3)}, {2, ExactScalar::fraction(1, 5)},
                                        {3, ExactScalar::fraction(1, 7)}};
  auto rep = theoremA_experiment(d, alpha, all, 3, 40, 0, 3);
  EXPECT_TRUE(rep.premise_holds);
  EXPECT_TRUE(rep.path_independent);
  EXPECT_GT(rep.path_checks, 0u);
  std::set<long> expect;
  for (long m = 1; m <= 40; ++m)
    if (m % 3) expect.insert(m);
  EXPECT_EQ(rep.found(), expect);
}

TEST(TheoremA, EmptySetFlagsPremise) {
  SemialgebraicSet none{1, {}};
  ExperimentOptions opt;
  opt.check_premise = true;
  auto d = IndexSet::closure_of({parse_index("1")}, Grading{{1, 1}});
  auto rep = theoremA_experiment(d, {{1, kSqrt2}}, none, 2, 30, 0, 4, opt);
  EXPECT_FALSE(rep.premise_holds);
  EXPECT_TRUE(rep.found().empty());
}

TEST(TheoremA, SqrtTwoMatchesBruteForce) {
  const Rational a(1, 100), b(83, 100);
  auto d = IndexSet::closure_of({parse_index("1")}, Grading{{1, 1}});
  ExperimentOptions opt;
  opt.jobs = 2;
  auto rep = theoremA_experiment(d, {{1, kSqrt2}}, interval(a, b), 2, 600, 0, 8, opt);
  EXPECT_TRUE(rep.premise_holds);
  EXPECT_TRUE(rep.path_independent);
  EXPECT_TRUE(rep.reverify_failures.empty());
  std::map<long, std::vector<std::size_t>> brute;
  for (long m = 1; m <= 600; m += 2)
    for (unsigned n = 0; n <= 8; ++n)
      if (sqrt2_frac_in(Integer(m) * ipow(Integer(2), n), a, b)) brute[m].push_back(n);
  EXPECT_EQ(rep.multipliers, brute);
  EXPECT_GE(rep.fs_probe.order, 1u);
  ASSERT_TRUE(rep.density.has_value());
}

TEST(TheoremA, PathIndependenceOnDeeperSet) {
  auto d = IndexSet::running_example();
  std::map<unsigned, ExactScalar> alpha{{1, kSqrt2}, {2, ExactScalar::fraction(2, 7)}, {3, ExactScalar::fraction(1, 3)}};
  SemialgebraicSet s{d.size(), {BasicPiece{{}, {P("x_1 - 1/10")}}}};
  auto rep = theoremA_experiment(d, alpha, s, 2, 25, 0, 4);
  EXPECT_TRUE(rep.path_independent);
  EXPECT_GT(rep.path_checks, 0u);
}

TEST(TheoremA, GenPolyZeroSet) {
  // g(n) = {n/8}: vanishes on every m 2^n with n >= 3.
  GenPoly g = parse_genpoly("frac(n/8)");
  auto rep = theoremA_experiment(g, 2, 30, 3, 6);
  EXPECT_TRUE(rep.premise_holds);
  std::set<long> odds;
  for (long m = 1; m <= 30; m += 2) odds.insert(m);
  EXPECT_EQ(rep.found(), odds);
  for (const auto& [m, w] : rep.multipliers) EXPECT_EQ(w, (std::vector<std::size_t>{3, 4, 5, 6}));
  auto bad = theoremA_experiment(g, 2, 30, 0, 6);
  EXPECT_FALSE(bad.premise_holds);
}

TEST(TheoremA, ReportJsonShape) {
  auto d = IndexSet::closure_of({parse_index("1")}, Grading{{1, 1}});
  auto rep = theoremA_experiment(d, {{1, ExactScalar::fraction(1, 7)}}, interval(Rational(0), Rational(1, 2)), 2, 20,
                                 0, 3);
  auto j = rep.to_json();
  for (const char* key : {"params", "premise_check", "multipliers", "fs_probe", "density", "precision"})
    EXPECT_TRUE(j.contains(key)) << key;
}
