#include <gtest/gtest.h>

#include <random>

#include "gplab/error.hpp"
#include "gplab/numbers.hpp"

using namespace gplab;

namespace {

// Independent floor oracle for c*sqrt(m) with c, m >= 0: floor(sqrt(c^2 m)).
Integer floor_c_sqrt(const Integer& c, const Integer& m) {
  Integer sq = c * c * m;
  Integer r;
  mpz_sqrt(r.get_mpz_t(), sq.get_mpz_t());
  return r;
}

ExactScalar q(long p, long d = 1) { return ExactScalar::fraction(p, d); }
ExactScalar sqrt2() { return ExactScalar::sqrt(ExactScalar(2)); }

}  // namespace

TEST(Numbers, RationalsAreCanonical) {
  ExactScalar a = q(6, -4);
  ASSERT_TRUE(a.is_rational());
  EXPECT_EQ(a.rational().get_num(), -3);
  EXPECT_EQ(a.rational().get_den(), 2);
  EXPECT_EQ(a.to_string(), "-3/2");
}

TEST(Numbers, FloorExamples) {
  EXPECT_EQ(floor_exact(q(7, 3)), 2);
  EXPECT_EQ(floor_exact(q(-1, 3)), -1);
  EXPECT_EQ(floor_exact(ExactScalar(100) * sqrt2()), 141);
  EXPECT_EQ(floor_exact(ExactScalar(100) * sqrt2()), floor_c_sqrt(100, 2));
}

TEST(Numbers, RationalFloorSkipsRefinement) {
  PrecisionStats stats;
  floor_exact(q(7, 3), kDefaultMaxBits, &stats);
  EXPECT_EQ(stats.refinements, 0u);
  EXPECT_EQ(stats.max_bits_used, 0u);
}

TEST(Numbers, FracExamples) {
  EXPECT_EQ(frac_exact(q(7, 3)), q(1, 3));
  EXPECT_EQ(frac_exact(q(-1, 3)), q(2, 3));
  ExactScalar f = frac_exact(sqrt2());
  EXPECT_FALSE(f.is_rational());
  EXPECT_EQ(f, sqrt2() - ExactScalar(1));
}

TEST(Numbers, CompareExamples) {
  EXPECT_EQ(compare(q(1, 2), q(1, 3)), Ordering::GT);
  EXPECT_EQ(compare(sqrt2() * sqrt2(), ExactScalar(2)), Ordering::EQ);
  EXPECT_EQ(compare(sqrt2(), q(141, 100)), Ordering::GT);
  EXPECT_EQ(compare(sqrt2(), q(142, 100)), Ordering::LT);
}

TEST(Numbers, SquareOfRootNormalisesToRational) {
  ExactScalar s = sqrt2() * sqrt2();
  ASSERT_TRUE(s.is_rational());
  EXPECT_EQ(s.rational(), 2);
  ExactScalar c = ExactScalar::root(ExactScalar(2), 3).pow(3);
  ASSERT_TRUE(c.is_rational());
  EXPECT_EQ(c.rational(), 2);
  EXPECT_TRUE((ExactScalar::sqrt(ExactScalar(8)) / sqrt2()).is_rational());
  EXPECT_EQ(ExactScalar::sqrt(q(9, 4)), q(3, 2));
}

TEST(Numbers, InverseOfRadicalSum) {
  // 1/(1+sqrt2) = sqrt2 - 1
  ExactScalar v = ExactScalar(1) / (ExactScalar(1) + sqrt2());
  EXPECT_EQ(v, sqrt2() - ExactScalar(1));
  // (1 + 2^{1/3})^{-1} * (1 + 2^{1/3}) == 1
  ExactScalar c = ExactScalar(1) + ExactScalar::root(ExactScalar(2), 3);
  ExactScalar p = (ExactScalar(1) / c) * c;
  ASSERT_TRUE(p.is_rational());
  EXPECT_EQ(p.rational(), 1);
  ExactScalar phi = (ExactScalar(1) + ExactScalar::sqrt(ExactScalar(5))) / ExactScalar(2);
  EXPECT_EQ(phi * phi - phi, ExactScalar(1));
}

TEST(Numbers, NestedRootIsOpaqueButDecidable) {
  ExactScalar r = ExactScalar::sqrt(ExactScalar(1) + sqrt2());
  EXPECT_FALSE(r.has_normal_form());
  // sqrt(1+sqrt2) ~ 1.553773974
  EXPECT_EQ(floor_exact(r * ExactScalar(1000)), 1553);
  EXPECT_EQ(compare(r * r, ExactScalar(1) + sqrt2(), 256), Ordering::EQ);
}

TEST(Numbers, OpaqueIntegerValueIsIndeterminate) {
  // sqrt(3 + 2 sqrt2) = 1 + sqrt2, so the difference below is exactly 1.
  ExactScalar r = ExactScalar::sqrt(ExactScalar(3) + ExactScalar(2) * sqrt2()) - sqrt2();
  EXPECT_FALSE(r.is_rational());
  EXPECT_THROW(floor_exact(r, 256), IndeterminateFloor);
  try {
    floor_exact(r, 256);
  } catch (const IndeterminateFloor& e) {
    EXPECT_EQ(e.bits(), 256u);
  }
}

TEST(Numbers, DomainErrors) {
  EXPECT_THROW(ExactScalar::sqrt(ExactScalar(-2)), DomainError);
  EXPECT_THROW(ExactScalar(1) / ExactScalar(0), DomainError);
  EXPECT_EQ(ExactScalar::root(ExactScalar(-8), 3), ExactScalar(-2));
}

TEST(Numbers, FloorOfLargeMultiplesMatchesIsqrtOracle) {
  for (long c = 1; c < 3000; c += 37) {
    EXPECT_EQ(floor_exact(ExactScalar(c) * sqrt2()), floor_c_sqrt(c, 2)) << c;
    EXPECT_EQ(floor_exact(ExactScalar(-c) * sqrt2()), -floor_c_sqrt(c, 2) - 1) << c;
  }
  Integer big = ipow(Integer(2), 200);
  EXPECT_EQ(floor_exact(ExactScalar(big) * sqrt2()), floor_c_sqrt(big, 2));
}

TEST(Numbers, RationalFloorProperty) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> num(-1000000, 1000000);
  std::uniform_int_distribution<long> den(1, 5000);
  for (int i = 0; i < 2000; ++i) {
    long p = num(rng);
    long d = den(rng);
    Integer f = floor_exact(q(p, d));
    EXPECT_LE(f * d, p);
    EXPECT_GT((f + 1) * d, p);
  }
}

TEST(Numbers, FracPlusFloorReassembles) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> coef(-50, 50);
  for (int i = 0; i < 200; ++i) {
    ExactScalar s = ExactScalar(coef(rng)) * sqrt2() + q(coef(rng), 7) +
                    ExactScalar(coef(rng)) * ExactScalar::sqrt(ExactScalar(3));
    if (s.is_rational()) continue;
    ExactScalar f = frac_exact(s);
    EXPECT_EQ(f + ExactScalar(floor_exact(s)), s);
    EXPECT_NE(compare(f, ExactScalar(0)), Ordering::LT);
    EXPECT_EQ(compare(f, ExactScalar(1)), Ordering::LT);
  }
}

TEST(Numbers, RefinementIsMonotone) {
  std::vector<ExactScalar> values = {sqrt2(), ExactScalar::root(q(7, 3), 5) - q(1, 9),
                                     ExactScalar::sqrt(ExactScalar(2) + ExactScalar::root(ExactScalar(3), 3))};
  for (const auto& v : values) {
    ExactScalar cur = v.refined(kInitialBits);
    for (unsigned b = kInitialBits * 2; b <= 1024; b *= 2) {
      ExactScalar next = cur.refined(b);
      Interval a = cur.enclosure();
      Interval c = next.enclosure();
      EXPECT_TRUE(c.subset_of(a));
      if (sgn(a.width()) != 0) EXPECT_LE(c.width() * 2, a.width());
      cur = next;
    }
  }
}

TEST(Numbers, EnclosureContainsValue) {
  for (long n = 2; n < 200; ++n) {
    ExactScalar s = ExactScalar::sqrt(ExactScalar(n));
    if (s.is_rational()) continue;
    Interval iv = *s.enclosure_at(80);
    EXPECT_LT(iv.lo * iv.lo, n);
    EXPECT_GT(iv.hi * iv.hi, n);
  }
}

TEST(Numbers, ParseAndPrintRoundTrip) {
  std::vector<std::string> inputs = {"7/3",        "-1/3",          "sqrt(2)",     "100*sqrt(2)",
                                     "root(12, 3)", "3/4*sqrt(6) - sqrt(2) + 5", "sqrt(1+sqrt(2))",
                                     "1/(sqrt(1+sqrt(2)) - 1)", "0.125", "2^-3", "(1+sqrt(5))/2"};
  for (const auto& s : inputs) {
    ExactScalar v = parse_scalar(s);
    ExactScalar back = parse_scalar(v.to_string());
    EXPECT_EQ(back, v) << s << " -> " << v.to_string();
  }
  EXPECT_EQ(parse_scalar("0.125"), q(1, 8));
  EXPECT_EQ(parse_scalar("2^-3"), q(1, 8));
  EXPECT_EQ(parse_scalar("sqrt(8)").to_string(), "2*sqrt(2)");
}

TEST(Numbers, ParseErrorsCarryOffsets) {
  try {
    parse_scalar("sqrt(2");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.offset(), 6u);
  }
  EXPECT_THROW(parse_scalar("1/0"), SyntaxError);
  EXPECT_THROW(parse_scalar("foo(2)"), SyntaxError);
  EXPECT_THROW(parse_scalar("sqrt(-1)"), SyntaxError);
}

TEST(Numbers, DecimalRendering) {
  EXPECT_EQ(sqrt2().to_decimal(10), "1.4142135624");
  EXPECT_EQ(q(-1, 8).to_decimal(3), "-0.125");
  EXPECT_EQ(q(1, 3).to_decimal(0), "0");
}
