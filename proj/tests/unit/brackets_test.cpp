#include <gtest/gtest.h>

#include <random>
#include <set>
#include <functional>

#include "gplab/brackets.hpp"
#include "gplab/error.hpp"

using namespace gplab;

namespace {

BracketIndex I(const char* s) { return parse_index(s); }

const Grading kRunning{{1, 1}, {2, 1}, {3, 2}};

// Oracle for derivability: enumerate every index obtainable by repeatedly
// deleting one factor anywhere in the tree.
std::set<BracketIndex> one_step_removals(const BracketIndex& mu) {
  std::set<BracketIndex> out;
  const auto& fs = mu.factors();
  for (std::size_t i = 0; i < fs.size(); ++i) {
    std::vector<BracketIndex> rest;
    for (std::size_t j = 0; j < fs.size(); ++j)
      if (j != i) rest.push_back(fs[j]);
    out.insert(BracketIndex(mu.leaf(), rest));
    for (const auto& inner : one_step_removals(fs[i])) {
      std::vector<BracketIndex> repl = rest;
      repl.push_back(inner);
      out.insert(BracketIndex(mu.leaf(), repl));
    }
  }
  return out;
}

std::set<BracketIndex> removal_closure(const BracketIndex& mu) {
  std::set<BracketIndex> seen{mu};
  std::vector<BracketIndex> stack{mu};
  while (!stack.empty()) {
    BracketIndex cur = stack.back();
    stack.pop_back();
    for (const auto& r : one_step_removals(cur))
      if (seen.insert(r).second) stack.push_back(r);
  }
  return seen;
}

BracketIndex random_index(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<unsigned> leaf(1, 3);
  std::uniform_int_distribution<int> nf(0, depth > 0 ? 2 : 0);
  int k = nf(rng);
  std::vector<BracketIndex> fs;
  for (int i = 0; i < k; ++i) fs.push_back(random_index(rng, depth - 1));
  return BracketIndex(leaf(rng), fs);
}

}  // namespace

TEST(Brackets, LiteralsAndCanonicalEquality) {
  EXPECT_EQ(I("1[2][2[1]]"), I("1[2[1]][2]"));
  EXPECT_EQ(I("1[2][2[1]]").to_string(), "1[2][2[1]]");
  EXPECT_TRUE(I("7").is_leaf());
  EXPECT_THROW(I("1[2"), SyntaxError);
  EXPECT_THROW(I("0"), SyntaxError);
  EXPECT_THROW(I("[1]"), SyntaxError);
}

TEST(Brackets, DegreeExamples) {
  EXPECT_EQ(degree(I("1[2]"), kRunning), 2u);
  EXPECT_EQ(degree(I("2[1]"), kRunning), 2u);
  EXPECT_EQ(degree(I("3"), kRunning), 2u);
  EXPECT_EQ(degree(I("1[2[1]]"), kRunning), 3u);
  EXPECT_THROW(degree(I("4"), kRunning), MissingGrade);
}

TEST(Brackets, HeightExamples) {
  EXPECT_EQ(height(I("2")), 0u);
  EXPECT_EQ(height(I("1[2]")), 1u);
  EXPECT_EQ(height(I("1[2[1]]")), 2u);
  EXPECT_EQ(height(I("1[2][3]")), 1u);
}

TEST(Brackets, DerivableExamples) {
  EXPECT_TRUE(derivable(I("1"), I("1[2]")));
  EXPECT_FALSE(derivable(I("3"), I("1[2]")));
  EXPECT_TRUE(derivable(I("1[2]"), I("1[2][2]")));
  EXPECT_TRUE(derivable(I("2"), I("2[1]")));
  EXPECT_FALSE(derivable(I("1[2]"), I("2[1]")));
  EXPECT_TRUE(derivable(I("1[2]"), I("1[2[1]]")));
  EXPECT_FALSE(derivable(I("1[2][2]"), I("1[2[1]]")));
}

TEST(Brackets, DerivableMatchesRemovalOracle) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 60; ++t) {
    BracketIndex mu = random_index(rng, 2);
    auto closure = removal_closure(mu);
    auto fast = downward_closure({mu});
    EXPECT_EQ(std::set<BracketIndex>(fast.begin(), fast.end()), closure) << mu.to_string();
    for (int s = 0; s < 30; ++s) {
      BracketIndex nu = random_index(rng, 2);
      EXPECT_EQ(derivable(nu, mu), closure.count(nu) > 0) << nu.to_string() << " vs " << mu.to_string();
    }
  }
}

TEST(Brackets, PartialOrderProperties) {
  std::mt19937_64 rng(21);
  std::vector<BracketIndex> sample;
  for (int i = 0; i < 40; ++i) {
    BracketIndex m = random_index(rng, 2);
    for (const auto& b : downward_closure({m})) sample.push_back(b);
  }
  Grading g{{1, 1}, {2, 2}, {3, 3}};
  for (const auto& a : sample) {
    EXPECT_TRUE(derivable(a, a));
    for (const auto& b : sample) {
      if (derivable(a, b)) {
        EXPECT_LE(a.height(), b.height());
        EXPECT_LE(degree(a, g), degree(b, g));
        if (derivable(b, a)) EXPECT_EQ(a, b);
      }
    }
  }
  for (std::size_t i = 0; i < sample.size(); i += 3)
    for (std::size_t j = 0; j < sample.size(); j += 3)
      for (std::size_t k = 0; k < sample.size(); k += 5)
        if (derivable(sample[i], sample[j]) && derivable(sample[j], sample[k]))
          EXPECT_TRUE(derivable(sample[i], sample[k]));
}

TEST(Brackets, ClosureIsIdempotent) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 30; ++t) {
    auto c = downward_closure({random_index(rng, 3), random_index(rng, 2)});
    EXPECT_EQ(downward_closure(c), c);
  }
}

TEST(Brackets, ComplexityVectors) {
  IndexSet d = IndexSet::running_example();
  EXPECT_EQ(d.complexity(), (std::vector<std::size_t>{3, 2}));
  EXPECT_EQ(complexity_vector({I("1")}), (std::vector<std::size_t>{1}));
  EXPECT_EQ(compare_complexity({3, 2}, {0, 3}), std::strong_ordering::less);
  EXPECT_EQ(compare_complexity({3, 2, 0}, {3, 2}), std::strong_ordering::equal);
  EXPECT_THROW(complexity_vector({I("1[2]")}), NotDownwardClosed);
}

TEST(Brackets, RunningExampleOrder) {
  IndexSet d = IndexSet::running_example();
  std::vector<std::string> names;
  for (const auto& m : d.members()) names.push_back(m.to_string());
  EXPECT_EQ(names, (std::vector<std::string>{"1", "2", "1[2]", "2[1]", "3"}));
  EXPECT_TRUE(d.below(0, 2));
  EXPECT_TRUE(d.below(1, 3));
  EXPECT_FALSE(d.below(0, 3));
  EXPECT_FALSE(d.below(4, 2));
  EXPECT_EQ(IndexSet::from_json(d.to_json()), d);
  EXPECT_THROW(IndexSet({I("1[2]")}, Grading{{1, 1}, {2, 1}}), NotDownwardClosed);
  EXPECT_THROW(IndexSet({I("1"), I("2")}, Grading{{1, 1}}), MissingGrade);
}

TEST(Brackets, MonomialValues) {
  std::map<unsigned, ExactScalar> alpha{{1, ExactScalar::fraction(1, 3)},
                                        {2, ExactScalar::fraction(1, 5)},
                                        {3, ExactScalar::fraction(1, 7)}};
  IndexSet d = IndexSet::running_example();
  EXPECT_EQ(monomial_eval(I("1[2]"), alpha, ExactScalar(1), kRunning), ExactScalar::fraction(1, 15));
  auto f = [](long p, long q) { return ExactScalar::fraction(p, q); };
  EXPECT_EQ(v_vector(d, alpha, ExactScalar(2)),
            (std::vector<ExactScalar>{f(2, 3), f(2, 5), f(4, 15), f(4, 15), f(4, 7)}));
  EXPECT_EQ(v_vector(d, alpha, ExactScalar(1)),
            (std::vector<ExactScalar>{f(1, 3), f(1, 5), f(1, 15), f(1, 15), f(1, 7)}));
  for (const auto& v : v_vector(d, alpha, ExactScalar(0))) EXPECT_TRUE(v.is_zero());
  IndexSet one({I("1")}, Grading{{1, 1}});
  EXPECT_EQ(v_vector(one, {{1, ExactScalar(1)}}, ExactScalar(9)), (std::vector<ExactScalar>{ExactScalar(9)}));
}

TEST(Brackets, RunningExampleDisplayFormula) {
  // v(n) = (a1 n, a2 n, a1 n {a2 n}, a2 n {a1 n}, a3 n^2) with irrational alpha.
  std::map<unsigned, ExactScalar> alpha{{1, ExactScalar::sqrt(ExactScalar(2))},
                                        {2, ExactScalar::sqrt(ExactScalar(3))},
                                        {3, ExactScalar::fraction(2, 9)}};
  IndexSet d = IndexSet::running_example();
  for (long n = 1; n <= 12; ++n) {
    ExactScalar N(n);
    ExactScalar a1n = alpha[1] * N;
    ExactScalar a2n = alpha[2] * N;
    std::vector<ExactScalar> expect{a1n, a2n, a1n * frac_exact(a2n), a2n * frac_exact(a1n), alpha[3] * N * N};
    EXPECT_EQ(v_vector(d, alpha, N), expect);
  }
}
