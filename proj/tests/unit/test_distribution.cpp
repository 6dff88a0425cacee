#include <gtest/gtest.h>

#include <random>

#include "codestab/distribution.hpp"
#include "codestab/errors.hpp"
#include "oracle.hpp"
#include "test_support.hpp"

namespace codestab {
namespace {

SubtreeSymbol sym(const char* s) { return SubtreeSymbol(s); }

std::vector<std::string> forms(const JointSupport& u) {
  std::vector<std::string> out;
  for (const auto& s : u.symbols()) out.push_back(s.canonical_form());
  return out;
}

TEST(JointSupport, IdenticalSupports) {
  const auto u = joint_support({{sym("x"), 1}}, {{sym("x"), 2}});
  EXPECT_EQ(forms(*u), (std::vector<std::string>{"x"}));
}

TEST(JointSupport, DisjointSupports) {
  const auto u = joint_support({{sym("x"), 1}}, {{sym("y"), 1}});
  EXPECT_EQ(forms(*u), (std::vector<std::string>{"x", "y"}));
}

TEST(JointSupport, OverlappingSupports) {
  const auto u = joint_support({{sym("x"), 2}, {sym("y"), 1}},
                               {{sym("y"), 3}, {sym("z"), 1}});
  EXPECT_EQ(forms(*u), (std::vector<std::string>{"x", "y", "z"}));
  EXPECT_EQ(u->index_of(sym("z")), 2u);
  EXPECT_FALSE(u->index_of(sym("w")).has_value());
}

TEST(JointSupport, Commutative) {
  const SubtreeMultiset a{{sym("b"), 2}, {sym("a"), 1}};
  const SubtreeMultiset b{{sym("c"), 3}, {sym("b"), 1}};
  EXPECT_EQ(*joint_support(a, b), *joint_support(b, a));
}

TEST(JointSupport, EmptyMultisetRejected) {
  try {
    (void)joint_support({}, {{sym("x"), 1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyDistribution);
  }
  EXPECT_THROW(JointSupport({sym("b"), sym("a")}), Error);
  EXPECT_THROW(JointSupport({sym("a"), sym("a")}), Error);
}

TEST(Empirical, Halves) {
  const auto u = std::make_shared<const JointSupport>(
      std::vector{sym("x"), sym("y")});
  const auto p = empirical({{sym("x"), 2}, {sym("y"), 2}}, u);
  EXPECT_EQ(p.probabilities(), Eigen::Vector2d(0.5, 0.5));
}

TEST(Empirical, PointMassOnJointSupport) {
  const auto u = std::make_shared<const JointSupport>(
      std::vector{sym("x"), sym("y")});
  const auto p = empirical({{sym("x"), 3}}, u);
  EXPECT_EQ(p.probabilities(), Eigen::Vector2d(1.0, 0.0));
}

TEST(Empirical, DirectDivision) {
  const auto u = std::make_shared<const JointSupport>(
      std::vector{sym("x"), sym("y"), sym("z")});
  const auto p = empirical({{sym("x"), 1}, {sym("y"), 2}, {sym("z"), 3}}, u);
  EXPECT_EQ(p[0], 1.0 / 6);
  EXPECT_EQ(p[1], 2.0 / 6);
  EXPECT_EQ(p[2], 3.0 / 6);
}

TEST(Empirical, SupportMismatch) {
  const auto u = std::make_shared<const JointSupport>(std::vector{sym("x")});
  try {
    (void)empirical({{sym("y"), 1}}, u);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SupportMismatch);
  }
}

TEST(Empirical, MatchesExactFractions) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> count(0, 9), len(1, 12);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = len(rng);
    SubtreeMultiset a;
    oracle::Counts exact;
    for (int i = 0; i < m; ++i) {
      const std::string name = "s" + std::to_string(i);
      const int c = count(rng) + (i == 0 ? 1 : 0);
      a.add(sym(name.c_str()), c);
      if (c > 0) exact[name] = c;
    }
    const auto u = joint_support(a, a);
    const auto p = empirical(a, u);
    const auto ex = oracle::exact_distributions(exact, exact).p;
    ASSERT_EQ(static_cast<std::size_t>(p.size()), ex.size());
    CompensatedSum<double> total;
    for (std::size_t i = 0; i < ex.size(); ++i) {
      // Within half an ulp of the exact c/n.
      const oracle::Rational err = abs(oracle::Rational(p[i]) - ex[i]);
      EXPECT_LE(err, ex[i] / oracle::Rational(std::uint64_t{1} << 53));
      total += p[i];
    }
    EXPECT_NEAR(total.value(), 1.0, kSumTolerance);
  }
}

TEST(Smooth, OnlyZeroEntriesLift) {
  const auto u = testing::indexed_support(2);
  const EmpiricalDistribution<> p(u, Eigen::Vector2d(1.0, 0.0));
  const auto q = smooth(p, 1e-12);
  EXPECT_EQ(q.probabilities(), Eigen::Vector2d(1.0, 1e-12));
  EXPECT_EQ(q.unsmoothed_probabilities(), Eigen::Vector2d(1.0, 0.0));
  EXPECT_TRUE(q.smoothed());
}

TEST(Smooth, NoEntryBelowEpsilon) {
  const auto u = testing::indexed_support(2);
  const EmpiricalDistribution<> p(u, Eigen::Vector2d(0.5, 0.5));
  EXPECT_EQ(smooth(p, 1e-12).probabilities(), Eigen::Vector2d(0.5, 0.5));
}

TEST(Smooth, MaxRuleWithoutRenormalisation) {
  const auto u = testing::indexed_support(4);
  const EmpiricalDistribution<> p(u, Eigen::Vector4d(0.9, 0.1, 0.0, 0.0));
  const auto q = smooth(p, 1e-6);
  EXPECT_EQ(q.probabilities(), Eigen::Vector4d(0.9, 0.1, 1e-6, 1e-6));
  EXPECT_NEAR(q.probabilities().sum(), 1 + 2e-6, 1e-15);
}

TEST(Smooth, Renormalise) {
  const auto u = testing::indexed_support(4);
  const EmpiricalDistribution<> p(u, Eigen::Vector4d(0.9, 0.1, 0.0, 0.0));
  const auto q = smooth(p, 1e-6, {.renormalize = true});
  EXPECT_NEAR(q.probabilities().sum(), 1.0, 1e-15);
  EXPECT_GT(q[2], 0.0);
  // Nothing lifted: left untouched.
  const EmpiricalDistribution<> full(u, Eigen::Vector4d(0.25, 0.25, 0.25, 0.25));
  EXPECT_EQ(smooth(full, 1e-6, {.renormalize = true}).probabilities(),
            full.probabilities());
}

TEST(Smooth, Idempotent) {
  std::mt19937_64 rng(5);
  const auto u = testing::indexed_support(10);
  for (int i = 0; i < 100; ++i) {
    const EmpiricalDistribution<> p(u, testing::random_distribution(rng, 10, 0.4));
    const auto once = smooth(p, 1e-9);
    const EmpiricalDistribution<> again(u, once.probabilities());
    EXPECT_EQ(smooth(again, 1e-9).probabilities(), once.probabilities());
  }
}

TEST(Smooth, InvalidEpsilon) {
  const auto u = testing::indexed_support(2);
  const EmpiricalDistribution<> p(u, Eigen::Vector2d(1.0, 0.0));
  for (double eps : {0.0, -1e-12, std::nan("")}) {
    try {
      (void)smooth(p, eps);
      ADD_FAILURE() << eps;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidEpsilon);
    }
  }
}

TEST(Distribution, LengthMustMatchSupport) {
  EXPECT_THROW(EmpiricalDistribution<>(testing::indexed_support(3),
                                       Eigen::Vector2d(0.5, 0.5)),
               Error);
}

TEST(Distribution, LongDoubleInstantiation) {
  const auto u = std::make_shared<const JointSupport>(
      std::vector{sym("x"), sym("y"), sym("z")});
  const auto p =
      empirical<long double>({{sym("x"), 1}, {sym("z"), 2}}, u);
  EXPECT_EQ(p[1], 0.0L);
  EXPECT_EQ(p[2], 2.0L / 3.0L);
}

}  // namespace
}  // namespace codestab
