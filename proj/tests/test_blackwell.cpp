#include <gtest/gtest.h>

#include "support/corpus.hpp"

using namespace sociallearn;

namespace {

const Rational kHalf(1, 2);

InformationStructure two_sided(const Rational& miss_H, const Rational& miss_L) {
  return InformationStructure({"s0", "s1", "s2"}, {1 - miss_L, 0, miss_L}, {0, 1 - miss_H, miss_H});
}

// Multiplies the kernel out by hand and compares with the target rows.
void expect_reproduces(const GarblingKernel& k, const InformationStructure& pi, const InformationStructure& target) {
  ASSERT_EQ(k.weights.size(), pi.size());
  for (const auto& row : k.weights) {
    Rational sum;
    for (const auto& w : row) {
      EXPECT_GE(w.sign(), 0);
      sum += w;
    }
    EXPECT_EQ(sum, Rational(1));
  }
  for (State w : {State::L, State::H}) {
    for (std::size_t t = 0; t < target.size(); ++t) {
      Rational v;
      for (std::size_t s = 0; s < pi.size(); ++s) v += pi.likelihood(w, s) * k.weights[s][t];
      EXPECT_EQ(v, target.likelihood(w, t));
    }
  }
}

}  // namespace

TEST(Roc, CurveEndpointsAndConcavity) {
  corpus::Generator g;
  for (int t = 0; t < 100; ++t) {
    const RocCurve c(g.experiment(4));
    const auto& v = c.vertices();
    EXPECT_EQ(v.front(), (RocVertex{0, 0}));
    EXPECT_EQ(v.back(), (RocVertex{1, 1}));
    for (std::size_t k = 1; k + 1 < v.size(); ++k) {
      // slope non-increasing
      const Rational dx1 = v[k].false_positive - v[k - 1].false_positive;
      const Rational dy1 = v[k].true_positive - v[k - 1].true_positive;
      const Rational dx2 = v[k + 1].false_positive - v[k].false_positive;
      const Rational dy2 = v[k + 1].true_positive - v[k].true_positive;
      EXPECT_GE(dy1 * dx2, dy2 * dx1);
    }
  }
}

TEST(Roc, TrivialComparisons) {
  corpus::Generator g;
  for (int t = 0; t < 50; ++t) {
    const auto pi = g.experiment();
    EXPECT_TRUE(roc_dominates(InformationStructure::full_information(), pi));
    EXPECT_TRUE(roc_dominates(pi, InformationStructure::no_information()));
  }
  EXPECT_FALSE(roc_dominates(InformationStructure::no_information(), InformationStructure::full_information()));
}

TEST(Blackwell, Example1PairAndReverse) {
  const auto pi = two_sided(Rational(2, 5), Rational(1, 5));
  const auto pi_prime = two_sided(Rational(3, 5), Rational(1, 5));
  EXPECT_TRUE(roc_dominates(pi, pi_prime));
  EXPECT_FALSE(roc_dominates(pi_prime, pi));
  EXPECT_TRUE(blackwell_geq(pi, pi_prime, Verification::On));
  EXPECT_FALSE(blackwell_geq(pi_prime, pi, Verification::On));
  EXPECT_FALSE(garbling_kernel(pi_prime, pi).has_value());

  const auto k = garbling_kernel(pi, pi_prime);
  ASSERT_TRUE(k.has_value());
  expect_reproduces(*k, pi, pi_prime);
  // The kernel is unique here: s1 splits 2/3 to s1 and 1/3 to s2.
  EXPECT_EQ(k->weights[1][1], Rational(2, 3));
  EXPECT_EQ(k->weights[1][2], Rational(1, 3));
  EXPECT_EQ(k->weights[0][0], Rational(1));
  EXPECT_EQ(k->weights[2][2], Rational(1));
}

TEST(Blackwell, IdentityAndInfeasible) {
  const auto pi = two_sided(Rational(2, 5), Rational(1, 5));
  const auto k = garbling_kernel(pi, pi);
  ASSERT_TRUE(k.has_value());
  expect_reproduces(*k, pi, pi);
  EXPECT_FALSE(
      garbling_kernel(InformationStructure::no_information(), InformationStructure::full_information()).has_value());
}

TEST(Blackwell, DecidersAgreeOnRandomPairs) {
  corpus::Generator g;
  int yes = 0, no = 0;
  for (int t = 0; t < 300; ++t) {
    const auto pi = g.experiment(4);
    const auto pi_prime = g.coin() ? g.garble(pi, 1 + g.index(4)) : g.experiment(4);
    const bool roc = roc_dominates(pi, pi_prime);
    const auto k = garbling_kernel(pi, pi_prime);
    ASSERT_EQ(roc, k.has_value()) << t;
    if (k) expect_reproduces(*k, pi, pi_prime);
    (roc ? yes : no)++;
  }
  EXPECT_GT(yes, 50);
  EXPECT_GT(no, 50);
}

TEST(Blackwell, ReflexiveAndTransitive) {
  corpus::Generator g;
  for (int t = 0; t < 120; ++t) {
    const auto a = g.experiment(3);
    const auto b = g.coin() ? g.garble(a, 3) : g.experiment(3);
    const auto c = g.coin() ? g.garble(b, 2) : g.experiment(3);
    EXPECT_TRUE(blackwell_geq(a, a));
    if (blackwell_geq(a, b) && blackwell_geq(b, c)) {
      EXPECT_TRUE(blackwell_geq(a, c, Verification::On));
    }
  }
}

TEST(Blackwell, ProductPreservesOrder) {
  corpus::Generator g;
  const auto pi = two_sided(Rational(2, 5), Rational(1, 5));
  const auto pi_prime = two_sided(Rational(3, 5), Rational(1, 5));
  EXPECT_TRUE(product_preserves_garbling_check(pi, pi_prime, InformationStructure::full_information(),
                                               InformationStructure::no_information()));
  for (int t = 0; t < 60; ++t) {
    const auto a = g.experiment(3), b = g.experiment(2);
    EXPECT_TRUE(product_preserves_garbling_check(a, g.garble(a, 2), b, g.garble(b, 2)));
    EXPECT_TRUE(product_preserves_garbling_check(a, a, b, b));
  }
  try {
    product_preserves_garbling_check(pi_prime, pi, pi, pi);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PreconditionViolated);
  }
}

TEST(Mixture, SeventeenTwentiethsAgainstSymmetric) {
  const InformationStructure pi({"s0", "s1", "s2"}, {Rational(17, 20), 0, Rational(3, 20)},
                                {0, Rational(9, 10), Rational(1, 10)});
  const auto sym = InformationStructure::binary_symmetric(Rational(2, 3));
  EXPECT_EQ(mixture_lower_side(sym), Rational(1, 3));
  EXPECT_EQ(mixture_upper_side(pi, Prior(kHalf)), Rational(17, 20));
  const auto m = mixture_exists(pi, sym, Prior(kHalf));
  ASSERT_TRUE(m.has_value());
  EXPECT_EQ(m->p, Rational(3, 20));
  EXPECT_EQ(m->p_max, Rational(2, 3));
  EXPECT_FALSE(m->degenerate);
  EXPECT_TRUE(garbling_kernel(pi, m->experiment).has_value());
  const auto k = three_point_garbling(*m, sym);
  expect_reproduces(k, m->experiment, sym);
}

TEST(Mixture, Example1PairHasNone) {
  const auto pi = two_sided(Rational(2, 5), Rational(1, 5));
  const auto pi_prime = two_sided(Rational(3, 5), Rational(1, 5));
  EXPECT_EQ(mixture_lower_side(pi_prime), Rational(4, 5));
  EXPECT_EQ(mixture_upper_side(pi, Prior(kHalf)), Rational(3, 5));
  EXPECT_FALSE(mixture_exists(pi, pi_prime, Prior(kHalf)).has_value());
}

TEST(Mixture, NoInformationTargetAlwaysWorks) {
  corpus::Generator g;
  for (int t = 0; t < 50; ++t) {
    const auto m = mixture_exists(g.experiment(), InformationStructure::no_information(), g.prior());
    ASSERT_TRUE(m.has_value());
    expect_reproduces(three_point_garbling(*m, InformationStructure::no_information()), m->experiment,
                      InformationStructure::no_information());
  }
}

TEST(Mixture, ThreePointKernelHalfFromPooledSignal) {
  MixtureExperiment m{Rational(2, 3), full_no_mixture(Rational(2, 3)), Rational(2, 3), Rational(2, 3), false};
  const auto sym = InformationStructure::binary_symmetric(Rational(2, 3));
  const auto k = three_point_garbling(m, sym);
  expect_reproduces(k, m.experiment, sym);
  EXPECT_EQ(k.weights[2][0], kHalf);
  EXPECT_EQ(k.weights[2][1], kHalf);
}

TEST(Mixture, FullInformationTarget) {
  const auto full = InformationStructure::full_information();
  const auto m = mixture_exists(full, full, Prior(kHalf));
  ASSERT_TRUE(m.has_value());
  EXPECT_TRUE(m->p.is_zero());
  EXPECT_TRUE(m->degenerate);
  expect_reproduces(three_point_garbling(*m, full), m->experiment, full);
}

TEST(Mixture, VerdictMatchesInequality) {
  corpus::Generator g;
  int some = 0, none = 0;
  for (int t = 0; t < 250; ++t) {
    const auto pi = g.coin() ? g.conclusive_experiment() : g.experiment(4);
    const auto pi_prime = g.coin() ? g.experiment(3) : g.garble(pi, 3);
    const Prior prior = g.prior();
    const bool holds = corpus::overlap_gap(pi_prime) <= corpus::conclusive_floor(pi);
    const auto m = mixture_exists(pi, pi_prime, prior);
    ASSERT_EQ(holds, m.has_value()) << t;
    if (m) {
      ++some;
      const auto up = garbling_kernel(pi, m->experiment);
      ASSERT_TRUE(up.has_value());
      expect_reproduces(*up, pi, m->experiment);
      expect_reproduces(three_point_garbling(*m, pi_prime), m->experiment, pi_prime);
    } else {
      ++none;
    }
  }
  EXPECT_GT(some, 30);
  EXPECT_GT(none, 30);
}
