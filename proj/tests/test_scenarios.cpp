#include <gtest/gtest.h>

#include "support/corpus.hpp"

using namespace sociallearn;

namespace {

const Rational kHalf(1, 2);
const Prior kEven(kHalf);
const auto first = TieBreakPolicy::first_in_action_order();

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InternalDisagreement;  // nothing thrown
}

}  // namespace

TEST(Example1, OracleMatchesEngine) {
  const auto b = example1(Rational(2, 5), Rational(1, 5), Rational(3, 5), Rational(7, 10));
  EXPECT_EQ(b.oracle_series("V_pi")[1], Rational(63, 500));
  EXPECT_EQ(b.oracle_series("V_piprime")[1], Rational(68, 500));
  const auto v = compute_equilibrium(b.problem, b.pi, b.prior, 8, first).values;
  const auto w = compute_equilibrium(b.problem, b.pi_prime, b.prior, 8, first).values;
  EXPECT_EQ(v, b.oracle_series("V_pi"));
  // Agent 1 sees no history, so the closed form starts at agent 2.
  for (std::size_t i = 2; i <= 8; ++i) EXPECT_EQ(w[i - 1], b.oracle_series("V_piprime")[i - 1]);
  for (std::size_t i = 2; i <= 8; ++i) EXPECT_GT(w[i - 1], v[i - 1]);
}

TEST(Example1, ParameterChecks) {
  EXPECT_EQ(code_of([] { example1(Rational(2, 5), Rational(1, 5), Rational(3, 5), Rational(1, 2)); }),
            ErrorCode::ParameterViolation);
  EXPECT_EQ(code_of([] { example1(Rational(1, 5), Rational(2, 5), Rational(3, 5), Rational(7, 10)); }),
            ErrorCode::ParameterViolation);
}

TEST(Example1, RandomValidParametersSeparate) {
  corpus::Generator g;
  int built = 0;
  for (int t = 0; t < 200 && built < 20; ++t) {
    std::vector<Rational> v{g.interior(), g.interior(), g.interior()};
    std::sort(v.begin(), v.end());
    if (v[0] == v[1] || v[1] == v[2]) continue;
    const Rational &delta = v[0], &eps = v[1], &eps_prime = v[2];
    // r strictly inside the admissible window.
    const Rational lo = eps / (eps + delta);
    const Rational hi = min(eps_prime / (eps_prime + delta), eps * eps / (eps * eps + delta * delta));
    const auto b = example1(eps, delta, eps_prime, midpoint(lo, hi), kEven, 5);
    ++built;
    const auto x = compute_equilibrium(b.problem, b.pi, b.prior, 5, first).values;
    const auto y = compute_equilibrium(b.problem, b.pi_prime, b.prior, 5, first).values;
    EXPECT_EQ(x, b.oracle_series("V_pi"));
    for (std::size_t i = 2; i <= 5; ++i) {
      EXPECT_EQ(y[i - 1], b.oracle_series("V_piprime")[i - 1]);
      EXPECT_GT(y[i - 1] - x[i - 1], Rational(0));
    }
  }
  EXPECT_EQ(built, 20);
}

TEST(Example2, Oracles) {
  const auto b = example2(Rational(1, 2), Rational(1, 10), Rational(3, 5), Rational(1, 5));
  EXPECT_EQ(b.parameters.at("x"), Rational(5, 6));
  EXPECT_EQ(b.oracle_series("V_pi_safe_tiebreak"), std::vector<Rational>{Rational(1, 16)});
  EXPECT_EQ(b.oracle_series("V_piprime_revealing"), std::vector<Rational>{Rational(1, 15)});
  EXPECT_EQ(compute_equilibrium(b.problem, b.pi, b.prior, 2, first).values[1], Rational(1, 16));
  EXPECT_EQ(observable_signal_value(b.problem, b.pi_prime, b.prior, 2)[1], Rational(1, 15));
}

TEST(Example2, SwappedDeltasRejected) {
  EXPECT_EQ(code_of([] { example2(Rational(1, 2), Rational(1, 5), Rational(3, 5), Rational(1, 10)); }),
            ErrorCode::ParameterViolation);
}

TEST(CascadeOracle, Example1AndAgentOne) {
  const auto b = example1(Rational(2, 5), Rational(1, 5), Rational(3, 5), Rational(7, 10));
  const auto v = compute_equilibrium(b.problem, b.pi, b.prior, 6, first).values;
  for (std::size_t i = 1; i <= 6; ++i) EXPECT_EQ(cascade_value_oracle(b.problem, b.pi, b.prior, i), v[i - 1]);
}

TEST(CascadeOracle, SafeAlsoBestAtOne) {
  // a0 is best everywhere, so the value is its expected payoff.
  const DecisionProblem d({"a0", "a1"}, {Rational(1), Rational(-1)}, {Rational(2), Rational(1)});
  const auto b = example1(Rational(2, 5), Rational(1, 5), Rational(3, 5), Rational(7, 10));
  EXPECT_EQ(cascade_value_oracle(d, b.pi, kEven, 3), Rational(3, 2));
}

TEST(CascadeOracle, HypothesisViolated) {
  const auto b = example1(Rational(2, 5), Rational(1, 5), Rational(3, 5), Rational(7, 10));
  EXPECT_EQ(code_of([&] { cascade_value_oracle(threshold_problem(Rational(1, 2)), b.pi, kEven, 2); }),
            ErrorCode::HypothesisViolated);
}

TEST(ThreeSupportOracle, MatchingProblem) {
  const DecisionProblem match({"guess_L", "guess_H"}, {1, 0}, {0, 1});
  EXPECT_EQ(three_support_value_oracle(match, kHalf, kEven, 2), Rational(7, 8));
  const auto d = threshold_problem(Rational(3, 10));
  EXPECT_EQ(three_support_value_oracle(d, Rational(1), Prior(Rational(2, 5)), 3), optimal_value(d, Rational(2, 5)));
  EXPECT_EQ(three_support_value_oracle(d, Rational(0), Prior(Rational(2, 5)), 3),
            Rational(2, 5) * optimal_value(d, Rational(1)) + Rational(3, 5) * optimal_value(d, Rational(0)));
}

TEST(Imitation, ParametersAndValues) {
  const InformationStructure pi({"s0", "s1", "s2"}, {Rational(17, 20), 0, Rational(3, 20)},
                                {0, Rational(9, 10), Rational(1, 10)});
  const auto d = threshold_problem(Rational(2, 5));
  const auto q = imitation_parameters(d, pi, Rational(3, 20), kEven);
  EXPECT_EQ(q.q_L, Rational(1));
  EXPECT_EQ(q.q_H, Rational(17, 18));
  const auto prof = imitation_profile(d, pi, Rational(3, 20), kEven, 5);
  const auto v = evaluate_profile(d, pi, kEven, prof).values;
  for (std::size_t i = 1; i <= 5; ++i) {
    EXPECT_EQ(v[i - 1], three_support_value_oracle(d, Rational(3, 20), kEven, i));
    EXPECT_EQ(v[i - 1], corpus::brute_value(d, pi, kEven, prof, i));
  }
  EXPECT_EQ(code_of([&] { imitation_parameters(d, pi, Rational(1, 20), kEven); }), ErrorCode::HypothesisViolated);
}

TEST(Imitation, OnMixtureItselfIsPure) {
  const auto mix = full_no_mixture(Rational(1, 4));
  const auto q = imitation_parameters(threshold_problem(kHalf), mix, Rational(1, 4), kEven);
  EXPECT_EQ(q.q_L, Rational(1));
  EXPECT_EQ(q.q_H, Rational(1));
}

TEST(Hybrid, EndpointsAndChain) {
  corpus::Generator g;
  int checked = 0;
  for (int t = 0; t < 40; ++t) {
    const auto pi = g.conclusive_experiment(Rational(1, 2), Rational(1, 2));
    const Rational p = Rational(1) - corpus::conclusive_floor(pi);
    const auto d = g.problem();
    const Prior prior = g.prior();
    const std::size_t n = 4;
    const auto eq = compute_equilibrium(d, pi, prior, n, first);
    const auto imit = imitation_profile(d, pi, p, prior, n);
    EXPECT_EQ(evaluate_profile(d, pi, prior, hybrid_profile(eq.profile, imit, 0)).values,
              evaluate_profile(d, pi, prior, imit).values);
    EXPECT_EQ(evaluate_profile(d, pi, prior, hybrid_profile(eq.profile, imit, n)).values, eq.values);
    std::vector<std::vector<Rational>> chain;
    for (std::size_t k = 0; k <= n; ++k) {
      chain.push_back(evaluate_profile(d, pi, prior, hybrid_profile(eq.profile, imit, k)).values);
    }
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) EXPECT_GE(chain[k + 1][i], chain[k][i]);
    }
    ++checked;
  }
  EXPECT_EQ(checked, 40);
}

TEST(Hybrid, ShapeMismatch) {
  const StrategyProfile a(3, 2, 2), b(2, 2, 2);
  EXPECT_EQ(code_of([&] { hybrid_profile(a, b, 1); }), ErrorCode::ShapeMismatch);
}

TEST(Revealing, ThresholdWithThreeSignals) {
  const auto pi_prime = InformationStructure({"s0", "s1", "s2"}, {Rational(4, 5), 0, Rational(1, 5)},
                                             {0, Rational(2, 5), Rational(3, 5)});
  const auto d = threshold_problem(Rational(7, 10));
  const auto aug = augment_revealing(d, pi_prime.signals());
  EXPECT_EQ(aug.problem.size(), 6u);
  const auto prof = aug.revealing_profile(pi_prime, kEven, 4);
  EXPECT_TRUE(verify_equilibrium(aug.problem, pi_prime, kEven, prof).ok);
  EXPECT_EQ(evaluate_profile(aug.problem, pi_prime, kEven, prof).values,
            observable_signal_value(d, pi_prime, kEven, 4));
}

TEST(Revealing, SingleLabelIsIsomorphic) {
  const auto d = threshold_problem(Rational(3, 10));
  const auto aug = augment_revealing(d, {"only"});
  ASSERT_EQ(aug.problem.size(), d.size());
  for (std::size_t a = 0; a < d.size(); ++a) {
    EXPECT_EQ(aug.problem.payoff(a, State::L), d.payoff(a, State::L));
    EXPECT_EQ(aug.problem.payoff(a, State::H), d.payoff(a, State::H));
  }
  EXPECT_EQ(code_of([&] { augment_revealing(d, {}); }), ErrorCode::InvalidArgument);
}
