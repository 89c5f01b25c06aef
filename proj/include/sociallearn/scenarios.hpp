#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "sociallearn/equilibrium.hpp"
#include "sociallearn/error.hpp"
#include "sociallearn/model.hpp"
#include "sociallearn/orders.hpp"
#include "sociallearn/rational.hpp"

namespace sociallearn {

struct OracleValue {
  std::string label;
  std::size_t agent = 0;
  Rational value;
};

/// A canned instance with its parameters and closed-form values.
struct ScenarioBundle {
  std::string name;
  InformationStructure pi;
  InformationStructure pi_prime;
  Prior prior;
  DecisionProblem problem;
  std::map<std::string, Rational> parameters;
  std::vector<OracleValue> oracle;

  std::vector<Rational> oracle_series(const std::string& label) const {
    std::vector<Rational> out;
    for (const auto& o : oracle) {
      if (o.label == label) out.push_back(o.value);
    }
    return out;
  }
};

/// Three signals: s0 conclusive for L, s1 conclusive for H, s2 seen with
/// probability `miss_H` in H and `miss_L` in L.
inline InformationStructure two_sided_experiment(const Rational& miss_H, const Rational& miss_L,
                                                 const std::vector<std::string>& labels = {"s0", "s1", "s2"}) {
  const Rational one(1), zero(0);
  return InformationStructure(labels, {one - miss_L, zero, miss_L}, {zero, one - miss_H, miss_H});
}

inline ScenarioBundle example1(const Rational& eps, const Rational& delta, const Rational& eps_prime,
                               const Rational& r, const Prior& prior = Prior(Rational(1, 2)),
                               std::size_t horizon = 8) {
  const Rational one(1);
  const Rational& mu0 = prior.mu0();
  require(delta.sign() > 0 && delta < eps && eps < eps_prime && eps_prime < one, ErrorCode::ParameterViolation,
          "need 0 < delta < eps < eps' < 1");
  const Rational lo = mu0 * eps / (mu0 * eps + (one - mu0) * delta);
  const Rational hi1 = mu0 * eps_prime / (mu0 * eps_prime + (one - mu0) * delta);
  const Rational hi2 = mu0 * eps * eps / (mu0 * eps * eps + (one - mu0) * delta * delta);
  require(lo < r && r < min(hi1, hi2), ErrorCode::ParameterViolation,
          "r = " + r.str() + " outside (" + lo.str() + ", " + min(hi1, hi2).str() + ")");
  ScenarioBundle b{"example1",
                   two_sided_experiment(eps, delta),
                   two_sided_experiment(eps_prime, delta),
                   prior,
                   threshold_problem(r),
                   {{"eps", eps}, {"delta", delta}, {"eps_prime", eps_prime}, {"r", r}, {"mu0", mu0}},
                   {}};
  for (std::size_t i = 1; i <= horizon; ++i) {
    const auto n = static_cast<unsigned>(i);
    b.oracle.push_back({"V_pi", i, mu0 * (one - pow(eps, n)) * (one - r)});
    b.oracle.push_back({"V_piprime", i, mu0 * (one - r) - (one - mu0) * pow(delta, n) * r});
  }
  return b;
}

inline ScenarioBundle example2(const Rational& eps, const Rational& delta, const Rational& eps_prime,
                               const Rational& delta_prime) {
  const Rational one(1), zero(0), half(1, 2);
  require(delta.sign() > 0 && delta < delta_prime && delta_prime < eps && eps < eps_prime && eps_prime < one,
          ErrorCode::ParameterViolation, "need 0 < delta < delta' < eps < eps' < 1");
  const Rational x = eps / (eps + delta);
  const Rational low = eps_prime / (eps_prime + delta_prime);
  const Rational high = eps_prime * eps_prime / (eps_prime * eps_prime + delta_prime * delta_prime);
  require(low < x && x < high, ErrorCode::ParameterViolation,
          "need " + low.str() + " < x = " + x.str() + " < " + high.str());
  ScenarioBundle b{"example2",
                   two_sided_experiment(eps, delta),
                   two_sided_experiment(eps_prime, delta_prime),
                   Prior(half),
                   DecisionProblem({"a0", "a1", "a2"}, {zero, -x, zero}, {zero, one - x, zero}),
                   {{"eps", eps}, {"delta", delta}, {"eps_prime", eps_prime}, {"delta_prime", delta_prime}, {"x", x}},
                   {}};
  b.oracle.push_back({"V_pi_safe_tiebreak", 2, (one - eps * eps) * (one - x) / 2});
  b.oracle.push_back({"V_piprime_revealing", 2, (one - x) / 2 - delta_prime * delta_prime * x / 2});
  return b;
}

/// Closed-form equilibrium value when private beliefs never exceed x (short
/// of 1) and the safe action is the unique best response on [0, x].
inline Rational cascade_value_oracle(const DecisionProblem& d, const InformationStructure& pi, const Prior& prior,
                                     std::size_t agent) {
  require(agent >= 1, ErrorCode::InvalidArgument, "agent index starts at 1");
  const auto summary = private_belief_distribution(pi, prior);
  const Rational one(1);
  Rational x = prior.mu0();
  for (const auto& z : summary.distribution.support()) {
    if (z < one) x = max(x, z);
  }
  const auto br0 = best_response_set(d, Rational(0));
  require(br0.size() == 1 && best_response_set(d, x) == br0, ErrorCode::HypothesisViolated,
          "safe action is not the unique best response on [0, " + x.str() + "]");
  const std::size_t a0 = br0.front();
  const std::size_t a1 = best_response_set(d, one).front();
  const Rational p = one - summary.conclusive_H_mass;
  const Rational pn = pow(p, static_cast<unsigned>(agent));
  const Rational& mu0 = prior.mu0();
  return mu0 * ((one - pn) * d.payoff(a1, State::H) + pn * d.payoff(a0, State::H)) +
         (one - mu0) * d.payoff(a0, State::L);
}

/// Benchmark value under a full/no-information mixture with weight p.
inline Rational three_support_value_oracle(const DecisionProblem& d, const Rational& p, const Prior& prior,
                                           std::size_t agent) {
  require(p.sign() >= 0 && p <= Rational(1), ErrorCode::InvalidArgument, "mixture weight outside [0,1]");
  const Rational one(1);
  const Rational pn = pow(p, static_cast<unsigned>(agent));
  const Rational& mu0 = prior.mu0();
  return mu0 * (one - pn) * optimal_value(d, one) + (one - mu0) * (one - pn) * optimal_value(d, Rational(0)) +
         pn * optimal_value(d, mu0);
}

struct ImitationParameters {
  Rational q_L;
  Rational q_H;
  std::size_t safe = 0;     // best at belief 0
  std::size_t risky = 0;    // best at belief 1
  std::size_t neutral = 0;  // best at the prior
};

inline ImitationParameters imitation_parameters(const DecisionProblem& d, const InformationStructure& pi,
                                                const Rational& p, const Prior& prior) {
  const auto summary = private_belief_distribution(pi, prior);
  const Rational one(1);
  const Rational reveal = one - p;
  require(min(summary.conclusive_L_mass, summary.conclusive_H_mass) >= reveal, ErrorCode::HypothesisViolated,
          "conclusive masses of pi fall below 1 - p = " + reveal.str());
  auto ratio = [&](const Rational& mass) { return reveal.is_zero() ? Rational(0) : reveal / mass; };
  return {ratio(summary.conclusive_L_mass), ratio(summary.conclusive_H_mass),
          best_response_set(d, Rational(0)).front(), best_response_set(d, one).front(),
          best_response_set(d, prior.mu0()).front()};
}

/// Agents act on a conclusive signal with probabilities q_L, q_H and
/// otherwise repeat the previous action (agent 1 falls back to the action
/// best at the prior). Payoffs match the benchmark of the mixture with weight p.
inline StrategyProfile imitation_profile(const DecisionProblem& d, const InformationStructure& pi, const Rational& p,
                                         const Prior& prior, std::size_t horizon) {
  const auto params = imitation_parameters(d, pi, p, prior);
  const auto summary = private_belief_distribution(pi, prior);
  const std::vector<Rational> beliefs = summary.signal_belief;
  const std::size_t nA = d.size(), nS = pi.size();
  auto rule = [=](const History& h) {
    const std::size_t fallback = h.empty() ? params.neutral : h.back();
    const Rational one(1);
    Decision dec(nS, ActionDistribution(nA));
    for (std::size_t s = 0; s < nS; ++s) {
      auto& dist = dec[s];
      if (beliefs[s].is_zero()) {
        dist[params.safe] += params.q_L;
        dist[fallback] += one - params.q_L;
      } else if (beliefs[s] == one) {
        dist[params.risky] += params.q_H;
        dist[fallback] += one - params.q_H;
      } else {
        dist[fallback] += one;
      }
    }
    return dec;
  };
  return StrategyProfile(horizon, nS, nA, rule);
}

/// Agents 1..k follow `equilibrium`, later agents follow `imitation`.
inline StrategyProfile hybrid_profile(const StrategyProfile& equilibrium, const StrategyProfile& imitation,
                                      std::size_t k) {
  require(equilibrium.horizon() == imitation.horizon() && equilibrium.num_signals() == imitation.num_signals() &&
              equilibrium.num_actions() == imitation.num_actions(),
          ErrorCode::ShapeMismatch, "hybrid needs two profiles of the same shape");
  require(k <= equilibrium.horizon(), ErrorCode::ShapeMismatch, "switch point beyond the horizon");
  auto head = std::make_shared<const StrategyProfile>(equilibrium);
  auto tail = std::make_shared<const StrategyProfile>(imitation);
  auto rule = [head, tail, k](const History& h) {
    const auto& source = h.size() < k ? *head : *tail;
    return detail::require_decision(source, h);
  };
  return StrategyProfile(equilibrium.horizon(), equilibrium.num_signals(), equilibrium.num_actions(), rule);
}

/// Problem whose actions also carry a signal label, so play can reveal the
/// signal at no cost.
struct RevealingAugmentation {
  DecisionProblem problem;
  std::vector<std::string> labels;
  std::size_t base_actions = 0;

  std::size_t encode(std::size_t action, std::size_t label) const { return action * labels.size() + label; }
  std::size_t base_action(std::size_t augmented) const { return augmented / labels.size(); }
  std::size_t label_of(std::size_t augmented) const { return augmented % labels.size(); }

  /// Each agent plays the first best base action at the belief formed from
  /// the revealed signals, tagged with their own signal. `pi_prime` must use
  /// exactly `labels` as its signals.
  StrategyProfile revealing_profile(const InformationStructure& pi_prime, const Prior& prior,
                                    std::size_t horizon) const;
};

inline RevealingAugmentation augment_revealing(const DecisionProblem& d, const std::vector<std::string>& labels) {
  require(!labels.empty(), ErrorCode::InvalidArgument, "need at least one signal label");
  std::vector<std::string> actions;
  std::vector<Rational> pay_L, pay_H;
  for (std::size_t a = 0; a < d.size(); ++a) {
    for (const auto& k : labels) {
      actions.push_back(d.label(a) + "|" + k);
      pay_L.push_back(d.payoff(a, State::L));
      pay_H.push_back(d.payoff(a, State::H));
    }
  }
  return {DecisionProblem(std::move(actions), std::move(pay_L), std::move(pay_H)), labels, d.size()};
}

inline StrategyProfile RevealingAugmentation::revealing_profile(const InformationStructure& pi_prime,
                                                                const Prior& prior, std::size_t horizon) const {
  require(pi_prime.signals() == labels, ErrorCode::ShapeMismatch, "experiment signals differ from the labels");
  const auto summary = private_belief_distribution(pi_prime, prior);
  const RevealingAugmentation self = *this;
  const InformationStructure experiment = pi_prime;
  const std::vector<Rational> beliefs = summary.signal_belief;
  auto rule = [self, experiment, prior, beliefs](const History& h) {
    Rational lik_H(1), lik_L(1);
    for (auto a : h) {
      lik_H *= experiment.likelihood(State::H, self.label_of(a));
      lik_L *= experiment.likelihood(State::L, self.label_of(a));
    }
    const bool reachable = !(lik_H.is_zero() && lik_L.is_zero());
    const Rational public_belief = reachable ? belief_from_likelihoods(lik_H, lik_L, prior) : prior.mu0();
    const std::size_t nA = self.problem.size();
    Decision dec;
    for (std::size_t s = 0; s < experiment.size(); ++s) {
      const Rational mass = prior.mu0() * lik_H * experiment.likelihood(State::H, s) +
                            (Rational(1) - prior.mu0()) * lik_L * experiment.likelihood(State::L, s);
      const Rational belief = mass.is_zero() ? prior.mu0() : posterior_update(public_belief, beliefs[s], prior);
      const std::size_t pick = best_response_set(self.problem, belief).front();
      dec.push_back(pure_action(nA, self.encode(self.base_action(pick), s)));
    }
    return dec;
  };
  return StrategyProfile(horizon, experiment.size(), problem.size(), rule);
}

}  // namespace sociallearn
