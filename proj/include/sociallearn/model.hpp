#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sociallearn/error.hpp"
#include "sociallearn/rational.hpp"

namespace sociallearn {

enum class State { L, H };

inline constexpr std::size_t state_index(State s) { return s == State::L ? 0 : 1; }

/// Prior probability of the high state. Strictly between 0 and 1.
class Prior {
 public:
  explicit Prior(Rational mu0) : mu0_(std::move(mu0)) {
    require(Rational(0) < mu0_ && mu0_ < Rational(1), ErrorCode::InvalidArgument,
            "prior must lie strictly between 0 and 1, got " + mu0_.str());
  }

  const Rational& mu0() const noexcept { return mu0_; }
  /// mu0 / (1 - mu0)
  Rational odds() const { return mu0_ / (Rational(1) - mu0_); }
  /// The same prior seen from the other state.
  Prior mirrored() const { return Prior(Rational(1) - mu0_); }

  friend bool operator==(const Prior&, const Prior&) = default;

 private:
  Rational mu0_;
};

/// A finite experiment: one likelihood row per state over a shared signal set.
///
/// Signals with zero probability in both states are dropped at construction,
/// so every stored signal is reachable in at least one state.
class InformationStructure {
 public:
  InformationStructure(std::vector<std::string> signals, std::vector<Rational> likelihood_L,
                       std::vector<Rational> likelihood_H) {
    require(!signals.empty(), ErrorCode::InvalidArgument, "experiment needs at least one signal");
    require(signals.size() == likelihood_L.size() && signals.size() == likelihood_H.size(),
            ErrorCode::InvalidArgument, "likelihood rows must have one entry per signal");
    Rational sum_L, sum_H;
    std::set<std::string> seen;
    for (std::size_t s = 0; s < signals.size(); ++s) {
      require(seen.insert(signals[s]).second, ErrorCode::InvalidArgument, "duplicate signal label '" + signals[s] + "'");
      require(likelihood_L[s].sign() >= 0 && likelihood_H[s].sign() >= 0, ErrorCode::InvalidArgument,
              "negative likelihood for signal '" + signals[s] + "'");
      sum_L += likelihood_L[s];
      sum_H += likelihood_H[s];
    }
    require(sum_L == Rational(1), ErrorCode::InvalidArgument, "likelihood row L sums to " + sum_L.str());
    require(sum_H == Rational(1), ErrorCode::InvalidArgument, "likelihood row H sums to " + sum_H.str());
    for (std::size_t s = 0; s < signals.size(); ++s) {
      if (likelihood_L[s].is_zero() && likelihood_H[s].is_zero()) continue;
      signals_.push_back(std::move(signals[s]));
      rows_[0].push_back(std::move(likelihood_L[s]));
      rows_[1].push_back(std::move(likelihood_H[s]));
    }
  }

  std::size_t size() const noexcept { return signals_.size(); }
  const std::vector<std::string>& signals() const noexcept { return signals_; }
  const std::string& label(std::size_t s) const { return signals_.at(s); }
  const std::vector<Rational>& row(State state) const { return rows_[state_index(state)]; }
  const Rational& likelihood(State state, std::size_t s) const { return rows_[state_index(state)].at(s); }

  std::optional<std::size_t> index_of(const std::string& label) const {
    auto it = std::find(signals_.begin(), signals_.end(), label);
    if (it == signals_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - signals_.begin());
  }

  /// Swaps the roles of the two states.
  InformationStructure mirrored() const { return InformationStructure(signals_, rows_[1], rows_[0]); }

  static InformationStructure no_information() { return InformationStructure({"s"}, {Rational(1)}, {Rational(1)}); }

  static InformationStructure full_information() {
    return InformationStructure({"sL", "sH"}, {Rational(1), Rational(0)}, {Rational(0), Rational(1)});
  }

  /// Two signals; the matching one occurs with probability `accuracy` in each state.
  static InformationStructure binary_symmetric(const Rational& accuracy) {
    return InformationStructure({"l", "h"}, {accuracy, Rational(1) - accuracy}, {Rational(1) - accuracy, accuracy});
  }

  friend bool operator==(const InformationStructure&, const InformationStructure&) = default;

 private:
  std::vector<std::string> signals_;
  std::vector<Rational> rows_[2];
};

/// Finite action set with a payoff per (action, state).
class DecisionProblem {
 public:
  DecisionProblem(std::vector<std::string> actions, std::vector<Rational> payoff_L, std::vector<Rational> payoff_H)
      : actions_(std::move(actions)) {
    require(!actions_.empty(), ErrorCode::InvalidArgument, "decision problem needs at least one action");
    require(payoff_L.size() == actions_.size() && payoff_H.size() == actions_.size(), ErrorCode::InvalidArgument,
            "payoff table must have one entry per action and state");
    std::set<std::string> seen;
    for (const auto& a : actions_) {
      require(seen.insert(a).second, ErrorCode::InvalidArgument, "duplicate action label '" + a + "'");
    }
    payoff_[0] = std::move(payoff_L);
    payoff_[1] = std::move(payoff_H);
  }

  std::size_t size() const noexcept { return actions_.size(); }
  const std::vector<std::string>& actions() const noexcept { return actions_; }
  const std::string& label(std::size_t a) const { return actions_.at(a); }
  const Rational& payoff(std::size_t a, State state) const { return payoff_[state_index(state)].at(a); }
  const std::vector<Rational>& payoffs(State state) const { return payoff_[state_index(state)]; }

  std::size_t index_of(const std::string& label) const {
    auto it = std::find(actions_.begin(), actions_.end(), label);
    require(it != actions_.end(), ErrorCode::InvalidArgument, "unknown action '" + label + "'");
    return static_cast<std::size_t>(it - actions_.begin());
  }

  /// Expected payoff of action `a` at belief `belief` on the high state.
  Rational value(std::size_t a, const Rational& belief) const {
    return belief * payoff(a, State::H) + (Rational(1) - belief) * payoff(a, State::L);
  }

  DecisionProblem mirrored() const { return DecisionProblem(actions_, payoff_[1], payoff_[0]); }

  friend bool operator==(const DecisionProblem&, const DecisionProblem&) = default;

 private:
  std::vector<std::string> actions_;
  std::vector<Rational> payoff_[2];
};

struct BeliefAtom {
  Rational belief;
  Rational prob;

  friend bool operator==(const BeliefAtom&, const BeliefAtom&) = default;
};

/// Finite law over beliefs. Atoms are sorted by belief, merged on exact
/// equality and zero-probability atoms are dropped.
class BeliefDistribution {
 public:
  explicit BeliefDistribution(const std::vector<BeliefAtom>& atoms) {
    std::map<Rational, Rational> merged;
    Rational total;
    for (const auto& atom : atoms) {
      require(atom.belief.sign() >= 0 && atom.belief <= Rational(1), ErrorCode::InvalidArgument,
              "belief outside [0,1]: " + atom.belief.str());
      require(atom.prob.sign() >= 0, ErrorCode::InvalidArgument, "negative atom probability");
      total += atom.prob;
      if (!atom.prob.is_zero()) merged[atom.belief] += atom.prob;
    }
    require(total == Rational(1), ErrorCode::InvalidArgument, "atom probabilities sum to " + total.str());
    atoms_.reserve(merged.size());
    for (auto& [belief, prob] : merged) atoms_.push_back({belief, prob});
  }

  const std::vector<BeliefAtom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }

  Rational mean() const {
    Rational m;
    for (const auto& a : atoms_) m += a.prob * a.belief;
    return m;
  }

  bool contains(const Rational& belief) const {
    return std::any_of(atoms_.begin(), atoms_.end(), [&](const BeliefAtom& a) { return a.belief == belief; });
  }

  std::vector<Rational> support() const {
    std::vector<Rational> out;
    for (const auto& a : atoms_) out.push_back(a.belief);
    return out;
  }

  friend bool operator==(const BeliefDistribution&, const BeliefDistribution&) = default;

 private:
  std::vector<BeliefAtom> atoms_;
};

/// Signals that induce the same private belief, with their pooled likelihoods.
struct SignalGroup {
  Rational belief;
  std::vector<std::size_t> signals;
  Rational mass_L;
  Rational mass_H;
};

struct PrivateBeliefSummary {
  BeliefDistribution distribution;
  Rational conclusive_L_mass;  // pi(mu = 0 | L)
  Rational conclusive_H_mass;  // pi(mu = 1 | H)
  std::vector<SignalGroup> signal_groups;  // sorted by belief
  std::vector<Rational> signal_belief;     // indexed by signal

  const SignalGroup* group_at(const Rational& belief) const {
    for (const auto& g : signal_groups) {
      if (g.belief == belief) return &g;
    }
    return nullptr;
  }
};

/// Posterior on H from a public belief x and a private belief y, both formed
/// from the same prior:  xy / (xy + odds(mu0) (1-x)(1-y)).
inline Rational posterior_update(const Rational& public_belief, const Rational& private_belief, const Prior& prior) {
  const Rational zero(0), one(1);
  require(public_belief >= zero && public_belief <= one && private_belief >= zero && private_belief <= one,
          ErrorCode::InvalidArgument, "beliefs must lie in [0,1]");
  const Rational numerator = public_belief * private_belief;
  const Rational denominator = numerator + prior.odds() * (one - public_belief) * (one - private_belief);
  if (denominator.is_zero()) {
    throw Error(ErrorCode::IndeterminatePosterior,
                "contradictory conclusive beliefs " + public_belief.str() + " and " + private_belief.str());
  }
  if (numerator.is_zero()) return zero;
  return numerator / denominator;
}

/// Belief on H after observing likelihoods (lik_H, lik_L) from the prior.
inline Rational belief_from_likelihoods(const Rational& lik_H, const Rational& lik_L, const Prior& prior) {
  const Rational weight_H = prior.mu0() * lik_H;
  const Rational total = weight_H + (Rational(1) - prior.mu0()) * lik_L;
  require(!total.is_zero(), ErrorCode::IndeterminatePosterior, "zero-probability observation");
  return weight_H / total;
}

inline PrivateBeliefSummary private_belief_distribution(const InformationStructure& pi, const Prior& prior) {
  std::map<Rational, SignalGroup> groups;
  std::vector<Rational> signal_belief(pi.size());
  for (std::size_t s = 0; s < pi.size(); ++s) {
    const Rational belief = belief_from_likelihoods(pi.likelihood(State::H, s), pi.likelihood(State::L, s), prior);
    signal_belief[s] = belief;
    auto& g = groups[belief];
    g.belief = belief;
    g.signals.push_back(s);
    g.mass_L += pi.likelihood(State::L, s);
    g.mass_H += pi.likelihood(State::H, s);
  }
  std::vector<BeliefAtom> atoms;
  std::vector<SignalGroup> ordered;
  Rational conclusive_L, conclusive_H;
  for (auto& [belief, g] : groups) {
    atoms.push_back({belief, prior.mu0() * g.mass_H + (Rational(1) - prior.mu0()) * g.mass_L});
    if (belief.is_zero()) conclusive_L = g.mass_L;
    if (belief == Rational(1)) conclusive_H = g.mass_H;
    ordered.push_back(std::move(g));
  }
  return PrivateBeliefSummary{BeliefDistribution(atoms), conclusive_L, conclusive_H, std::move(ordered),
                              std::move(signal_belief)};
}

/// Conditionally independent joint experiment. Labels are "s,t".
inline InformationStructure product(const InformationStructure& pi, const InformationStructure& rho) {
  std::vector<std::string> labels;
  std::vector<Rational> row_L, row_H;
  labels.reserve(pi.size() * rho.size());
  for (std::size_t s = 0; s < pi.size(); ++s) {
    for (std::size_t t = 0; t < rho.size(); ++t) {
      labels.push_back(pi.label(s) + "," + rho.label(t));
      row_L.push_back(pi.likelihood(State::L, s) * rho.likelihood(State::L, t));
      row_H.push_back(pi.likelihood(State::H, s) * rho.likelihood(State::H, t));
    }
  }
  return InformationStructure(std::move(labels), std::move(row_L), std::move(row_H));
}

inline constexpr std::size_t kDefaultAtomCap = 100000;

namespace detail {

inline mpz_class binomial(unsigned long n, unsigned long k) {
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

}  // namespace detail

/// Posterior law after n conditionally independent draws of `pi`.
///
/// Works over multisets of belief-group counts (multinomial compression), so
/// the cost is the number of compositions of n into the number of distinct
/// private beliefs, not |S|^n.
inline BeliefDistribution iid_power(const InformationStructure& pi, unsigned n, const Prior& prior,
                                    std::size_t atom_cap = kDefaultAtomCap) {
  require(n >= 1, ErrorCode::InvalidArgument, "iid_power needs n >= 1");
  const auto summary = private_belief_distribution(pi, prior);
  const auto& groups = summary.signal_groups;
  const std::size_t g_count = groups.size();

  const mpz_class compositions = detail::binomial(n + g_count - 1, g_count - 1);
  if (compositions > mpz_class(static_cast<unsigned long>(atom_cap))) {
    throw Error(ErrorCode::ResourceLimit,
                "iid_power would produce " + compositions.get_str() + " candidate atoms (cap " + std::to_string(atom_cap) + ")");
  }

  // powers[g][k] = (mass_L^k, mass_H^k)
  std::vector<std::vector<std::pair<Rational, Rational>>> powers(g_count);
  for (std::size_t g = 0; g < g_count; ++g) {
    powers[g].reserve(n + 1);
    powers[g].emplace_back(Rational(1), Rational(1));
    for (unsigned k = 1; k <= n; ++k) {
      const auto& prev = powers[g].back();
      powers[g].emplace_back(prev.first * groups[g].mass_L, prev.second * groups[g].mass_H);
    }
  }

  std::vector<BeliefAtom> atoms;
  const Rational& mu0 = prior.mu0();
  const Rational one_minus_mu0 = Rational(1) - mu0;

  // Depth-first over compositions; the multinomial coefficient is built as a
  // product of binomials while descending.
  auto visit = [&](auto&& self, std::size_t g, unsigned remaining, const mpz_class& coefficient,
                   const Rational& lik_L, const Rational& lik_H) -> void {
    if (g + 1 == g_count) {
      const Rational full_L = lik_L * powers[g][remaining].first;
      const Rational full_H = lik_H * powers[g][remaining].second;
      const Rational coef{mpq_class(coefficient)};
      const Rational weight_H = mu0 * full_H * coef;
      const Rational prob = weight_H + one_minus_mu0 * full_L * coef;
      if (!prob.is_zero()) atoms.push_back({weight_H / prob, prob});
      return;
    }
    for (unsigned k = 0; k <= remaining; ++k) {
      self(self, g + 1, remaining - k, coefficient * detail::binomial(remaining, k), lik_L * powers[g][k].first,
           lik_H * powers[g][k].second);
    }
  };
  visit(visit, 0, n, mpz_class(1), Rational(1), Rational(1));
  return BeliefDistribution(atoms);
}

struct Classification {
  bool is_no_information = false;
  bool is_full_information = false;
  bool has_unbounded_beliefs = false;
  /// Support inside {0, mu0, 1}.
  bool is_full_no_mixture = false;
  /// pi(mu = mu0 | .) when is_full_no_mixture holds.
  std::optional<Rational> mixture_weight;
};

inline Classification classify(const InformationStructure& pi, const Prior& prior) {
  const auto summary = private_belief_distribution(pi, prior);
  const auto& dist = summary.distribution;
  Classification c;
  const Rational zero(0), one(1);
  c.is_no_information = dist.size() == 1 && dist.atoms().front().belief == prior.mu0();
  c.is_full_information = dist.size() == 2 && dist.contains(zero) && dist.contains(one);
  c.has_unbounded_beliefs = dist.contains(zero) && dist.contains(one);
  c.is_full_no_mixture = std::all_of(dist.atoms().begin(), dist.atoms().end(), [&](const BeliefAtom& a) {
    return a.belief == zero || a.belief == one || a.belief == prior.mu0();
  });
  if (c.is_full_no_mixture) {
    const SignalGroup* g = summary.group_at(prior.mu0());
    c.mixture_weight = g ? g->mass_L : zero;
  }
  return c;
}

/// Maximal expected payoff at `belief`.
inline Rational optimal_value(const DecisionProblem& d, const Rational& belief) {
  Rational best = d.value(0, belief);
  for (std::size_t a = 1; a < d.size(); ++a) best = max(best, d.value(a, belief));
  return best;
}

/// Optimal actions at `belief`, in action-list order.
inline std::vector<std::size_t> best_response_set(const DecisionProblem& d, const Rational& belief) {
  require(belief.sign() >= 0 && belief <= Rational(1), ErrorCode::InvalidArgument, "belief outside [0,1]");
  const Rational best = optimal_value(d, belief);
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < d.size(); ++a) {
    if (d.value(a, belief) == best) out.push_back(a);
  }
  return out;
}

struct ClosedInterval {
  Rational lo;
  Rational hi;

  bool contains(const Rational& z) const { return lo <= z && z <= hi; }
  friend bool operator==(const ClosedInterval&, const ClosedInterval&) = default;
};

/// Beliefs at which `action` is optimal. Empty when the action is never optimal.
inline std::optional<ClosedInterval> best_action_interval(const DecisionProblem& d, std::size_t action) {
  require(action < d.size(), ErrorCode::InvalidArgument, "action index out of range");
  Rational lo(0), hi(1);
  for (std::size_t b = 0; b < d.size(); ++b) {
    if (b == action) continue;
    // (action - b) advantage at z is  dL + z (dH - dL)  and must be >= 0
    const Rational dL = d.payoff(action, State::L) - d.payoff(b, State::L);
    const Rational dH = d.payoff(action, State::H) - d.payoff(b, State::H);
    const Rational slope = dH - dL;
    if (slope.is_zero()) {
      if (dL.sign() < 0) return std::nullopt;
      continue;
    }
    const Rational root = -dL / slope;
    if (slope.sign() > 0) {
      lo = max(lo, root);
    } else {
      hi = min(hi, root);
    }
  }
  if (hi < lo) return std::nullopt;
  return ClosedInterval{lo, hi};
}

}  // namespace sociallearn
