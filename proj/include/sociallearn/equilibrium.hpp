#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sociallearn/error.hpp"
#include "sociallearn/model.hpp"
#include "sociallearn/rational.hpp"

namespace sociallearn {

/// Actions taken so far, as indices into the decision problem's action list.
using History = std::vector<std::size_t>;
/// Probability of each action.
using ActionDistribution = std::vector<Rational>;
/// One action distribution per signal: what the agent at a node does.
using Decision = std::vector<ActionDistribution>;

inline ActionDistribution pure_action(std::size_t num_actions, std::size_t action) {
  ActionDistribution out(num_actions);
  out.at(action) = Rational(1);
  return out;
}

struct Limits {
  std::size_t node_cap = 2'000'000;
  std::size_t atom_cap = kDefaultAtomCap;
  std::size_t enumeration_cap = 1000;
};

inline constexpr std::size_t kDefaultHorizon = 10;

/// Behaviour of agents 1..horizon: a decision per history node.
///
/// Decisions come from an explicit table keyed by the full action history,
/// falling back to an optional rule for histories not in the table. Rule-based
/// profiles (imitation, hybrids, revealing profiles) are defined on every
/// history; tables only on the histories that were materialized.
class StrategyProfile {
 public:
  using Rule = std::function<Decision(const History&)>;

  StrategyProfile(std::size_t horizon, std::size_t num_signals, std::size_t num_actions, Rule rule = {})
      : horizon_(horizon), num_signals_(num_signals), num_actions_(num_actions), rule_(std::move(rule)) {
    require(horizon_ >= 1, ErrorCode::InvalidArgument, "horizon must be at least 1");
  }

  std::size_t horizon() const noexcept { return horizon_; }
  std::size_t num_signals() const noexcept { return num_signals_; }
  std::size_t num_actions() const noexcept { return num_actions_; }
  bool has_rule() const noexcept { return static_cast<bool>(rule_); }
  const std::map<History, Decision>& table() const noexcept { return table_; }

  void set(History history, Decision decision) {
    require(history.size() < horizon_, ErrorCode::ShapeMismatch, "history deeper than the horizon");
    check_shape(decision);
    table_[std::move(history)] = std::move(decision);
  }

  std::optional<Decision> decision(const History& history) const {
    if (auto it = table_.find(history); it != table_.end()) return it->second;
    if (rule_) {
      Decision d = rule_(history);
      check_shape(d);
      return d;
    }
    return std::nullopt;
  }

 private:
  void check_shape(const Decision& decision) const {
    require(decision.size() == num_signals_, ErrorCode::ShapeMismatch, "decision needs one distribution per signal");
    for (const auto& dist : decision) {
      require(dist.size() == num_actions_, ErrorCode::ShapeMismatch, "distribution needs one entry per action");
      Rational sum;
      for (const auto& w : dist) {
        require(w.sign() >= 0, ErrorCode::InvalidArgument, "negative action probability");
        sum += w;
      }
      require(sum == Rational(1), ErrorCode::InvalidArgument, "action distribution sums to " + sum.str());
    }
  }

  std::size_t horizon_;
  std::size_t num_signals_;
  std::size_t num_actions_;
  std::map<History, Decision> table_;
  Rule rule_;
};

struct HistoryNode {
  History actions;
  Rational lik_H{1};  // P(history | H)
  Rational lik_L{1};  // P(history | L)
};

/// Surviving nodes by depth: levels[d] holds the histories agent d+1 faces.
struct HistoryTree {
  std::vector<std::vector<HistoryNode>> levels;
  std::size_t pruned = 0;

  std::size_t node_count() const {
    std::size_t n = 0;
    for (const auto& level : levels) n += level.size();
    return n;
  }
};

namespace detail {

/// P(action | state, node) summed over signals.
inline std::vector<Rational> action_mass(const InformationStructure& pi, const Decision& decision, State state,
                                         std::size_t num_actions) {
  std::vector<Rational> mass(num_actions);
  for (std::size_t s = 0; s < pi.size(); ++s) {
    const Rational& lik = pi.likelihood(state, s);
    if (lik.is_zero()) continue;
    for (std::size_t a = 0; a < num_actions; ++a) {
      if (!decision[s][a].is_zero()) mass[a] += lik * decision[s][a];
    }
  }
  return mass;
}

inline void check_profile_shape(const DecisionProblem& d, const InformationStructure& pi,
                                const StrategyProfile& profile) {
  require(profile.num_actions() == d.size() && profile.num_signals() == pi.size(), ErrorCode::ShapeMismatch,
          "profile does not match the instance's action or signal count");
}

inline Decision require_decision(const StrategyProfile& profile, const History& history) {
  auto decision = profile.decision(history);
  if (!decision) {
    std::string path;
    for (auto a : history) path += (path.empty() ? "" : ",") + std::to_string(a);
    throw Error(ErrorCode::ProfileIncomplete, "no decision for history [" + path + "]");
  }
  return std::move(*decision);
}

}  // namespace detail

/// Expands the surviving history tree of `profile`, pruning children that
/// have zero likelihood in both states.
inline HistoryTree history_tree(const InformationStructure& pi, const StrategyProfile& profile,
                                const Limits& limits = {}) {
  HistoryTree tree;
  tree.levels.push_back({HistoryNode{}});
  std::size_t total = 1;
  for (std::size_t depth = 0; depth + 1 < profile.horizon(); ++depth) {
    std::vector<HistoryNode> next;
    for (const auto& node : tree.levels[depth]) {
      const Decision decision = detail::require_decision(profile, node.actions);
      const auto mass_H = detail::action_mass(pi, decision, State::H, profile.num_actions());
      const auto mass_L = detail::action_mass(pi, decision, State::L, profile.num_actions());
      for (std::size_t a = 0; a < profile.num_actions(); ++a) {
        HistoryNode child{node.actions, node.lik_H * mass_H[a], node.lik_L * mass_L[a]};
        if (child.lik_H.is_zero() && child.lik_L.is_zero()) {
          ++tree.pruned;
          continue;
        }
        child.actions.push_back(a);
        next.push_back(std::move(child));
        if (++total > limits.node_cap) {
          throw Error(ErrorCode::ResourceLimit, "history tree exceeds node cap " + std::to_string(limits.node_cap));
        }
      }
    }
    tree.levels.push_back(std::move(next));
  }
  return tree;
}

/// Per-agent action law in each state.
struct ActionLaw {
  ActionDistribution high;  // alpha_i^H
  ActionDistribution low;   // alpha_i^L
};

struct Diagnostics {
  std::size_t tie_sites = 0;  // on-path (node, signal) pairs with several best responses
  std::size_t pruned_nodes = 0;
  std::size_t nodes = 0;
};

struct EquilibriumResult {
  StrategyProfile profile;
  std::vector<Rational> values;  // V_1 .. V_horizon
  std::vector<ActionLaw> action_laws;
  Diagnostics diagnostics;
};

/// Ex-ante payoffs and action laws of an arbitrary profile. No optimality is
/// assumed.
inline EquilibriumResult evaluate_profile(const DecisionProblem& d, const InformationStructure& pi, const Prior& prior,
                                          const StrategyProfile& profile, const Limits& limits = {}) {
  detail::check_profile_shape(d, pi, profile);
  const HistoryTree tree = history_tree(pi, profile, limits);
  EquilibriumResult result{profile, {}, {}, {0, tree.pruned, tree.node_count()}};
  const Rational& mu0 = prior.mu0();
  for (const auto& level : tree.levels) {
    ActionLaw law{ActionDistribution(d.size()), ActionDistribution(d.size())};
    for (const auto& node : level) {
      const Decision decision = detail::require_decision(profile, node.actions);
      const auto mass_H = detail::action_mass(pi, decision, State::H, d.size());
      const auto mass_L = detail::action_mass(pi, decision, State::L, d.size());
      for (std::size_t a = 0; a < d.size(); ++a) {
        law.high[a] += node.lik_H * mass_H[a];
        law.low[a] += node.lik_L * mass_L[a];
      }
    }
    Rational value;
    for (std::size_t a = 0; a < d.size(); ++a) {
      value += mu0 * law.high[a] * d.payoff(a, State::H) + (Rational(1) - mu0) * law.low[a] * d.payoff(a, State::L);
    }
    result.values.push_back(std::move(value));
    result.action_laws.push_back(std::move(law));
  }
  return result;
}

/// How a pure equilibrium picks among tied best responses.
class TieBreakPolicy {
 public:
  enum class Kind { FirstInActionOrder, PreferenceList, EnumerateAll };

  static TieBreakPolicy first_in_action_order() { return TieBreakPolicy(Kind::FirstInActionOrder, {}, 0); }

  /// `order` must be a permutation of the problem's action indices.
  static TieBreakPolicy preference_list(std::vector<std::size_t> order, std::size_t num_actions) {
    std::vector<std::size_t> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    bool permutation = sorted.size() == num_actions;
    for (std::size_t k = 0; permutation && k < sorted.size(); ++k) permutation = sorted[k] == k;
    require(permutation, ErrorCode::InvalidArgument, "preference list must be a permutation of the action set");
    return TieBreakPolicy(Kind::PreferenceList, std::move(order), 0);
  }

  static TieBreakPolicy preference_list(const DecisionProblem& d, const std::vector<std::string>& labels) {
    std::vector<std::size_t> order;
    for (const auto& label : labels) order.push_back(d.index_of(label));
    return preference_list(std::move(order), d.size());
  }

  static TieBreakPolicy enumerate_all(std::size_t cap) { return TieBreakPolicy(Kind::EnumerateAll, {}, cap); }

  Kind kind() const noexcept { return kind_; }
  std::size_t cap() const noexcept { return cap_; }
  const std::vector<std::size_t>& preference() const noexcept { return preference_; }

  /// Orders the tied candidates by preference; the front one is the pick.
  std::vector<std::size_t> rank(std::vector<std::size_t> candidates) const {
    if (kind_ == Kind::PreferenceList) {
      std::vector<std::size_t> out;
      for (auto a : preference_) {
        if (std::find(candidates.begin(), candidates.end(), a) != candidates.end()) out.push_back(a);
      }
      return out;
    }
    return candidates;
  }

 private:
  TieBreakPolicy(Kind kind, std::vector<std::size_t> preference, std::size_t cap)
      : kind_(kind), preference_(std::move(preference)), cap_(cap) {}

  Kind kind_;
  std::vector<std::size_t> preference_;
  std::size_t cap_;
};

namespace detail {

/// Best responses at one (node, signal) pair. Zero-probability pairs fall back
/// to the prior-optimal set and are never counted as ties.
struct SiteChoice {
  std::vector<std::size_t> options;
  bool on_path = false;
};

inline SiteChoice site_options(const DecisionProblem& d, const InformationStructure& pi, const Prior& prior,
                               const PrivateBeliefSummary& summary, const HistoryNode& node, std::size_t signal) {
  const Rational& mu0 = prior.mu0();
  const Rational reach = mu0 * node.lik_H * pi.likelihood(State::H, signal) +
                         (Rational(1) - mu0) * node.lik_L * pi.likelihood(State::L, signal);
  if (reach.is_zero()) return {best_response_set(d, mu0), false};
  const Rational public_belief = belief_from_likelihoods(node.lik_H, node.lik_L, prior);
  const Rational posterior = posterior_update(public_belief, summary.signal_belief[signal], prior);
  return {best_response_set(d, posterior), true};
}

/// Forward, agent-by-agent construction of a pure equilibrium. Nodes are
/// processed breadth first; each (node, signal) pair is a decision site.
class ForwardBuilder {
 public:
  ForwardBuilder(const DecisionProblem& d, const InformationStructure& pi, const Prior& prior,
                 const PrivateBeliefSummary& summary, std::size_t horizon, const Limits& limits)
      : d_(&d), pi_(&pi), prior_(&prior), summary_(&summary), limits_(&limits),
        profile_(horizon, pi.size(), d.size()) {
    queue_.push_back(HistoryNode{});
  }

  bool done() const { return queue_.empty(); }

  SiteChoice options() const { return site_options(*d_, *pi_, *prior_, *summary_, queue_.front(), signal_); }

  void choose(std::size_t action, bool tie) {
    if (tie) ++tie_sites_;
    current_.push_back(pure_action(d_->size(), action));
    if (++signal_ < pi_->size()) return;
    finish_node();
  }

  const StrategyProfile& profile() const { return profile_; }
  std::size_t tie_sites() const { return tie_sites_; }

 private:
  void finish_node() {
    HistoryNode node = std::move(queue_.front());
    queue_.pop_front();
    Decision decision = std::move(current_);
    current_.clear();
    signal_ = 0;
    if (node.actions.size() + 1 < profile_.horizon()) {
      const auto mass_H = action_mass(*pi_, decision, State::H, d_->size());
      const auto mass_L = action_mass(*pi_, decision, State::L, d_->size());
      for (std::size_t a = 0; a < d_->size(); ++a) {
        HistoryNode child{node.actions, node.lik_H * mass_H[a], node.lik_L * mass_L[a]};
        if (child.lik_H.is_zero() && child.lik_L.is_zero()) continue;
        child.actions.push_back(a);
        queue_.push_back(std::move(child));
      }
    }
    profile_.set(std::move(node.actions), std::move(decision));
    require(profile_.table().size() + queue_.size() <= limits_->node_cap, ErrorCode::ResourceLimit,
            "equilibrium tree exceeds node cap " + std::to_string(limits_->node_cap));
  }

  const DecisionProblem* d_;
  const InformationStructure* pi_;
  const Prior* prior_;
  const PrivateBeliefSummary* summary_;
  const Limits* limits_;
  StrategyProfile profile_;
  std::deque<HistoryNode> queue_;
  Decision current_;
  std::size_t signal_ = 0;
  std::size_t tie_sites_ = 0;
};

}  // namespace detail

/// A pure Bayes-Nash equilibrium built forward: every on-path agent plays a
/// best response at the exact posterior, ties resolved by `tiebreak`.
/// Off-path sites get the prior-optimal action.
inline EquilibriumResult compute_equilibrium(const DecisionProblem& d, const InformationStructure& pi,
                                             const Prior& prior, std::size_t horizon,
                                             const TieBreakPolicy& tiebreak = TieBreakPolicy::first_in_action_order(),
                                             const Limits& limits = {}) {
  require(tiebreak.kind() != TieBreakPolicy::Kind::EnumerateAll, ErrorCode::InvalidArgument,
          "use enumerate_equilibria for EnumerateAll");
  const auto summary = private_belief_distribution(pi, prior);
  detail::ForwardBuilder builder(d, pi, prior, summary, horizon, limits);
  while (!builder.done()) {
    const auto site = builder.options();
    builder.choose(tiebreak.rank(site.options).front(), site.on_path && site.options.size() > 1);
  }
  auto result = evaluate_profile(d, pi, prior, builder.profile(), limits);
  result.diagnostics.tie_sites = builder.tie_sites();
  return result;
}

struct EnumerationResult {
  std::vector<EquilibriumResult> equilibria;
  bool truncated = false;
};

/// All pure equilibria reachable by resolving each on-path tie to a single
/// action, depth first in action order. Stops after `cap` profiles and sets
/// `truncated` if more exist. Mixed resolutions of ties are not enumerated.
inline EnumerationResult enumerate_equilibria(const DecisionProblem& d, const InformationStructure& pi,
                                              const Prior& prior, std::size_t horizon, std::size_t cap,
                                              const Limits& limits = {}) {
  require(cap >= 1, ErrorCode::InvalidArgument, "enumeration cap must be at least 1");
  const auto summary = private_belief_distribution(pi, prior);
  EnumerationResult out;

  auto run = [&](auto&& self, detail::ForwardBuilder builder) -> bool {
    while (!builder.done()) {
      const auto site = builder.options();
      if (!site.on_path || site.options.size() == 1) {
        builder.choose(site.options.front(), false);
        continue;
      }
      for (std::size_t k = 0; k + 1 < site.options.size(); ++k) {
        detail::ForwardBuilder branch = builder;
        branch.choose(site.options[k], true);
        if (!self(self, std::move(branch))) return false;
      }
      builder.choose(site.options.back(), true);
    }
    if (out.equilibria.size() == cap) {
      out.truncated = true;
      return false;
    }
    auto result = evaluate_profile(d, pi, prior, builder.profile(), limits);
    result.diagnostics.tie_sites = builder.tie_sites();
    out.equilibria.push_back(std::move(result));
    return true;
  };
  run(run, detail::ForwardBuilder(d, pi, prior, summary, horizon, limits));
  return out;
}

struct Violation {
  History history;
  std::size_t signal = 0;
  std::size_t chosen = 0;
  std::size_t better = 0;
  Rational posterior;
};

struct Verdict {
  bool ok = true;
  std::optional<Violation> violation;
};

/// Pointwise optimality on the path. Payoffs carry no externalities, so this
/// is equivalent to the Bayes-Nash inequality for every agent.
inline Verdict verify_equilibrium(const DecisionProblem& d, const InformationStructure& pi, const Prior& prior,
                                  const StrategyProfile& profile, const Limits& limits = {}) {
  detail::check_profile_shape(d, pi, profile);
  const auto summary = private_belief_distribution(pi, prior);
  const HistoryTree tree = history_tree(pi, profile, limits);
  for (const auto& level : tree.levels) {
    for (const auto& node : level) {
      const Decision decision = detail::require_decision(profile, node.actions);
      for (std::size_t s = 0; s < pi.size(); ++s) {
        const auto site = detail::site_options(d, pi, prior, summary, node, s);
        if (!site.on_path) continue;
        for (std::size_t a = 0; a < d.size(); ++a) {
          if (decision[s][a].is_zero()) continue;
          if (std::find(site.options.begin(), site.options.end(), a) != site.options.end()) continue;
          const Rational public_belief = belief_from_likelihoods(node.lik_H, node.lik_L, prior);
          return {false, Violation{node.actions, s, a, site.options.front(),
                                   posterior_update(public_belief, summary.signal_belief[s], prior)}};
        }
      }
    }
  }
  return {true, std::nullopt};
}

/// V-bar_i: best payoff when agent i sees i independent draws directly.
inline std::vector<Rational> observable_signal_value(const DecisionProblem& d, const InformationStructure& pi,
                                                     const Prior& prior, std::size_t horizon,
                                                     const Limits& limits = {}) {
  require(horizon >= 1, ErrorCode::InvalidArgument, "horizon must be at least 1");
  std::vector<Rational> out;
  for (std::size_t i = 1; i <= horizon; ++i) {
    const auto law = iid_power(pi, static_cast<unsigned>(i), prior, limits.atom_cap);
    Rational v;
    for (const auto& atom : law.atoms()) v += atom.prob * optimal_value(d, atom.belief);
    out.push_back(std::move(v));
  }
  return out;
}

/// Law of the public belief faced by agent i (2 <= i <= horizon).
inline BeliefDistribution public_belief_distribution(const DecisionProblem& d, const InformationStructure& pi,
                                                     const Prior& prior, const StrategyProfile& profile,
                                                     std::size_t agent, const Limits& limits = {}) {
  detail::check_profile_shape(d, pi, profile);
  require(agent >= 2 && agent <= profile.horizon(), ErrorCode::InvalidArgument,
          "public belief needs 2 <= i <= horizon");
  const HistoryTree tree = history_tree(pi, profile, limits);
  std::vector<BeliefAtom> atoms;
  const Rational& mu0 = prior.mu0();
  for (const auto& node : tree.levels[agent - 1]) {
    const Rational weight = mu0 * node.lik_H + (Rational(1) - mu0) * node.lik_L;
    atoms.push_back({mu0 * node.lik_H / weight, weight});
  }
  return BeliefDistribution(atoms);
}

/// Copies a (possibly rule-based) profile into an explicit table covering its
/// surviving tree.
inline StrategyProfile materialize(const InformationStructure& pi, const StrategyProfile& profile,
                                   const Limits& limits = {}) {
  StrategyProfile out(profile.horizon(), profile.num_signals(), profile.num_actions());
  const HistoryTree tree = history_tree(pi, profile, limits);
  for (const auto& level : tree.levels) {
    for (const auto& node : level) out.set(node.actions, detail::require_decision(profile, node.actions));
  }
  return out;
}

}  // namespace sociallearn
