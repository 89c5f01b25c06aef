#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sociallearn/blackwell.hpp"
#include "sociallearn/equilibrium.hpp"
#include "sociallearn/error.hpp"
#include "sociallearn/model.hpp"
#include "sociallearn/rational.hpp"

namespace sociallearn {

enum class Relation { S, ES, W, SELF };
enum class VerdictStatus { ProvedBySufficient, Refuted, Inconclusive };

constexpr std::string_view relation_name(Relation r) {
  switch (r) {
    case Relation::S: return "S";
    case Relation::ES: return "ES";
    case Relation::W: return "W";
    case Relation::SELF: return "SELF";
  }
  return "?";
}

constexpr std::string_view status_name(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::ProvedBySufficient: return "ProvedBySufficient";
    case VerdictStatus::Refuted: return "Refuted";
    case VerdictStatus::Inconclusive: return "Inconclusive";
  }
  return "?";
}

inline Relation parse_relation(std::string_view text) {
  for (Relation r : {Relation::S, Relation::ES, Relation::W, Relation::SELF}) {
    if (relation_name(r) == text) return r;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown relation '" + std::string(text) + "'");
}

/// Safe action a0 worth 0; risky action a1 worth 1-r in H and -r in L.
inline DecisionProblem threshold_problem(const Rational& r) {
  require(r.sign() >= 0 && r <= Rational(1), ErrorCode::InvalidArgument, "threshold must lie in [0,1]");
  return DecisionProblem({"a0", "a1"}, {Rational(0), -r}, {Rational(0), Rational(1) - r});
}

/// A decision problem, an agent and an equilibrium under pi that falls short
/// of what the agent would get seeing i draws of pi' directly.
struct CounterexampleBundle {
  DecisionProblem problem;
  std::size_t agent = 0;
  Rational equilibrium_value;  // V_i under pi
  Rational benchmark;          // V-bar_i under pi'
  Rational gap;                // benchmark - equilibrium_value
  std::optional<Rational> threshold;
  std::shared_ptr<const StrategyProfile> profile;
  // Per agent 1..horizon.
  std::vector<Rational> values;
  std::vector<Rational> benchmarks;
  std::vector<Rational> gaps;
};

/// One problem of the weak-order family and how the constructed equilibrium
/// under pi fared against every enumerated equilibrium under pi'.
struct WeakCheck {
  DecisionProblem problem;
  std::string construction;  // "i", "ii", "iii", "mixture"
  std::vector<Rational> values;  // constructed equilibrium under pi
  Rational min_margin;           // min over i and sigma** of V_i(pi) - V_i(pi', sigma**)
  std::size_t rivals = 0;
  bool rivals_truncated = false;
  bool holds = false;
};

struct OrderVerdict {
  Relation relation = Relation::S;
  VerdictStatus status = VerdictStatus::Inconclusive;
  std::optional<MixtureExperiment> mixture;
  std::optional<CounterexampleBundle> counterexample;
  std::vector<WeakCheck> weak_checks;
  /// The refutation holds for every later agent, not only up to the horizon.
  bool persistence_proved = false;
  /// Positive verdict checked over a generated problem family only.
  bool family_relative = false;
  std::vector<std::string> notes;
};

struct FamilyOptions {
  std::size_t grid = 10;          // thresholds k/grid
  std::size_t max_power = 4;      // breakpoints from up to this many iid draws
  std::size_t max_problems = 256;
};

/// Thresholds to try, in search order: a k/grid grid, then interior beliefs
/// reachable from up to max_power draws of either experiment, then midpoints
/// between consecutive ones. Duplicates keep their first position.
inline std::vector<Rational> threshold_family(const InformationStructure& pi, const InformationStructure& pi_prime,
                                              const Prior& prior, std::size_t horizon,
                                              const FamilyOptions& options = {}, const Limits& limits = {}) {
  std::vector<Rational> out;
  std::set<Rational> seen;
  auto add = [&](const Rational& r) {
    if (out.size() < options.max_problems && seen.insert(r).second) out.push_back(r);
  };
  for (std::size_t k = 1; k < options.grid; ++k) add(Rational(static_cast<long>(k), static_cast<long>(options.grid)));

  std::set<Rational> points{Rational(0), Rational(1)};
  const std::size_t depth = std::min(horizon, options.max_power);
  for (const auto* experiment : {&pi, &pi_prime}) {
    for (std::size_t n = 1; n <= depth; ++n) {
      const auto law = iid_power(*experiment, static_cast<unsigned>(n), prior, limits.atom_cap);
      for (const auto& atom : law.atoms()) points.insert(atom.belief);
    }
  }
  for (const auto& z : points) {
    if (z.sign() > 0 && z < Rational(1)) add(z);
  }
  for (auto it = points.begin(); std::next(it) != points.end(); ++it) add(midpoint(*it, *std::next(it)));
  return out;
}

/// Sufficient condition: a full/no-information mixture sits between pi and
/// pi' in the Blackwell order.
inline OrderVerdict check_sufficient_social(const InformationStructure& pi, const InformationStructure& pi_prime,
                                            const Prior& prior) {
  OrderVerdict v;
  v.relation = Relation::S;
  v.mixture = mixture_exists(pi, pi_prime, prior);
  if (v.mixture) {
    v.status = VerdictStatus::ProvedBySufficient;
    if (v.mixture->degenerate) v.notes.push_back("mixture is degenerate (p is 0 or 1)");
  } else {
    v.notes.push_back("no full/no-information mixture fits between the two experiments");
  }
  return v;
}

namespace detail {

/// Every agent plays `action` whatever they see.
inline StrategyProfile constant_profile(std::size_t horizon, std::size_t num_signals, std::size_t num_actions,
                                        std::size_t action) {
  return StrategyProfile(horizon, num_signals, num_actions, [=](const History&) {
    return Decision(num_signals, pure_action(num_actions, action));
  });
}

/// Cascade certificate against a bounded-belief pi: everyone takes the safe
/// action at a threshold above every private belief, while repeated draws of
/// pi' eventually make the risky action worth something.
inline std::optional<CounterexampleBundle> cascade_certificate(const InformationStructure& pi,
                                                               const InformationStructure& pi_prime,
                                                               const Prior& prior, std::size_t max_agents,
                                                               const Limits& limits, std::string& note) {
  const auto cls = classify(pi, prior);
  if (classify(pi_prime, prior).is_no_information) {
    note = "pi' is no information, so bounded beliefs are not ruled out";
    return std::nullopt;
  }
  if (cls.has_unbounded_beliefs) {
    note = "pi induces unbounded beliefs";
    return std::nullopt;
  }
  const auto support = private_belief_distribution(pi, prior).distribution.support();
  const bool high_missing = !std::binary_search(support.begin(), support.end(), Rational(1));
  // Threshold in the frame where the missing conclusive belief is 1.
  Rational r = high_missing ? prior.mu0() : Rational(1) - prior.mu0();
  for (const auto& z : support) r = max(r, high_missing ? z : Rational(1) - z);
  const DecisionProblem problem = high_missing ? threshold_problem(r) : threshold_problem(r).mirrored();

  const auto vbar = observable_signal_value(problem, pi_prime, prior, max_agents, limits);
  for (std::size_t i = 1; i <= max_agents; ++i) {
    if (vbar[i - 1].sign() <= 0) continue;
    StrategyProfile profile = constant_profile(i, pi.size(), problem.size(), 0);
    require(verify_equilibrium(problem, pi, prior, profile, limits).ok, ErrorCode::InternalDisagreement,
            "all-safe profile is not an equilibrium");
    const auto eval = evaluate_profile(problem, pi, prior, profile, limits);
    CounterexampleBundle bundle{problem, i, eval.values[i - 1], vbar[i - 1], vbar[i - 1] - eval.values[i - 1],
                                high_missing ? r : Rational(1) - r,
                                std::make_shared<const StrategyProfile>(materialize(pi, profile, limits)),
                                eval.values,
                                std::vector<Rational>(vbar.begin(), vbar.begin() + static_cast<std::ptrdiff_t>(i)),
                                {}};
    for (std::size_t k = 0; k < i; ++k) bundle.gaps.push_back(vbar[k] - eval.values[k]);
    return bundle;
  }
  note = "V-bar under pi' stayed at 0 up to agent " + std::to_string(max_agents);
  return std::nullopt;
}

}  // namespace detail

/// Necessary condition: unless pi' is no information, pi must induce
/// unbounded beliefs. A failure is refuted with the all-safe cascade.
inline OrderVerdict check_necessary_social(const InformationStructure& pi, const InformationStructure& pi_prime,
                                           const Prior& prior, std::size_t max_agents = 32,
                                           const Limits& limits = {}) {
  OrderVerdict v;
  v.relation = Relation::S;
  std::string note;
  v.counterexample = detail::cascade_certificate(pi, pi_prime, prior, max_agents, limits, note);
  if (v.counterexample) {
    v.status = VerdictStatus::Refuted;
    v.notes.push_back("all-safe cascade under pi; the benchmark under pi' is positive");
  } else {
    v.notes.push_back(note);
  }
  return v;
}

struct SearchOptions {
  FamilyOptions family;
  std::size_t enumeration_cap = 64;
};

namespace detail {

struct ProblemScan {
  DecisionProblem problem;
  Rational threshold;
  EnumerationResult equilibria;
  std::vector<Rational> benchmark;
};

inline ProblemScan scan_threshold(const Rational& r, const InformationStructure& pi,
                                  const InformationStructure& pi_prime, const Prior& prior, std::size_t horizon,
                                  const SearchOptions& options, const Limits& limits) {
  DecisionProblem problem = threshold_problem(r);
  auto equilibria = enumerate_equilibria(problem, pi, prior, horizon, options.enumeration_cap, limits);
  auto benchmark = observable_signal_value(problem, pi_prime, prior, horizon, limits);
  return {std::move(problem), r, std::move(equilibria), std::move(benchmark)};
}

inline CounterexampleBundle make_bundle(const ProblemScan& scan, std::size_t eq, std::size_t agent) {
  const auto& result = scan.equilibria.equilibria[eq];
  CounterexampleBundle bundle{scan.problem,
                              agent,
                              result.values[agent - 1],
                              scan.benchmark[agent - 1],
                              scan.benchmark[agent - 1] - result.values[agent - 1],
                              scan.threshold,
                              std::make_shared<const StrategyProfile>(result.profile),
                              result.values,
                              scan.benchmark,
                              {}};
  for (std::size_t k = 0; k < result.values.size(); ++k) bundle.gaps.push_back(scan.benchmark[k] - result.values[k]);
  return bundle;
}

}  // namespace detail

/// Looks for a threshold problem and an equilibrium under pi where some agent
/// gets less than the benchmark under pi'. Reports the earliest agent, then
/// the first threshold in family order, then the first equilibrium.
inline OrderVerdict refute_social(const InformationStructure& pi, const InformationStructure& pi_prime,
                                  const Prior& prior, std::size_t horizon, const SearchOptions& options = {},
                                  const Limits& limits = {}) {
  require(horizon >= 1, ErrorCode::InvalidArgument, "horizon must be at least 1");
  OrderVerdict v;
  v.relation = Relation::S;
  std::optional<std::pair<std::size_t, CounterexampleBundle>> best;  // (agent, bundle)
  bool truncated = false;
  for (const auto& r : threshold_family(pi, pi_prime, prior, horizon, options.family, limits)) {
    const auto scan = detail::scan_threshold(r, pi, pi_prime, prior, horizon, options, limits);
    truncated = truncated || scan.equilibria.truncated;
    const std::size_t limit = best ? best->first - 1 : horizon;
    for (std::size_t i = 1; i <= limit; ++i) {
      bool found = false;
      for (std::size_t e = 0; e < scan.equilibria.equilibria.size(); ++e) {
        if (scan.equilibria.equilibria[e].values[i - 1] < scan.benchmark[i - 1]) {
          best.emplace(i, detail::make_bundle(scan, e, i));
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (best && best->first == 1) break;
  }
  if (truncated) v.notes.push_back("equilibrium enumeration hit its cap on some problem");
  if (best) {
    v.status = VerdictStatus::Refuted;
    v.counterexample = std::move(best->second);
  } else {
    v.notes.push_back("no counterexample in the threshold family up to agent " + std::to_string(horizon));
  }
  return v;
}

namespace detail {

struct Example1Shape {
  Rational high_miss;       // pi(s2|H)
  Rational low_miss;        // pi(s2|L), shared by both experiments
  Rational high_miss_prime;  // pi'(s2|H)
};

/// Both experiments have one conclusive signal per state and one interior
/// signal with the same L-likelihood, pi' missing H more often.
inline std::optional<Example1Shape> example1_shape(const InformationStructure& pi, const InformationStructure& pi_prime,
                                                   const Prior& prior) {
  auto parts = [&](const InformationStructure& e) -> std::optional<std::pair<Rational, Rational>> {
    const auto summary = private_belief_distribution(e, prior);
    if (summary.signal_groups.size() != 3 || summary.signal_groups.front().belief.sign() != 0 ||
        summary.signal_groups.back().belief != Rational(1)) {
      return std::nullopt;
    }
    const auto& mid = summary.signal_groups[1];
    return std::make_pair(mid.mass_H, mid.mass_L);
  };
  auto a = parts(pi);
  auto b = parts(pi_prime);
  if (!a || !b || a->second != b->second || !(a->first < b->first) || !(a->second < a->first)) return std::nullopt;
  return Example1Shape{a->first, a->second, b->first};
}

}  // namespace detail

/// Evidence against the eventual order: a problem and an equilibrium under pi
/// trailing the benchmark under pi' for every agent from 2 to the horizon.
inline OrderVerdict refute_eventual(const InformationStructure& pi, const InformationStructure& pi_prime,
                                    const Prior& prior, std::size_t horizon, const SearchOptions& options = {},
                                    const Limits& limits = {}) {
  require(horizon >= 2, ErrorCode::InvalidArgument, "eventual comparison needs horizon >= 2");
  OrderVerdict v;
  v.relation = Relation::ES;

  std::string note;
  if (auto cascade = detail::cascade_certificate(pi, pi_prime, prior, std::max<std::size_t>(horizon, 32), limits,
                                                 note)) {
    v.status = VerdictStatus::Refuted;
    v.counterexample = std::move(cascade);
    v.persistence_proved = true;
    v.notes.push_back("cascade value stays 0 while the benchmark is nondecreasing and already positive");
    return v;
  }

  bool truncated = false;
  for (const auto& r : threshold_family(pi, pi_prime, prior, horizon, options.family, limits)) {
    const auto scan = detail::scan_threshold(r, pi, pi_prime, prior, horizon, options, limits);
    truncated = truncated || scan.equilibria.truncated;
    for (std::size_t e = 0; e < scan.equilibria.equilibria.size(); ++e) {
      const auto& values = scan.equilibria.equilibria[e].values;
      bool all = true;
      for (std::size_t i = 2; i <= horizon && all; ++i) all = values[i - 1] < scan.benchmark[i - 1];
      if (!all) continue;
      v.status = VerdictStatus::Refuted;
      v.counterexample = detail::make_bundle(scan, e, horizon);
      if (auto shape = detail::example1_shape(pi, pi_prime, prior)) {
        const Rational& mu0 = prior.mu0();
        const Rational one(1);
        const Rational lo = mu0 * shape->high_miss / (mu0 * shape->high_miss + (one - mu0) * shape->low_miss);
        const Rational hi1 =
            mu0 * shape->high_miss_prime / (mu0 * shape->high_miss_prime + (one - mu0) * shape->low_miss);
        const Rational e2 = shape->high_miss * shape->high_miss;
        const Rational d2 = shape->low_miss * shape->low_miss;
        const Rational hi2 = mu0 * e2 / (mu0 * e2 + (one - mu0) * d2);
        if (lo < r && r < min(hi1, hi2)) {
          v.persistence_proved = true;
          v.notes.push_back("closed-form gap mu0 e^i (1-r) - (1-mu0) d^i r is positive for every i >= 2");
        }
      }
      if (!v.persistence_proved) v.notes.push_back("finite-horizon evidence up to agent " + std::to_string(horizon));
      if (truncated) v.notes.push_back("equilibrium enumeration hit its cap on some problem");
      return v;
    }
  }
  if (truncated) v.notes.push_back("equilibrium enumeration hit its cap on some problem");
  v.notes.push_back("no persistent gap in the threshold family up to agent " + std::to_string(horizon));
  return v;
}

/// Whether pi is more socially valuable than itself.
inline OrderVerdict self_social(const InformationStructure& pi, const Prior& prior, std::size_t horizon = 2,
                                const Limits& limits = {}, std::size_t enumeration_cap = 256) {
  OrderVerdict v;
  v.relation = Relation::SELF;
  const auto cls = classify(pi, prior);
  if (cls.is_full_no_mixture) {
    v.mixture = mixture_exists(pi, pi, prior);
    require(v.mixture.has_value(), ErrorCode::InternalDisagreement, "a full/no mixture must sandwich itself");
    v.status = VerdictStatus::ProvedBySufficient;
    return v;
  }
  // Largest interior belief above the prior, in the frame where one exists.
  const auto support = private_belief_distribution(pi, prior).distribution.support();
  std::optional<Rational> above, below;
  for (const auto& z : support) {
    if (z.sign() == 0 || z == Rational(1) || z == prior.mu0()) continue;
    if (z > prior.mu0()) above = z;
    if (z < prior.mu0() && !below) below = z;
  }
  const bool flip = !above.has_value();
  const Prior frame_prior = flip ? prior.mirrored() : prior;
  const Rational x = flip ? Rational(1) - *below : *above;
  const Rational odds = frame_prior.odds();
  const Rational x2 = x * x;
  const Rational upper = x2 / (x2 + odds * (Rational(1) - x) * (Rational(1) - x));
  const Rational r = midpoint(x, upper);
  const DecisionProblem problem = flip ? threshold_problem(r).mirrored() : threshold_problem(r);

  const std::size_t n = std::max<std::size_t>(horizon, 2);
  const auto equilibria = enumerate_equilibria(problem, pi, prior, n, enumeration_cap, limits);
  const auto benchmark = observable_signal_value(problem, pi, prior, n, limits);
  for (const auto& eq : equilibria.equilibria) {
    require(eq.values[1] < benchmark[1], ErrorCode::InternalDisagreement,
            "agent 2 reaches the benchmark at r = " + r.str());
  }
  if (equilibria.truncated) v.notes.push_back("equilibrium enumeration hit its cap; listed equilibria all trail");
  detail::ProblemScan scan{problem, flip ? Rational(1) - r : r, equilibria, benchmark};
  v.counterexample = detail::make_bundle(scan, 0, 2);
  v.status = VerdictStatus::Refuted;
  if (flip) v.notes.push_back("constructed in the mirrored frame; threshold is reported in that frame");
  return v;
}

namespace detail {

/// Equilibrium under a pi with private beliefs {0, x, 1}, x above the prior,
/// following the three-way split on the problem's best-response structure.
/// Returns the profile and which case produced it.
inline std::pair<StrategyProfile, std::string> three_support_equilibrium(const DecisionProblem& d,
                                                                         const InformationStructure& pi,
                                                                         const Prior& prior, std::size_t horizon,
                                                                         const Rational& x) {
  const auto summary = private_belief_distribution(pi, prior);
  enum class Kind { Low, High, Mid };
  std::vector<Kind> kind(pi.size());
  for (std::size_t s = 0; s < pi.size(); ++s) {
    const Rational& b = summary.signal_belief[s];
    kind[s] = b.sign() == 0 ? Kind::Low : (b == Rational(1) ? Kind::High : Kind::Mid);
  }
  const std::size_t nS = pi.size(), nA = d.size();
  const auto br0 = best_response_set(d, Rational(0));
  const auto br1 = best_response_set(d, Rational(1));
  const auto brx = best_response_set(d, x);
  auto contains = [](const std::vector<std::size_t>& v, std::size_t a) {
    return std::find(v.begin(), v.end(), a) != v.end();
  };

  for (auto a : br0) {
    if (contains(br1, a)) return {constant_profile(horizon, nS, nA, a), "i"};
  }

  bool br1_meets_x = false;
  for (auto a : br1) br1_meets_x = br1_meets_x || contains(brx, a);
  if (!br1_meets_x && br0.size() == 1 && brx == br0) {
    const std::size_t safe = br0.front(), risky = br1.front();
    auto rule = [=](const History& h) {
      const bool all_safe = std::all_of(h.begin(), h.end(), [&](std::size_t a) { return a == safe; });
      Decision dec(nS);
      for (std::size_t s = 0; s < nS; ++s) {
        const bool take_safe = kind[s] == Kind::Low || (kind[s] == Kind::Mid && all_safe);
        dec[s] = pure_action(nA, take_safe ? safe : risky);
      }
      return dec;
    };
    return {StrategyProfile(horizon, nS, nA, rule), "ii"};
  }

  // Case iii: a safe action that is never the unique best response on [x, 1].
  // The set of best-response sets on [x, 1] is finite: those at x, 1 and at
  // the kinks in between.
  std::vector<Rational> probes{x, Rational(1)};
  for (std::size_t a = 0; a < nA; ++a) {
    if (auto iv = best_action_interval(d, a)) {
      for (const auto& z : {iv->lo, iv->hi}) {
        if (x <= z) probes.push_back(z);
      }
    }
  }
  std::sort(probes.begin(), probes.end());
  const std::size_t probe_count = probes.size();
  for (std::size_t k = 0; k + 1 < probe_count; ++k) probes.push_back(midpoint(probes[k], probes[k + 1]));
  std::optional<std::size_t> safe;
  for (auto a : br0) {
    bool ok = true;
    for (const auto& z : probes) {
      const auto br = best_response_set(d, z);
      if (br.size() == 1 && br.front() == a) ok = false;
    }
    if (ok) {
      safe = a;
      break;
    }
  }
  require(safe.has_value(), ErrorCode::InternalDisagreement, "no admissible safe action in case iii");
  const std::size_t a0 = *safe;
  const std::size_t c = br1.front();

  // b[k]: action of agent k+1 on the interior signal after k interior signals.
  std::vector<std::size_t> mid_action;
  Rational belief = x;
  for (std::size_t k = 0; k < horizon; ++k) {
    const auto br = best_response_set(d, belief);
    std::size_t pick = nA;
    if (contains(br, c)) {
      pick = c;
    } else {
      for (auto a : br) {
        if (a != a0) {
          pick = a;
          break;
        }
      }
    }
    require(pick != nA, ErrorCode::InternalDisagreement, "interior best response collapses to the safe action");
    mid_action.push_back(pick);
    belief = posterior_update(belief, x, prior);
  }
  auto rule = [=](const History& h) {
    const bool safe_seen = std::find(h.begin(), h.end(), a0) != h.end();
    bool all_mid = true;
    for (std::size_t k = 0; k < h.size() && all_mid; ++k) all_mid = h[k] == mid_action[k];
    Decision dec(nS);
    for (std::size_t s = 0; s < nS; ++s) {
      std::size_t a;
      if (kind[s] == Kind::Low || safe_seen) {
        a = a0;
      } else if (kind[s] == Kind::High) {
        a = c;
      } else {
        a = all_mid ? mid_action[h.size()] : h.back();
      }
      dec[s] = pure_action(nA, a);
    }
    return dec;
  };
  return {StrategyProfile(horizon, nS, nA, rule), "iii"};
}

}  // namespace detail

/// Weak-order check for a pi with private beliefs {0, x, 1}: per problem in
/// the family, builds an equilibrium under pi and compares it with every
/// enumerated equilibrium under pi'.
inline OrderVerdict check_weak_3support(const InformationStructure& pi, const InformationStructure& pi_prime,
                                        const Prior& prior, std::size_t horizon, const SearchOptions& options = {},
                                        const Limits& limits = {},
                                        std::optional<std::vector<DecisionProblem>> problems = std::nullopt) {
  require(horizon >= 1, ErrorCode::InvalidArgument, "horizon must be at least 1");
  const auto summary = private_belief_distribution(pi, prior);
  const auto support = summary.distribution.support();
  const Rational zero(0), one(1);
  const bool has_ends = std::binary_search(support.begin(), support.end(), zero) &&
                        std::binary_search(support.begin(), support.end(), one);
  require(has_ends && support.size() <= 3, ErrorCode::PreconditionViolated,
          "pi must have private beliefs {0, x, 1}");
  const Rational x = support.size() == 3 ? support[1] : one;
  for (const auto& y : private_belief_distribution(pi_prime, prior).distribution.support()) {
    if (y.sign() == 0 || y == one) continue;
    require(abs(prior.mu0() - y) <= abs(prior.mu0() - x), ErrorCode::PreconditionViolated,
            "interior belief " + y.str() + " of pi' is farther from the prior than " + x.str());
  }
  require(blackwell_geq(pi, pi_prime), ErrorCode::PreconditionViolated, "pi must be Blackwell above pi'");

  OrderVerdict v;
  v.relation = Relation::W;
  v.family_relative = true;

  if (!problems) {
    problems.emplace();
    for (const auto& r : threshold_family(pi, pi_prime, prior, horizon, options.family, limits)) {
      problems->push_back(threshold_problem(r));
      // Same problem with a payoff-identical copy of the safe action.
      problems->push_back(DecisionProblem({"a0", "a1", "a2"}, {zero, -r, zero}, {zero, one - r, zero}));
    }
  }

  const bool flip = x < prior.mu0();
  const InformationStructure frame_pi = flip ? pi.mirrored() : pi;
  const Prior frame_prior = flip ? prior.mirrored() : prior;
  const Rational frame_x = flip ? one - x : x;
  const bool mixture_like = x == one || x == prior.mu0();
  if (flip) v.notes.push_back("interior belief below the prior; built in the mirrored frame");

  bool all_hold = true;
  for (const auto& problem : *problems) {
    WeakCheck check{problem, "", {}, Rational(0), 0, false, false};
    StrategyProfile profile(horizon, pi.size(), problem.size());
    if (mixture_like) {
      profile = compute_equilibrium(problem, pi, prior, horizon, TieBreakPolicy::first_in_action_order(), limits)
                    .profile;
      check.construction = "mixture";
    } else {
      auto built = detail::three_support_equilibrium(flip ? problem.mirrored() : problem, frame_pi, frame_prior,
                                                     horizon, frame_x);
      profile = std::move(built.first);
      check.construction = std::move(built.second);
    }
    const auto verdict = verify_equilibrium(problem, pi, prior, profile, limits);
    require(verdict.ok, ErrorCode::InternalDisagreement,
            "constructed case-" + check.construction + " profile is not an equilibrium");
    check.values = evaluate_profile(problem, pi, prior, profile, limits).values;

    const auto rivals = enumerate_equilibria(problem, pi_prime, prior, horizon, options.enumeration_cap, limits);
    check.rivals = rivals.equilibria.size();
    check.rivals_truncated = rivals.truncated;
    bool first = true;
    for (const auto& rival : rivals.equilibria) {
      for (std::size_t i = 0; i < horizon; ++i) {
        const Rational margin = check.values[i] - rival.values[i];
        if (first || margin < check.min_margin) check.min_margin = margin;
        first = false;
      }
    }
    check.holds = check.min_margin.sign() >= 0;
    all_hold = all_hold && check.holds;
    v.weak_checks.push_back(std::move(check));
  }
  v.status = all_hold ? VerdictStatus::ProvedBySufficient : VerdictStatus::Inconclusive;
  v.notes.push_back("checked over " + std::to_string(problems->size()) + " problems, not all decision problems");
  if (!all_hold) v.notes.push_back("some rival equilibrium beat the constructed one; no refutation is implied");
  return v;
}

/// Composite check used by the command line: sufficient condition first,
/// then the relation's refutation searches.
inline OrderVerdict check_relation(Relation relation, const InformationStructure& pi,
                                   const InformationStructure& pi_prime, const Prior& prior, std::size_t horizon,
                                   const SearchOptions& options = {}, const Limits& limits = {}) {
  switch (relation) {
    case Relation::SELF:
      return self_social(pi, prior, horizon, limits);
    case Relation::W: {
      try {
        return check_weak_3support(pi, pi_prime, prior, horizon, options, limits);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::PreconditionViolated) throw;
        auto v = check_sufficient_social(pi, pi_prime, prior);
        v.relation = Relation::W;
        v.notes.push_back(std::string("three-support hypothesis fails: ") + e.what());
        return v;
      }
    }
    case Relation::S:
    case Relation::ES: {
      auto v = check_sufficient_social(pi, pi_prime, prior);
      v.relation = relation;
      if (v.status == VerdictStatus::ProvedBySufficient) return v;
      if (relation == Relation::ES) return refute_eventual(pi, pi_prime, prior, std::max<std::size_t>(horizon, 2),
                                                           options, limits);
      auto necessary = check_necessary_social(pi, pi_prime, prior, std::max<std::size_t>(horizon, 32), limits);
      if (necessary.status == VerdictStatus::Refuted) return necessary;
      return refute_social(pi, pi_prime, prior, horizon, options, limits);
    }
  }
  return {};
}

}  // namespace sociallearn
