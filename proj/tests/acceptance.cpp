// Acceptance runner: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "support/corpus.hpp"

using namespace sociallearn;

namespace {

using Clock = std::chrono::steady_clock;
const auto first = TieBreakPolicy::first_in_action_order();
const Rational kHalf(1, 2);
const Prior kEven(kHalf);

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Records the first failure and keeps going so the detail names it.
struct Check {
  Outcome out;
  void expect(bool ok, const std::string& what) {
    if (!ok && out.pass) {
      out.pass = false;
      out.detail = what;
    }
  }
};

InformationStructure two_sided(const Rational& miss_H, const Rational& miss_L) {
  return InformationStructure({"s0", "s1", "s2"}, {1 - miss_L, 0, miss_L}, {0, 1 - miss_H, miss_H});
}

// Mass of signals that rule out the other state, per state.
std::pair<Rational, Rational> conclusive_masses(const InformationStructure& pi) {
  Rational L, H;
  for (std::size_t s = 0; s < pi.size(); ++s) {
    if (pi.likelihood(State::H, s).is_zero()) L += pi.likelihood(State::L, s);
    if (pi.likelihood(State::L, s).is_zero()) H += pi.likelihood(State::H, s);
  }
  return {L, H};
}

Rational power(const Rational& base, std::size_t n) {
  Rational out(1);
  for (std::size_t k = 0; k < n; ++k) out *= base;
  return out;
}

// 1. Example 1 closed forms.
Outcome example1_reproduction() {
  Check c;
  const auto pi = two_sided(Rational(2, 5), Rational(1, 5));
  const auto pi_prime = two_sided(Rational(3, 5), Rational(1, 5));
  const auto d = threshold_problem(Rational(7, 10));
  const auto v = compute_equilibrium(d, pi, kEven, 8, first).values;
  const auto w = compute_equilibrium(d, pi_prime, kEven, 8, first).values;
  for (std::size_t i = 2; i <= 8; ++i) {
    const Rational expect_v = kHalf * (1 - power(Rational(2, 5), i)) * Rational(3, 10);
    const Rational expect_w = kHalf * Rational(3, 10) - kHalf * power(Rational(1, 5), i) * Rational(7, 10);
    c.expect(v[i - 1] == expect_v, "V_" + std::to_string(i) + "(pi) = " + v[i - 1].str());
    c.expect(w[i - 1] == expect_w, "V_" + std::to_string(i) + "(pi') = " + w[i - 1].str());
    c.expect(w[i - 1] > v[i - 1], "no gap at agent " + std::to_string(i));
  }
  if (c.out.pass) c.out.detail = "gap at agent 2 = " + (w[1] - v[1]).str();
  return c.out;
}

// 2. Example 2 with the safe tie-break under pi and a revealing equilibrium under pi'.
Outcome example2_reproduction() {
  Check c;
  const auto pi = two_sided(Rational(1, 2), Rational(1, 10));
  const auto pi_prime = two_sided(Rational(3, 5), Rational(1, 5));
  const Rational x(5, 6);
  const DecisionProblem d({"a0", "a1", "a2"}, {0, -x, 0}, {0, 1 - x, 0});
  const Rational v = compute_equilibrium(d, pi, kEven, 2, first).values[1];
  c.expect(v == Rational(1, 16), "V_2(pi) = " + v.str());
  const Rational bench = corpus::brute_vbar(d, pi_prime, kEven, 2);
  c.expect(bench == Rational(1, 15), "Vbar_2(pi') = " + bench.str());
  const auto all = enumerate_equilibria(d, pi_prime, kEven, 2, 1024);
  bool found = false;
  for (const auto& eq : all.equilibria) {
    if (eq.values[1] == bench && verify_equilibrium(d, pi_prime, kEven, eq.profile).ok) found = true;
  }
  c.expect(found, "no enumerated equilibrium of pi' reaches 1/15");
  c.expect(v < bench, "no strict inequality");
  if (c.out.pass) c.out.detail = std::to_string(all.equilibria.size()) + " equilibria under pi'";
  return c.out;
}

// 3. Observing actions never beats observing the signals.
Outcome signal_beats_history() {
  Check c;
  corpus::Generator g(corpus::kSeed + 3);
  std::size_t profiles = 0;
  const std::size_t instances = 200;
  for (std::size_t t = 0; t < instances; ++t) {
    const auto pi = g.experiment(3);
    const auto d = g.problem(3);
    const Prior prior = g.prior();
    const std::size_t n = 1 + g.index(5);
    std::vector<Rational> bench;
    for (std::size_t i = 1; i <= n; ++i) bench.push_back(corpus::brute_vbar(d, pi, prior, static_cast<unsigned>(i)));
    std::vector<StrategyProfile> candidates;
    for (auto& eq : enumerate_equilibria(d, pi, prior, n, 16).equilibria) candidates.push_back(eq.profile);
    for (int k = 0; k < 2; ++k) candidates.push_back(corpus::random_profile(n, pi.size(), d.size(), g.engine()()));
    for (const auto& prof : candidates) {
      ++profiles;
      const auto v = evaluate_profile(d, pi, prior, prof).values;
      for (std::size_t i = 1; i <= n; ++i) {
        c.expect(v[i - 1] <= bench[i - 1], "instance " + std::to_string(t) + " agent " + std::to_string(i) + ": " +
                                               v[i - 1].str() + " > " + bench[i - 1].str());
      }
    }
  }
  if (c.out.pass) c.out.detail = std::to_string(instances) + " instances, " + std::to_string(profiles) + " profiles";
  return c.out;
}

// 4. Under a full/no-information mixture, equilibrium play matches the benchmark.
Outcome mixture_collapse() {
  Check c;
  corpus::Generator g(corpus::kSeed + 4);
  std::size_t eqs = 0;
  const std::size_t instances = 60;
  for (std::size_t t = 0; t < instances; ++t) {
    const Rational p = g.fraction();
    const auto pi = full_no_mixture(p);
    const auto d = g.problem(3);
    const Prior prior = g.prior();
    const auto all = enumerate_equilibria(d, pi, prior, 6, 64);
    for (const auto& eq : all.equilibria) {
      ++eqs;
      for (std::size_t i = 1; i <= 6; ++i) {
        // Agent i sees a revealing signal unless all i draws are uninformative.
        const Rational pn = power(p, i);
        const Rational closed = prior.mu0() * (1 - pn) * corpus::best_value(d, Rational(1)) +
                                (1 - prior.mu0()) * (1 - pn) * corpus::best_value(d, Rational(0)) +
                                pn * corpus::best_value(d, prior.mu0());
        const Rational bench = corpus::brute_vbar(d, pi, prior, static_cast<unsigned>(i));
        c.expect(bench == closed, "Vbar closed form, instance " + std::to_string(t));
        c.expect(eq.values[i - 1] == closed,
                 "instance " + std::to_string(t) + " agent " + std::to_string(i) + ": " + eq.values[i - 1].str());
      }
    }
  }
  if (c.out.pass) c.out.detail = std::to_string(instances) + " instances, " + std::to_string(eqs) + " equilibria";
  return c.out;
}

// Safe action is the unique best response at every belief up to the largest
// non-conclusive private belief (or the prior).
bool cascade_hypothesis(const DecisionProblem& d, const InformationStructure& pi, const Prior& prior) {
  Rational x = prior.mu0();
  for (std::size_t s = 0; s < pi.size(); ++s) {
    if (pi.likelihood(State::L, s).is_zero()) continue;
    x = max(x, belief_from_likelihoods(pi.likelihood(State::H, s), pi.likelihood(State::L, s), prior));
  }
  const auto at_zero = best_response_set(d, Rational(0));
  return at_zero.size() == 1 && best_response_set(d, x) == at_zero;
}

// 5. Cascade closed form.
Outcome cascade_oracle() {
  Check c;
  corpus::Generator g(corpus::kSeed + 5);
  std::vector<std::tuple<DecisionProblem, InformationStructure, Prior>> cases;
  cases.emplace_back(threshold_problem(Rational(7, 10)), two_sided(Rational(2, 5), Rational(1, 5)), kEven);
  std::size_t draws = 0;
  while (cases.size() < 60 && draws < 20000) {
    ++draws;
    auto pi = g.coin() ? g.conclusive_experiment() : g.experiment(3);
    auto d = g.coin() ? threshold_problem(g.interior()) : g.problem(3);
    const Prior prior = g.prior();
    if (cascade_hypothesis(d, pi, prior)) cases.emplace_back(std::move(d), std::move(pi), prior);
  }
  c.expect(cases.size() >= 50, "only " + std::to_string(cases.size()) + " instances satisfy the hypothesis");
  std::size_t eqs = 0;
  for (std::size_t t = 0; t < cases.size(); ++t) {
    const auto& [d, pi, prior] = cases[t];
    const std::size_t safe = best_response_set(d, Rational(0)).front();
    const std::size_t risky = best_response_set(d, Rational(1)).front();
    const Rational stay = 1 - conclusive_masses(pi).second;
    for (const auto& eq : enumerate_equilibria(d, pi, prior, 6, 64).equilibria) {
      ++eqs;
      for (std::size_t i = 1; i <= 6; ++i) {
        const Rational pn = power(stay, i);
        const Rational closed =
            prior.mu0() * ((1 - pn) * d.payoff(risky, State::H) + pn * d.payoff(safe, State::H)) +
            (1 - prior.mu0()) * d.payoff(safe, State::L);
        c.expect(eq.values[i - 1] == closed,
                 "instance " + std::to_string(t) + " agent " + std::to_string(i) + ": " + eq.values[i - 1].str());
        c.expect(cascade_value_oracle(d, pi, prior, i) == closed, "library oracle disagrees, instance " +
                                                                      std::to_string(t));
      }
    }
  }
  if (c.out.pass) c.out.detail = std::to_string(cases.size()) + " instances, " + std::to_string(eqs) + " equilibria";
  return c.out;
}

// 6. Geometric and algebraic Blackwell deciders agree.
Outcome blackwell_agreement() {
  Check c;
  corpus::Generator g(corpus::kSeed + 6);
  std::size_t positive = 0;
  const std::size_t pairs = 240;
  auto compare = [&](const InformationStructure& a, const InformationStructure& b, const std::string& tag) {
    const bool geometric = roc_dominates(a, b);
    const auto kernel = garbling_kernel(a, b);
    c.expect(geometric == kernel.has_value(), tag + ": deciders disagree");
    if (kernel) {
      ++positive;
      c.expect(kernel->reproduces(a, b), tag + ": kernel does not re-multiply");
    }
    return geometric;
  };
  for (std::size_t t = 0; t < pairs; ++t) {
    const auto pi = g.experiment(3);
    const auto pi_prime = g.coin() ? g.garble(pi, 1 + g.index(3)) : g.experiment(3);
    compare(pi, pi_prime, "pair " + std::to_string(t));
  }
  const auto ex1 = two_sided(Rational(2, 5), Rational(1, 5));
  const auto ex1_prime = two_sided(Rational(3, 5), Rational(1, 5));
  c.expect(compare(ex1, ex1_prime, "Example 1"), "Example 1 pair not ordered");
  c.expect(!compare(ex1_prime, ex1, "Example 1 reversed"), "reversed Example 1 pair ordered");
  if (c.out.pass) c.out.detail = std::to_string(pairs + 2) + " pairs, " + std::to_string(positive) + " kernels";
  return c.out;
}

// 7. Products of ordered pairs stay ordered.
Outcome product_preservation() {
  Check c;
  corpus::Generator g(corpus::kSeed + 7);
  const std::size_t quads = 120;
  for (std::size_t t = 0; t < quads; ++t) {
    const auto pi = g.experiment(3);
    const auto rho = g.experiment(3);
    const auto pi_prime = g.garble(pi, 1 + g.index(3));
    const auto rho_prime = g.garble(rho, 1 + g.index(3));
    c.expect(product_preserves_garbling_check(pi, pi_prime, rho, rho_prime, Verification::On),
             "quadruple " + std::to_string(t));
    const auto kernel = garbling_kernel(product(pi, rho), product(pi_prime, rho_prime));
    c.expect(kernel && kernel->reproduces(product(pi, rho), product(pi_prime, rho_prime)),
             "no product kernel, quadruple " + std::to_string(t));
  }
  if (c.out.pass) c.out.detail = std::to_string(quads) + " quadruples";
  return c.out;
}

// 8. Mixture existence matches the mass inequality.
Outcome mixture_existence() {
  Check c;
  corpus::Generator g(corpus::kSeed + 8);
  std::size_t some = 0;
  const std::size_t pairs = 240;
  for (std::size_t t = 0; t < pairs; ++t) {
    const auto pi = g.coin() ? g.conclusive_experiment(g.fraction(), g.fraction()) : g.experiment(3);
    const auto pi_prime = g.coin() ? g.garble(pi, 2) : g.experiment(3);
    const Prior prior = g.prior();
    const auto [cL, cH] = conclusive_masses(pi);
    Rational overlap;
    for (std::size_t s = 0; s < pi_prime.size(); ++s) {
      overlap += min(pi_prime.likelihood(State::L, s), pi_prime.likelihood(State::H, s));
    }
    const bool inequality = min(cL, cH) >= 1 - overlap;
    const auto mix = mixture_exists(pi, pi_prime, prior);
    const std::string tag = "pair " + std::to_string(t);
    c.expect(mix.has_value() == inequality, tag + ": verdict differs from inequality");
    if (!mix) continue;
    ++some;
    const auto upper = garbling_kernel(pi, mix->experiment);
    const auto lower = garbling_kernel(mix->experiment, pi_prime);
    c.expect(upper && upper->reproduces(pi, mix->experiment), tag + ": pi does not garble to the mixture");
    c.expect(lower && lower->reproduces(mix->experiment, pi_prime), tag + ": mixture does not garble to pi'");
    c.expect(three_point_garbling(*mix, pi_prime).reproduces(mix->experiment, pi_prime),
             tag + ": explicit kernel fails");
  }
  const InformationStructure pi({"s0", "s1", "s2"}, {Rational(17, 20), 0, Rational(3, 20)},
                                {0, Rational(9, 10), Rational(1, 10)});
  const auto v = check_sufficient_social(pi, InformationStructure::binary_symmetric(Rational(2, 3)), kEven);
  c.expect(v.status == VerdictStatus::ProvedBySufficient && v.mixture && v.mixture->p == Rational(3, 20),
           "sufficient condition does not return p = 3/20");
  if (c.out.pass) c.out.detail = std::to_string(pairs) + " pairs, " + std::to_string(some) + " mixtures, p = 3/20";
  return c.out;
}

// 9. Self comparison.
Outcome self_comparison() {
  Check c;
  corpus::Generator g(corpus::kSeed + 9);
  for (int t = 0; t < 10; ++t) {
    const Prior prior = g.prior();
    const auto v = self_social(full_no_mixture(g.fraction()), prior);
    c.expect(v.status == VerdictStatus::ProvedBySufficient, "mixture " + std::to_string(t) + " not proved");
  }
  const auto pi = InformationStructure::binary_symmetric(Rational(3, 4));
  const auto v = self_social(pi, kEven);
  c.expect(v.status == VerdictStatus::Refuted && v.counterexample && v.counterexample->profile,
           "{1/4, 3/4} not refuted");
  if (!c.out.pass) return c.out;
  const auto& cert = *v.counterexample;
  c.expect(verify_equilibrium(cert.problem, pi, kEven, *cert.profile).ok, "certificate is not an equilibrium");
  const Rational value = corpus::brute_value(cert.problem, pi, kEven, *cert.profile, 2);
  const Rational bench = corpus::brute_vbar(cert.problem, pi, kEven, 2);
  c.expect(cert.agent == 2 && value == cert.equilibrium_value && bench == cert.benchmark && value < bench,
           "certificate does not recheck");
  if (c.out.pass) c.out.detail = "V_2 = " + value.str() + " < " + bench.str() + " at r = " + cert.threshold->str();
  return c.out;
}

// 10. Splicing equilibrium play into the imitation profile only helps.
Outcome hybrid_chain() {
  Check c;
  corpus::Generator g(corpus::kSeed + 10);
  const std::size_t instances = 30, n = 6;
  for (std::size_t t = 0; t < instances; ++t) {
    const auto pi = g.conclusive_experiment(Rational(1, 2), Rational(1, 2));
    const auto [cL, cH] = conclusive_masses(pi);
    const Rational p = 1 - min(cL, cH);
    const auto d = g.problem(3);
    const Prior prior = g.prior();
    const std::string tag = "instance " + std::to_string(t);
    const auto eq = compute_equilibrium(d, pi, prior, n, first);
    const auto imit = imitation_profile(d, pi, p, prior, n);
    std::vector<std::vector<Rational>> chain;
    for (std::size_t k = 0; k <= n; ++k) {
      chain.push_back(evaluate_profile(d, pi, prior, hybrid_profile(eq.profile, imit, k)).values);
    }
    const auto mixture = full_no_mixture(p);
    for (std::size_t i = 1; i <= n; ++i) {
      const Rational bench = corpus::brute_vbar(d, mixture, prior, static_cast<unsigned>(i));
      c.expect(chain[0][i - 1] == bench, tag + ": imitation misses the mixture benchmark at " + std::to_string(i));
      for (std::size_t k = 0; k < i; ++k) {
        c.expect(chain[k + 1][i - 1] >= chain[k][i - 1], tag + ": chain drops at k = " + std::to_string(k));
      }
    }
    for (const auto& other : enumerate_equilibria(d, pi, prior, n, 32).equilibria) {
      for (std::size_t i = 1; i <= n; ++i) {
        c.expect(other.values[i - 1] >= chain[0][i - 1], tag + ": equilibrium below imitation");
      }
    }
  }
  if (c.out.pass) c.out.detail = std::to_string(instances) + " instances";
  return c.out;
}

// 11. Revealing augmentation attains the benchmark in equilibrium.
Outcome revealing_augmentation() {
  Check c;
  corpus::Generator g(corpus::kSeed + 11);
  const std::size_t instances = 30;
  for (std::size_t t = 0; t < instances; ++t) {
    const auto pi_prime = g.experiment(3);
    const auto d = g.problem(3);
    const Prior prior = g.prior();
    const std::size_t n = 2 + g.index(3);
    const auto aug = augment_revealing(d, pi_prime.signals());
    const auto prof = aug.revealing_profile(pi_prime, prior, n);
    const std::string tag = "instance " + std::to_string(t);
    c.expect(verify_equilibrium(aug.problem, pi_prime, prior, prof).ok, tag + ": not an equilibrium");
    const auto v = evaluate_profile(aug.problem, pi_prime, prior, prof).values;
    for (std::size_t i = 1; i <= n; ++i) {
      c.expect(v[i - 1] == corpus::brute_vbar(d, pi_prime, prior, static_cast<unsigned>(i)),
               tag + ": agent " + std::to_string(i) + " misses the benchmark");
    }
  }
  if (c.out.pass) c.out.detail = std::to_string(instances) + " instances";
  return c.out;
}

std::string seconds(double s) {
  std::ostringstream os;
  os.precision(2);
  os << std::fixed << s << "s";
  return os.str();
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double budget;  // seconds, 0 for none
  };
  const std::vector<Criterion> criteria{
      {"Example 1 reproduction", example1_reproduction, 5},
      {"Example 2 reproduction", example2_reproduction, 5},
      {"signal beats history on random instances", signal_beats_history, 0},
      {"mixture collapse to benchmark", mixture_collapse, 0},
      {"cascade closed form", cascade_oracle, 0},
      {"Blackwell decider agreement", blackwell_agreement, 0},
      {"product preservation", product_preservation, 0},
      {"mixture existence and p = 3/20", mixture_existence, 0},
      {"self comparison", self_comparison, 0},
      {"hybrid chain", hybrid_chain, 0},
      {"revealing augmentation", revealing_augmentation, 0},
  };

  const auto start = Clock::now();
  int failures = 0;
  int index = 0;
  auto report = [&](bool pass, const std::string& name, double secs, const std::string& detail) {
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << index << ". " << name << " (" << seconds(secs) << ")";
    if (!detail.empty()) std::cout << ": " << detail;
    std::cout << "\n" << std::flush;
    if (!pass) ++failures;
  };
  for (const auto& criterion : criteria) {
    ++index;
    const auto t0 = Clock::now();
    Outcome out;
    try {
      out = criterion.run();
    } catch (const std::exception& e) {
      out = {false, std::string("threw ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (criterion.budget > 0 && secs >= criterion.budget) {
      out.pass = false;
      out.detail = "over the " + seconds(criterion.budget) + " budget";
    }
    report(out.pass, criterion.name, secs, out.detail);
  }
  ++index;
  const double total = std::chrono::duration<double>(Clock::now() - start).count();
  report(total <= 300, "whole-suite runtime within 300s", total, "");
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << "\n";
  return failures == 0 ? 0 : 1;
}
