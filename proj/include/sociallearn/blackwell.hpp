#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sociallearn/error.hpp"
#include "sociallearn/model.hpp"
#include "sociallearn/rational.hpp"
#include "sociallearn/simplex.hpp"

namespace sociallearn {

struct RocVertex {
  Rational false_positive;  // cumulative likelihood under L
  Rational true_positive;   // cumulative likelihood under H

  friend bool operator==(const RocVertex&, const RocVertex&) = default;
};

/// Upper concave ROC curve of an experiment, from (0,0) to (1,1).
///
/// Signals are accumulated in decreasing order of the likelihood ratio
/// pi(s|H)/pi(s|L); signals with equal ratio share a segment.
class RocCurve {
 public:
  explicit RocCurve(const InformationStructure& pi) {
    std::vector<std::size_t> order(pi.size());
    for (std::size_t s = 0; s < order.size(); ++s) order[s] = s;
    // a before b iff H_a L_b > H_b L_a
    auto ratio_cmp = [&](std::size_t a, std::size_t b) {
      const Rational lhs = pi.likelihood(State::H, a) * pi.likelihood(State::L, b);
      const Rational rhs = pi.likelihood(State::H, b) * pi.likelihood(State::L, a);
      return lhs <=> rhs;
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ratio_cmp(a, b) > 0; });

    vertices_.push_back({Rational(0), Rational(0)});
    Rational fp, tp;
    for (std::size_t k = 0; k < order.size(); ++k) {
      fp += pi.likelihood(State::L, order[k]);
      tp += pi.likelihood(State::H, order[k]);
      const bool ends_segment = k + 1 == order.size() || ratio_cmp(order[k], order[k + 1]) != 0;
      if (ends_segment) vertices_.push_back({fp, tp});
    }
  }

  const std::vector<RocVertex>& vertices() const noexcept { return vertices_; }

  /// Highest true-positive rate achievable at false-positive rate `fp`.
  Rational envelope(const Rational& fp) const {
    require(fp.sign() >= 0 && fp <= Rational(1), ErrorCode::InvalidArgument, "false-positive rate outside [0,1]");
    Rational best = vertices_.front().true_positive;
    for (std::size_t k = 0; k + 1 < vertices_.size(); ++k) {
      const auto& a = vertices_[k];
      const auto& b = vertices_[k + 1];
      if (fp < a.false_positive || b.false_positive < fp) continue;
      if (a.false_positive == b.false_positive) {
        best = max(best, b.true_positive);
      } else {
        const Rational t = (fp - a.false_positive) / (b.false_positive - a.false_positive);
        best = max(best, a.true_positive + t * (b.true_positive - a.true_positive));
      }
    }
    return best;
  }

 private:
  std::vector<RocVertex> vertices_;
};

/// Geometric decider: every vertex of pi''s ROC curve lies on or below pi's.
inline bool roc_dominates(const InformationStructure& pi, const InformationStructure& pi_prime) {
  const RocCurve upper(pi);
  const RocCurve lower(pi_prime);
  return std::all_of(lower.vertices().begin(), lower.vertices().end(),
                     [&](const RocVertex& v) { return v.true_positive <= upper.envelope(v.false_positive); });
}

/// Row-stochastic map from source signals to target signals.
struct GarblingKernel {
  std::vector<std::string> source;
  std::vector<std::string> target;
  std::vector<std::vector<Rational>> weights;  // [source][target]

  /// Likelihood rows of the garbled experiment, indexed like `target`.
  std::vector<Rational> apply(const InformationStructure& pi, State state) const {
    std::vector<Rational> out(target.size());
    for (std::size_t s = 0; s < source.size(); ++s) {
      const auto index = pi.index_of(source[s]);
      require(index.has_value(), ErrorCode::ShapeMismatch, "kernel source signal '" + source[s] + "' not in experiment");
      for (std::size_t t = 0; t < target.size(); ++t) out[t] += weights[s][t] * pi.likelihood(state, *index);
    }
    return out;
  }

  bool is_stochastic() const {
    for (const auto& row : weights) {
      Rational sum;
      for (const auto& w : row) {
        if (w.sign() < 0) return false;
        sum += w;
      }
      if (sum != Rational(1)) return false;
    }
    return true;
  }

  /// True iff the kernel is stochastic, covers every signal of `pi` and maps it
  /// exactly onto `pi_prime`.
  bool reproduces(const InformationStructure& pi, const InformationStructure& pi_prime) const {
    if (!is_stochastic() || source.size() != pi.size() || target.size() != pi_prime.size()) return false;
    for (const auto& label : source) {
      if (!pi.index_of(label)) return false;
    }
    for (State state : {State::L, State::H}) {
      const auto rows = apply(pi, state);
      for (std::size_t t = 0; t < target.size(); ++t) {
        const auto index = pi_prime.index_of(target[t]);
        if (!index || rows[t] != pi_prime.likelihood(state, *index)) return false;
      }
    }
    return true;
  }
};

/// Algebraic decider: solves for a garbling kernel exactly. Returns nullopt
/// when no kernel exists.
inline std::optional<GarblingKernel> garbling_kernel(const InformationStructure& pi,
                                                     const InformationStructure& pi_prime) {
  const std::size_t n_src = pi.size();
  const std::size_t n_tgt = pi_prime.size();
  const std::size_t vars = n_src * n_tgt;
  auto var = [&](std::size_t s, std::size_t t) { return s * n_tgt + t; };

  std::vector<std::vector<Rational>> A;
  std::vector<Rational> b;
  for (std::size_t s = 0; s < n_src; ++s) {
    std::vector<Rational> row(vars);
    for (std::size_t t = 0; t < n_tgt; ++t) row[var(s, t)] = Rational(1);
    A.push_back(std::move(row));
    b.emplace_back(1);
  }
  for (State state : {State::L, State::H}) {
    for (std::size_t t = 0; t < n_tgt; ++t) {
      std::vector<Rational> row(vars);
      for (std::size_t s = 0; s < n_src; ++s) row[var(s, t)] = pi.likelihood(state, s);
      A.push_back(std::move(row));
      b.push_back(pi_prime.likelihood(state, t));
    }
  }

  const auto solution = find_nonnegative_solution(A, b);
  if (!solution) return std::nullopt;

  GarblingKernel kernel{pi.signals(), pi_prime.signals(), {}};
  kernel.weights.assign(n_src, std::vector<Rational>(n_tgt));
  for (std::size_t s = 0; s < n_src; ++s) {
    for (std::size_t t = 0; t < n_tgt; ++t) kernel.weights[s][t] = (*solution)[var(s, t)];
  }
  require(kernel.reproduces(pi, pi_prime), ErrorCode::InternalDisagreement,
          "feasibility solver returned a kernel that does not re-multiply");
  return kernel;
}

enum class Verification { Off, On };

#ifdef NDEBUG
inline constexpr Verification kDefaultVerification = Verification::Off;
#else
inline constexpr Verification kDefaultVerification = Verification::On;
#endif

/// pi is Blackwell more informative than pi_prime. With verification on, the
/// geometric verdict is cross-checked against the exact kernel search.
inline bool blackwell_geq(const InformationStructure& pi, const InformationStructure& pi_prime,
                          Verification verification = kDefaultVerification) {
  const bool geometric = roc_dominates(pi, pi_prime);
  if (verification == Verification::On) {
    const bool algebraic = garbling_kernel(pi, pi_prime).has_value();
    require(geometric == algebraic, ErrorCode::InternalDisagreement,
            std::string("ROC decider says ") + (geometric ? "true" : "false") + " but kernel search says " +
                (algebraic ? "true" : "false"));
  }
  return geometric;
}

/// Blackwell order is preserved by independent products. Requires both
/// premises; returns the product verdict.
inline bool product_preserves_garbling_check(const InformationStructure& pi, const InformationStructure& pi_prime,
                                             const InformationStructure& rho, const InformationStructure& rho_prime,
                                             Verification verification = kDefaultVerification) {
  require(blackwell_geq(pi, pi_prime, verification) && blackwell_geq(rho, rho_prime, verification),
          ErrorCode::PreconditionViolated, "both factor pairs must be Blackwell ordered");
  return blackwell_geq(product(pi, rho), product(pi_prime, rho_prime), verification);
}

/// Mixture of full information (weight 1 - p) and no information (weight p).
/// Signals: "m0" conclusive for L, "m1" conclusive for H, "mu" uninformative.
inline InformationStructure full_no_mixture(const Rational& p) {
  require(p.sign() >= 0 && p <= Rational(1), ErrorCode::InvalidArgument, "mixture weight outside [0,1]");
  const Rational q = Rational(1) - p;
  return InformationStructure({"m0", "m1", "mu"}, {q, Rational(0), p}, {Rational(0), q, p});
}

struct MixtureExperiment {
  Rational p;  // no-information weight
  InformationStructure experiment;
  /// Every p in [p_min, p_max] gives an admissible mixture; p == p_min.
  Rational p_min;
  Rational p_max;
  /// p is 0 or 1, so the support is a strict subset of {0, mu0, 1}.
  bool degenerate = false;
};

/// 1 - sum_s min{pi'(s|L), pi'(s|H)}
inline Rational mixture_lower_side(const InformationStructure& pi_prime) {
  Rational overlap;
  for (std::size_t s = 0; s < pi_prime.size(); ++s) {
    overlap += min(pi_prime.likelihood(State::L, s), pi_prime.likelihood(State::H, s));
  }
  return Rational(1) - overlap;
}

/// min{pi(mu=0|L), pi(mu=1|H)}
inline Rational mixture_upper_side(const InformationStructure& pi, const Prior& prior) {
  const auto summary = private_belief_distribution(pi, prior);
  return min(summary.conclusive_L_mass, summary.conclusive_H_mass);
}

/// Looks for a full/no-information mixture sandwiched between pi and pi_prime
/// in the Blackwell order. Picks the most informative admissible one.
inline std::optional<MixtureExperiment> mixture_exists(const InformationStructure& pi,
                                                       const InformationStructure& pi_prime, const Prior& prior) {
  const Rational lower = mixture_lower_side(pi_prime);
  const Rational upper = mixture_upper_side(pi, prior);
  if (upper < lower) return std::nullopt;

  const Rational p = max(Rational(1) - upper, Rational(0));
  const Rational p_max = Rational(1) - lower;
  MixtureExperiment mixture{p, full_no_mixture(p), p, p_max, p.is_zero() || p == Rational(1)};
  require(blackwell_geq(pi, mixture.experiment, Verification::On) &&
              blackwell_geq(mixture.experiment, pi_prime, Verification::On),
          ErrorCode::InternalDisagreement, "constructed mixture is not Blackwell sandwiched");
  return mixture;
}

/// Explicit kernel from the mixture onto pi_prime, routed through the
/// three-signal experiment whose uninformative mass equals the overlap
/// sum_s min{pi'(s|L), pi'(s|H)}.
inline GarblingKernel three_point_garbling(const MixtureExperiment& mixture, const InformationStructure& pi_prime) {
  const Rational one(1);
  const Rational overlap = one - mixture_lower_side(pi_prime);
  require(mixture.p <= overlap, ErrorCode::PreconditionViolated,
          "mixture weight " + mixture.p.str() + " exceeds overlap " + overlap.str());
  const Rational& p = mixture.p;

  const auto& src = mixture.experiment;
  GarblingKernel kernel{src.signals(), pi_prime.signals(), {}};
  for (const auto& label : src.signals()) {
    std::vector<Rational> row(pi_prime.size());
    for (std::size_t s = 0; s < pi_prime.size(); ++s) {
      const Rational& lik_L = pi_prime.likelihood(State::L, s);
      const Rational& lik_H = pi_prime.likelihood(State::H, s);
      const Rational shared = min(lik_L, lik_H);
      // Uninformative part of the target, reached through the pooled signal.
      const Rational pooled = overlap.is_zero() ? Rational(0) : shared / overlap;
      if (label == "mu") {
        row[s] = pooled;
        continue;
      }
      const Rational excess = label == "m0" ? max(lik_L - lik_H, Rational(0)) : max(lik_H - lik_L, Rational(0));
      row[s] = excess / (one - p) + (overlap - p) / (one - p) * pooled;
    }
    kernel.weights.push_back(std::move(row));
  }
  require(kernel.reproduces(src, pi_prime), ErrorCode::InternalDisagreement,
          "three-point garbling does not reproduce the target");
  return kernel;
}

}  // namespace sociallearn
