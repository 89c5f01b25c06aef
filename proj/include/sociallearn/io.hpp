#pragma once

#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sociallearn/blackwell.hpp"
#include "sociallearn/equilibrium.hpp"
#include "sociallearn/error.hpp"
#include "sociallearn/model.hpp"
#include "sociallearn/orders.hpp"
#include "sociallearn/rational.hpp"

namespace sociallearn::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "v1";

inline Json to_json(const Rational& r) { return r.str(); }

inline Rational rational_from_json(const Json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw Error(ErrorCode::ParseError, "expected a rational string, got " + j.dump());
}

inline Json to_json(const std::vector<Rational>& values) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(v.str());
  return out;
}

namespace detail {

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::ParseError, std::string("missing field '") + key + "'");
  return j.at(key);
}

inline std::vector<std::string> labels(const Json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, std::string(what) + " must be an array");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw Error(ErrorCode::ParseError, std::string(what) + " entries must be strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

inline std::vector<Rational> rationals(const Json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, std::string(what) + " must be an array");
  std::vector<Rational> out;
  for (const auto& e : j) out.push_back(rational_from_json(e));
  return out;
}

}  // namespace detail

inline Json to_json(const InformationStructure& pi) {
  Json j;
  j["signals"] = pi.signals();
  j["likelihood"]["L"] = to_json(pi.row(State::L));
  j["likelihood"]["H"] = to_json(pi.row(State::H));
  return j;
}

inline InformationStructure experiment_from_json(const Json& j) {
  const auto& lik = detail::field(j, "likelihood");
  return InformationStructure(detail::labels(detail::field(j, "signals"), "signals"),
                              detail::rationals(detail::field(lik, "L"), "likelihood.L"),
                              detail::rationals(detail::field(lik, "H"), "likelihood.H"));
}

inline Json to_json(const DecisionProblem& d) {
  Json j;
  j["actions"] = d.actions();
  Json pay = Json::object();
  for (std::size_t a = 0; a < d.size(); ++a) {
    pay[d.label(a)] = {{"L", d.payoff(a, State::L).str()}, {"H", d.payoff(a, State::H).str()}};
  }
  j["payoff"] = std::move(pay);
  return j;
}

inline DecisionProblem problem_from_json(const Json& j) {
  const auto actions = detail::labels(detail::field(j, "actions"), "actions");
  const auto& pay = detail::field(j, "payoff");
  std::vector<Rational> L, H;
  for (const auto& a : actions) {
    const auto& row = detail::field(pay, a.c_str());
    L.push_back(rational_from_json(detail::field(row, "L")));
    H.push_back(rational_from_json(detail::field(row, "H")));
  }
  return DecisionProblem(actions, std::move(L), std::move(H));
}

inline Json to_json(const Prior& p) { return {{"mu0", p.mu0().str()}}; }

inline Prior prior_from_json(const Json& j) { return Prior(rational_from_json(detail::field(j, "mu0"))); }

inline Json to_json(const BeliefDistribution& dist) {
  Json out = Json::array();
  for (const auto& a : dist.atoms()) out.push_back({{"belief", a.belief.str()}, {"prob", a.prob.str()}});
  return out;
}

inline Json to_json(const GarblingKernel& k) {
  Json j;
  j["source"] = k.source;
  j["target"] = k.target;
  Json rows = Json::object();
  for (std::size_t s = 0; s < k.source.size(); ++s) {
    Json row = Json::object();
    for (std::size_t t = 0; t < k.target.size(); ++t) {
      if (!k.weights[s][t].is_zero()) row[k.target[t]] = k.weights[s][t].str();
    }
    rows[k.source[s]] = std::move(row);
  }
  j["kernel"] = std::move(rows);
  return j;
}

inline Json to_json(const MixtureExperiment& m) {
  return {{"p", m.p.str()},
          {"p_min", m.p_min.str()},
          {"p_max", m.p_max.str()},
          {"degenerate", m.degenerate},
          {"experiment", to_json(m.experiment)}};
}

/// History keys list action labels; decisions list nonzero probabilities.
inline Json to_json(const StrategyProfile& profile, const InformationStructure& pi, const DecisionProblem& d) {
  Json nodes = Json::array();
  for (const auto& [history, decision] : profile.table()) {
    Json path = Json::array();
    for (auto a : history) path.push_back(d.label(a));
    Json dec = Json::object();
    for (std::size_t s = 0; s < decision.size(); ++s) {
      Json dist = Json::object();
      for (std::size_t a = 0; a < decision[s].size(); ++a) {
        if (!decision[s][a].is_zero()) dist[d.label(a)] = decision[s][a].str();
      }
      dec[pi.label(s)] = std::move(dist);
    }
    nodes.push_back({{"history", std::move(path)}, {"decision", std::move(dec)}});
  }
  return {{"horizon", profile.horizon()}, {"nodes", std::move(nodes)}};
}

inline StrategyProfile profile_from_json(const Json& j, const InformationStructure& pi, const DecisionProblem& d) {
  const auto horizon = detail::field(j, "horizon").get<std::size_t>();
  StrategyProfile profile(horizon, pi.size(), d.size());
  for (const auto& node : detail::field(j, "nodes")) {
    History history;
    for (const auto& label : detail::labels(detail::field(node, "history"), "history")) {
      history.push_back(d.index_of(label));
    }
    Decision decision(pi.size(), ActionDistribution(d.size()));
    const auto& dec = detail::field(node, "decision");
    for (std::size_t s = 0; s < pi.size(); ++s) {
      for (const auto& [action, prob] : detail::field(dec, pi.label(s).c_str()).items()) {
        decision[s][d.index_of(action)] = rational_from_json(prob);
      }
    }
    profile.set(std::move(history), std::move(decision));
  }
  return profile;
}

inline Json to_json(const ActionDistribution& dist, const DecisionProblem& d) {
  Json j = Json::object();
  for (std::size_t a = 0; a < dist.size(); ++a) j[d.label(a)] = dist[a].str();
  return j;
}

inline Json to_json(const EquilibriumResult& r, const DecisionProblem& d) {
  Json laws = Json::array();
  for (const auto& law : r.action_laws) laws.push_back({{"H", to_json(law.high, d)}, {"L", to_json(law.low, d)}});
  return {{"values", to_json(r.values)},
          {"action_laws", std::move(laws)},
          {"diagnostics",
           {{"tie_sites", r.diagnostics.tie_sites},
            {"pruned_nodes", r.diagnostics.pruned_nodes},
            {"nodes", r.diagnostics.nodes}}}};
}

inline Json to_json(const CounterexampleBundle& b, const InformationStructure& pi) {
  Json j;
  j["problem"] = to_json(b.problem);
  if (b.threshold) j["r"] = b.threshold->str();
  j["i"] = b.agent;
  j["V"] = b.equilibrium_value.str();
  j["Vbar"] = b.benchmark.str();
  j["gap"] = b.gap.str();
  j["values"] = to_json(b.values);
  j["benchmarks"] = to_json(b.benchmarks);
  j["gaps"] = to_json(b.gaps);
  if (b.profile) j["profile"] = to_json(*b.profile, pi, b.problem);
  return j;
}

inline Json to_json(const OrderVerdict& v, const InformationStructure& pi) {
  Json j;
  j["relation"] = std::string(relation_name(v.relation));
  j["status"] = std::string(status_name(v.status));
  if (v.mixture) j["mixture"] = to_json(*v.mixture);
  if (v.counterexample) j["counterexample"] = to_json(*v.counterexample, pi);
  if (!v.weak_checks.empty()) {
    Json checks = Json::array();
    for (const auto& c : v.weak_checks) {
      checks.push_back({{"problem", to_json(c.problem)},
                        {"case", c.construction},
                        {"values", to_json(c.values)},
                        {"min_margin", c.min_margin.str()},
                        {"rivals", c.rivals},
                        {"rivals_truncated", c.rivals_truncated},
                        {"holds", c.holds}});
    }
    j["weak_checks"] = std::move(checks);
  }
  j["persistence_proved"] = v.persistence_proved;
  j["family_relative"] = v.family_relative;
  j["notes"] = v.notes;
  return j;
}

inline Json parse_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, origin + ": " + e.what());
  }
}

inline Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_text(buffer.str(), path);
}

/// Runs a parser and turns JSON type errors into ParseError. Validation
/// errors from the model keep their own code.
template <typename F>
auto guarded(const std::string& origin, F&& parse) -> decltype(parse()) {
  try {
    return parse();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, origin + ": " + e.what());
  }
}

}  // namespace sociallearn::io
