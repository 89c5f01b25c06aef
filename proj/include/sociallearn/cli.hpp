#pragma once

#include <cstddef>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sociallearn/blackwell.hpp"
#include "sociallearn/equilibrium.hpp"
#include "sociallearn/error.hpp"
#include "sociallearn/io.hpp"
#include "sociallearn/model.hpp"
#include "sociallearn/orders.hpp"
#include "sociallearn/rational.hpp"
#include "sociallearn/scenarios.hpp"

namespace sociallearn::cli {

enum ExitCode : int { kOk = 0, kError = 1, kRefuted = 2 };

/// Everything a subcommand needs, filled from flags.
struct RunConfig {
  std::string command;
  std::string pi_path;
  std::string pi_prime_path;
  std::string problem_path;
  std::string prior = "1/2";
  std::size_t horizon = kDefaultHorizon;
  bool horizon_set = false;
  std::string tie_break = "first";
  std::string output = "json";
  std::string out_path;
  std::size_t cap_nodes = Limits{}.node_cap;
  std::size_t cap_atoms = Limits{}.atom_cap;
  std::size_t enumerate_cap = 64;
  std::string relation = "S";
  std::string scenario;
  std::size_t grid = 10;
  bool with_profile = false;
  // reproduce overrides
  std::string eps, delta, eps_prime, delta_prime, r;

  Limits limits() const { return Limits{cap_nodes, cap_atoms, enumerate_cap}; }
};

namespace detail {

using io::Json;

inline InformationStructure load_experiment(const std::string& path, const char* flag) {
  require(!path.empty(), ErrorCode::InvalidArgument, std::string(flag) + " is required");
  return io::guarded(path, [&] { return io::experiment_from_json(io::read_file(path)); });
}

inline DecisionProblem load_problem(const std::string& path) {
  require(!path.empty(), ErrorCode::InvalidArgument, "--problem is required");
  return io::guarded(path, [&] { return io::problem_from_json(io::read_file(path)); });
}

/// "p/q" or a JSON file holding {"mu0": "p/q"}.
inline Prior load_prior(const std::string& text) {
  if (text.size() > 5 && text.substr(text.size() - 5) == ".json") {
    return io::guarded(text, [&] { return io::prior_from_json(io::read_file(text)); });
  }
  return Prior(Rational::parse(text));
}

inline TieBreakPolicy load_tie_break(const std::string& text, const DecisionProblem& d) {
  if (text == "first") return TieBreakPolicy::first_in_action_order();
  if (text.rfind("pref:", 0) == 0) {
    std::vector<std::string> labels;
    std::stringstream list(text.substr(5));
    for (std::string item; std::getline(list, item, ',');) labels.push_back(item);
    return TieBreakPolicy::preference_list(d, labels);
  }
  throw Error(ErrorCode::InvalidArgument, "tie-break must be 'first', 'pref:a,b,...' or 'all'");
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string str() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t k = 0; k < cells.size(); ++k) out += (k ? "," : "") + cells[k];
      out += "\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
  }
};

inline std::string law_cell(const ActionDistribution& dist, const DecisionProblem& d) {
  std::string out;
  for (std::size_t a = 0; a < dist.size(); ++a) out += (a ? " " : "") + d.label(a) + ":" + dist[a].str();
  return out;
}

inline Json envelope(const std::string& command) { return Json{{"schema", io::kSchema}, {"command", command}}; }

struct Output {
  Json json;
  Csv csv;
  int status = kOk;
};

inline Csv gap_table(const OrderVerdict& v) {
  Csv csv{{"r", "i", "V", "Vbar", "gap"}, {}};
  if (!v.counterexample) return csv;
  const auto& c = *v.counterexample;
  const std::string r = c.threshold ? c.threshold->str() : "";
  for (std::size_t k = 0; k < c.gaps.size(); ++k) {
    csv.rows.push_back({r, std::to_string(k + 1), c.values[k].str(), c.benchmarks[k].str(), c.gaps[k].str()});
  }
  return csv;
}

inline Output verdict_output(const std::string& command, const OrderVerdict& v, const InformationStructure& pi) {
  Output o{envelope(command), gap_table(v), v.status == VerdictStatus::Refuted ? kRefuted : kOk};
  o.json["verdict"] = io::to_json(v, pi);
  return o;
}

inline Output run_inspect(const RunConfig& c) {
  const auto pi = load_experiment(c.pi_path, "--pi");
  const auto prior = load_prior(c.prior);
  const auto summary = private_belief_distribution(pi, prior);
  const auto cls = classify(pi, prior);
  Output o{envelope("inspect"), {{"belief", "prob"}, {}}, kOk};
  o.json["experiment"] = io::to_json(pi);
  o.json["prior"] = io::to_json(prior);
  o.json["private_beliefs"] = io::to_json(summary.distribution);
  o.json["conclusive_L_mass"] = summary.conclusive_L_mass.str();
  o.json["conclusive_H_mass"] = summary.conclusive_H_mass.str();
  Json groups = Json::array();
  for (const auto& g : summary.signal_groups) {
    Json labels = Json::array();
    for (auto s : g.signals) labels.push_back(pi.label(s));
    groups.push_back({{"belief", g.belief.str()}, {"signals", labels}});
  }
  o.json["signal_groups"] = groups;
  o.json["classification"] = {{"no_information", cls.is_no_information},
                              {"full_information", cls.is_full_information},
                              {"unbounded_beliefs", cls.has_unbounded_beliefs},
                              {"full_no_mixture", cls.is_full_no_mixture}};
  if (cls.mixture_weight) o.json["classification"]["mixture_weight"] = cls.mixture_weight->str();
  for (const auto& a : summary.distribution.atoms()) o.csv.rows.push_back({a.belief.str(), a.prob.str()});
  return o;
}

inline Output run_blackwell(const RunConfig& c) {
  const auto pi = load_experiment(c.pi_path, "--pi");
  const auto pi_prime = load_experiment(c.pi_prime_path, "--piprime");
  const auto prior = load_prior(c.prior);
  const bool roc = roc_dominates(pi, pi_prime);
  const auto kernel = garbling_kernel(pi, pi_prime);
  require(roc == kernel.has_value(), ErrorCode::InternalDisagreement, "ROC and kernel deciders disagree");
  const auto mixture = mixture_exists(pi, pi_prime, prior);
  Output o{envelope("blackwell"), {{"geq", "mixture_lower", "mixture_upper", "mixture_p"}, {}}, kOk};
  o.json["geq"] = roc;
  if (kernel) o.json["kernel"] = io::to_json(*kernel);
  o.json["mixture_lower"] = mixture_lower_side(pi_prime).str();
  o.json["mixture_upper"] = mixture_upper_side(pi, prior).str();
  if (mixture) {
    o.json["mixture"] = io::to_json(*mixture);
    o.json["mixture_kernel"] = io::to_json(three_point_garbling(*mixture, pi_prime));
  }
  o.csv.rows.push_back({roc ? "true" : "false", mixture_lower_side(pi_prime).str(),
                        mixture_upper_side(pi, prior).str(), mixture ? mixture->p.str() : ""});
  return o;
}

inline Output run_equilibrium(const RunConfig& c) {
  const auto pi = load_experiment(c.pi_path, "--pi");
  const auto d = load_problem(c.problem_path);
  const auto prior = load_prior(c.prior);
  const auto limits = c.limits();
  const auto vbar = observable_signal_value(d, pi, prior, c.horizon, limits);
  Output o{envelope("equilibrium"), {}, kOk};
  o.json["vbar"] = io::to_json(vbar);

  std::vector<EquilibriumResult> results;
  if (c.tie_break == "all") {
    auto all = enumerate_equilibria(d, pi, prior, c.horizon, c.enumerate_cap, limits);
    o.json["truncated"] = all.truncated;
    results = std::move(all.equilibria);
  } else {
    results.push_back(compute_equilibrium(d, pi, prior, c.horizon, load_tie_break(c.tie_break, d), limits));
  }
  Json list = Json::array();
  o.csv.header = {"equilibrium", "agent", "V", "Vbar", "alphaH", "alphaL"};
  for (std::size_t e = 0; e < results.size(); ++e) {
    const auto& r = results[e];
    Json j = io::to_json(r, d);
    j["verified"] = verify_equilibrium(d, pi, prior, r.profile, limits).ok;
    if (c.with_profile) j["profile"] = io::to_json(r.profile, pi, d);
    list.push_back(std::move(j));
    for (std::size_t i = 0; i < r.values.size(); ++i) {
      o.csv.rows.push_back({std::to_string(e), std::to_string(i + 1), r.values[i].str(), vbar[i].str(),
                            law_cell(r.action_laws[i].high, d), law_cell(r.action_laws[i].low, d)});
    }
  }
  o.json["equilibria"] = std::move(list);
  if (c.tie_break != "all") {
    // Single-equilibrium CSV keeps the documented five columns.
    for (auto& row : o.csv.rows) row.erase(row.begin());
    o.csv.header.erase(o.csv.header.begin());
  }
  return o;
}

inline Output run_vbar(const RunConfig& c) {
  const auto pi = load_experiment(c.pi_path, "--pi");
  const auto d = load_problem(c.problem_path);
  const auto prior = load_prior(c.prior);
  const auto vbar = observable_signal_value(d, pi, prior, c.horizon, c.limits());
  Output o{envelope("vbar"), {{"agent", "Vbar"}, {}}, kOk};
  o.json["vbar"] = io::to_json(vbar);
  for (std::size_t i = 0; i < vbar.size(); ++i) o.csv.rows.push_back({std::to_string(i + 1), vbar[i].str()});
  return o;
}

inline SearchOptions search_options(const RunConfig& c) {
  SearchOptions options;
  options.enumeration_cap = c.enumerate_cap;
  options.family.grid = c.grid;
  return options;
}

inline Output run_order(const RunConfig& c) {
  const auto relation = parse_relation(c.relation);
  const auto pi = load_experiment(c.pi_path, "--pi");
  const auto prior = load_prior(c.prior);
  const auto pi_prime = relation == Relation::SELF ? pi : load_experiment(c.pi_prime_path, "--piprime");
  const std::size_t horizon = c.horizon_set ? c.horizon : 4;
  return verdict_output("order", check_relation(relation, pi, pi_prime, prior, horizon, search_options(c), c.limits()),
                        pi);
}

inline Output run_refute(const RunConfig& c) {
  const auto pi = load_experiment(c.pi_path, "--pi");
  const auto pi_prime = load_experiment(c.pi_prime_path, "--piprime");
  const auto prior = load_prior(c.prior);
  const std::size_t horizon = c.horizon_set ? c.horizon : 4;
  return verdict_output("refute", refute_social(pi, pi_prime, prior, horizon, search_options(c), c.limits()), pi);
}

inline Rational param(const std::string& text, const char* fallback) {
  return Rational::parse(text.empty() ? std::string(fallback) : text);
}

inline Output run_reproduce(const RunConfig& c) {
  const auto limits = c.limits();
  Output o{envelope("reproduce"),
           {{"i", "V_pi", "V_pi_oracle", "V_piprime", "V_piprime_oracle", "Vbar_piprime", "gap"}, {}},
           kOk};
  o.json["scenario"] = c.scenario;
  std::optional<ScenarioBundle> bundle;
  std::vector<Rational> v_pi, v_pi_prime;
  std::size_t horizon = 0;
  std::string pi_label = "V_pi", pi_prime_label = "V_piprime";
  if (c.scenario == "example1") {
    horizon = c.horizon_set ? c.horizon : 8;
    bundle = example1(param(c.eps, "2/5"), param(c.delta, "1/5"), param(c.eps_prime, "3/5"), param(c.r, "7/10"),
                      load_prior(c.prior), horizon);
    v_pi = compute_equilibrium(bundle->problem, bundle->pi, bundle->prior, horizon,
                               TieBreakPolicy::first_in_action_order(), limits)
               .values;
    v_pi_prime = compute_equilibrium(bundle->problem, bundle->pi_prime, bundle->prior, horizon,
                                     TieBreakPolicy::first_in_action_order(), limits)
                     .values;
  } else if (c.scenario == "example2") {
    horizon = c.horizon_set ? c.horizon : 2;
    pi_label = "V_pi_safe_tiebreak";
    pi_prime_label = "V_piprime_revealing";
    require(horizon >= 2, ErrorCode::InvalidArgument, "example2 needs horizon >= 2");
    bundle = example2(param(c.eps, "1/2"), param(c.delta, "1/10"), param(c.eps_prime, "3/5"),
                      param(c.delta_prime, "1/5"));
    // Under pi: ties resolved to the first action, so agent 1 stays safe on s2.
    v_pi = compute_equilibrium(bundle->problem, bundle->pi, bundle->prior, horizon,
                               TieBreakPolicy::first_in_action_order(), limits)
               .values;
    // Under pi': the enumerated equilibrium where agent 2 reaches the benchmark.
    const auto vbar = observable_signal_value(bundle->problem, bundle->pi_prime, bundle->prior, horizon, limits);
    const auto all = enumerate_equilibria(bundle->problem, bundle->pi_prime, bundle->prior, horizon,
                                          c.enumerate_cap, limits);
    for (const auto& eq : all.equilibria) {
      if (eq.values[1] == vbar[1]) {
        v_pi_prime = eq.values;
        break;
      }
    }
    require(!v_pi_prime.empty(), ErrorCode::InternalDisagreement, "no enumerated equilibrium reveals the signal");
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown scenario '" + c.scenario + "'");
  }
  const auto vbar = observable_signal_value(bundle->problem, bundle->pi_prime, bundle->prior, horizon, limits);
  auto oracle_at = [&](const std::string& label, std::size_t i) -> std::string {
    for (const auto& v : bundle->oracle) {
      if (v.label == label && v.agent == i) return v.value.str();
    }
    return "";
  };
  Json params = Json::object();
  for (const auto& [k, v] : bundle->parameters) params[k] = v.str();
  o.json["parameters"] = params;
  o.json["pi"] = io::to_json(bundle->pi);
  o.json["piprime"] = io::to_json(bundle->pi_prime);
  o.json["problem"] = io::to_json(bundle->problem);
  Json rows = Json::array();
  for (std::size_t i = 1; i <= horizon; ++i) {
    const std::vector<std::string> row{std::to_string(i),          v_pi[i - 1].str(),
                                       oracle_at(pi_label, i),     v_pi_prime[i - 1].str(),
                                       oracle_at(pi_prime_label, i),
                                       vbar[i - 1].str(),          (v_pi_prime[i - 1] - v_pi[i - 1]).str()};
    Json j = Json::object();
    j["i"] = i;
    for (std::size_t k = 1; k < row.size(); ++k) {
      j[o.csv.header[k]] = row[k].empty() ? Json(nullptr) : Json(row[k]);
    }
    rows.push_back(std::move(j));
    o.csv.rows.push_back(row);
  }
  o.json["rows"] = std::move(rows);
  return o;
}

inline Output run_sweep(const RunConfig& c) {
  const auto pi = load_experiment(c.pi_path, "--pi");
  const auto pi_prime = load_experiment(c.pi_prime_path, "--piprime");
  const auto prior = load_prior(c.prior);
  const auto limits = c.limits();
  const std::size_t horizon = c.horizon_set ? c.horizon : 4;
  require(c.grid >= 2, ErrorCode::InvalidArgument, "grid must be at least 2");
  Output o{envelope("sweep"), {{"r", "i", "V", "Vbar", "gap"}, {}}, kOk};
  Json rows = Json::array();
  bool truncated = false;
  for (std::size_t k = 1; k < c.grid; ++k) {
    const Rational r(static_cast<long>(k), static_cast<long>(c.grid));
    const auto d = threshold_problem(r);
    const auto all = enumerate_equilibria(d, pi, prior, horizon, c.enumerate_cap, limits);
    truncated = truncated || all.truncated;
    const auto vbar = observable_signal_value(d, pi_prime, prior, horizon, limits);
    for (std::size_t i = 0; i < horizon; ++i) {
      // Worst equilibrium under pi at this agent.
      Rational worst = all.equilibria.front().values[i];
      for (const auto& eq : all.equilibria) worst = min(worst, eq.values[i]);
      const std::vector<std::string> row{r.str(), std::to_string(i + 1), worst.str(), vbar[i].str(),
                                         (vbar[i] - worst).str()};
      rows.push_back({{"r", row[0]}, {"i", i + 1}, {"V", row[2]}, {"Vbar", row[3]}, {"gap", row[4]}});
      o.csv.rows.push_back(row);
    }
  }
  o.json["truncated"] = truncated;
  o.json["rows"] = std::move(rows);
  return o;
}

inline void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--prior", c.prior, "prior on H as p/q, or a JSON file with mu0");
  sub->add_option("--output", c.output, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--out", c.out_path, "write to this file instead of stdout");
  sub->add_option("--cap-nodes", c.cap_nodes, "history-tree node cap")->check(CLI::PositiveNumber);
  sub->add_option("--cap-atoms", c.cap_atoms, "iid-power atom cap")->check(CLI::PositiveNumber);
  sub->add_option("--enumerate-cap", c.enumerate_cap, "max equilibria per enumeration")->check(CLI::PositiveNumber);
  sub->add_option_function<std::size_t>(
         "--horizon", [&c](std::size_t n) { c.horizon = n, c.horizon_set = true; }, "number of agents")
      ->check(CLI::PositiveNumber);
}

}  // namespace detail

/// Runs one command line. Returns 0 on success, 2 when a relation is
/// refuted, 1 on any error (reported as "Code: message" on `err`).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Exact social-learning comparisons of information structures", "sociallearn"};
  app.require_subcommand(1);

  auto* inspect = app.add_subcommand("inspect", "private belief law and classification of an experiment");
  inspect->add_option("--pi", c.pi_path, "experiment JSON")->required();

  auto* blackwell = app.add_subcommand("blackwell", "Blackwell comparison with kernel and mixture certificates");
  blackwell->add_option("--pi", c.pi_path)->required();
  blackwell->add_option("--piprime", c.pi_prime_path)->required();

  auto* equilibrium = app.add_subcommand("equilibrium", "pure equilibrium values and action laws");
  equilibrium->add_option("--pi", c.pi_path)->required();
  equilibrium->add_option("--problem", c.problem_path)->required();
  equilibrium->add_option("--tie-break", c.tie_break, "first | pref:a1,a0 | all");
  equilibrium->add_flag("--profile", c.with_profile, "include the strategy profile");

  auto* vbar = app.add_subcommand("vbar", "benchmark values with observable signals");
  vbar->add_option("--pi", c.pi_path)->required();
  vbar->add_option("--problem", c.problem_path)->required();

  auto* order = app.add_subcommand("order", "decide or refute a relation between two experiments");
  order->add_option("mode", c.scenario, "optional 'check'")->check(CLI::IsMember({"check"}));
  order->add_option("--relation", c.relation, "S | ES | W | SELF")->check(CLI::IsMember({"S", "ES", "W", "SELF"}));
  order->add_option("--pi", c.pi_path)->required();
  order->add_option("--piprime", c.pi_prime_path);
  order->add_option("--grid", c.grid, "threshold grid denominator");

  auto* refute = app.add_subcommand("refute", "search threshold problems for a counterexample");
  refute->add_option("--pi", c.pi_path)->required();
  refute->add_option("--piprime", c.pi_prime_path)->required();
  refute->add_option("--grid", c.grid, "threshold grid denominator");

  auto* reproduce = app.add_subcommand("reproduce", "rebuild a worked example with engine and closed forms");
  reproduce->add_option("scenario", c.scenario, "example1 | example2")
      ->required()
      ->check(CLI::IsMember({"example1", "example2"}));
  reproduce->add_option("--eps", c.eps);
  reproduce->add_option("--delta", c.delta);
  reproduce->add_option("--eps-prime", c.eps_prime);
  reproduce->add_option("--delta-prime", c.delta_prime);
  reproduce->add_option("--r", c.r);

  auto* sweep = app.add_subcommand("sweep", "gap table over a threshold grid");
  sweep->add_option("--pi", c.pi_path)->required();
  sweep->add_option("--piprime", c.pi_prime_path)->required();
  sweep->add_option("--grid", c.grid, "threshold grid denominator");

  for (auto* sub : {inspect, blackwell, equilibrium, vbar, order, refute, reproduce, sweep}) detail::add_common(sub, c);

  std::vector<std::string> storage{"sociallearn"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << code_name(ErrorCode::InvalidArgument) << ": " << e.what() << "\n";
    return kError;
  }

  try {
    detail::Output result;
    if (inspect->parsed()) result = detail::run_inspect(c);
    if (blackwell->parsed()) result = detail::run_blackwell(c);
    if (equilibrium->parsed()) result = detail::run_equilibrium(c);
    if (vbar->parsed()) result = detail::run_vbar(c);
    if (order->parsed()) result = detail::run_order(c);
    if (refute->parsed()) result = detail::run_refute(c);
    if (reproduce->parsed()) result = detail::run_reproduce(c);
    if (sweep->parsed()) result = detail::run_sweep(c);

    const std::string text = c.output == "csv" ? result.csv.str() : result.json.dump(2) + "\n";
    if (c.out_path.empty()) {
      out << text;
    } else {
      std::ofstream file(c.out_path);
      require(static_cast<bool>(file), ErrorCode::InvalidArgument, "cannot write " + c.out_path);
      file << text;
    }
    return result.status;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kError;
  }
}

}  // namespace sociallearn::cli
