// Walks through the library on the instances in data/.
//
//   samples [DATA_DIR]

#include <iostream>
#include <string>

#include "sociallearn/sociallearn.hpp"

using namespace sociallearn;

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : "data";
  const Prior prior(Rational(1, 2));
  const auto pi = io::experiment_from_json(io::read_file(dir + "/example1_pi.json"));
  const auto pi_prime = io::experiment_from_json(io::read_file(dir + "/example1_piprime.json"));
  const auto d = io::problem_from_json(io::read_file(dir + "/threshold_7_10.json"));

  // pi is Blackwell more informative than pi'.
  const auto kernel = garbling_kernel(pi, pi_prime);
  std::cout << "pi >= pi' (Blackwell): " << std::boolalpha << kernel.has_value() << "\n";
  if (kernel) std::cout << io::to_json(*kernel).dump() << "\n";

  // Yet later agents learn less from observing pi-informed predecessors.
  const auto eq_pi = compute_equilibrium(d, pi, prior, 6, TieBreakPolicy::first_in_action_order());
  const auto eq_pi_prime = compute_equilibrium(d, pi_prime, prior, 6, TieBreakPolicy::first_in_action_order());
  std::cout << "agent  V(pi)          V(pi')\n";
  for (std::size_t i = 0; i < 6; ++i) {
    std::cout << i + 1 << "      " << eq_pi.values[i] << "    " << eq_pi_prime.values[i] << "\n";
  }

  const auto verdict = check_relation(Relation::S, pi, pi_prime, prior, 4);
  std::cout << "relation S: " << status_name(verdict.status);
  if (verdict.counterexample) {
    const auto& c = *verdict.counterexample;
    std::cout << " at r=" << *c.threshold << ", agent " << c.agent << ": " << c.equilibrium_value << " < "
              << c.benchmark;
  }
  std::cout << "\n";

  // A mixture of full and no information sits between these two.
  const auto strong = io::experiment_from_json(io::read_file(dir + "/conclusive_17_20_9_10.json"));
  const auto weak = io::experiment_from_json(io::read_file(dir + "/symmetric_2_3.json"));
  if (const auto m = mixture_exists(strong, weak, prior)) {
    std::cout << "mixture weight on no information: " << m->p << " (admissible up to " << m->p_max << ")\n";
  }
  return verdict.status == VerdictStatus::Refuted ? 0 : 1;
}
