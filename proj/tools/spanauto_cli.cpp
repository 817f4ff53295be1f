// spanauto: command-line front end for the automaton library.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "spanauto/determinize.hpp"
#include "spanauto/dot.hpp"
#include "spanauto/io.hpp"
#include "spanauto/laws.hpp"
#include "spanauto/simulation.hpp"

namespace {

using namespace spanauto;

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kInputError = 2;

int cmd_validate(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::input, file + ": cannot open file");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::input, file + ": malformed JSON: " + e.what());
  }
  std::vector<std::string> violations;
  if (j.is_object() && j.value("kind", "") == "simulation") {
    try {
      violations = validate(simulation_from_json(j, std::filesystem::path(file).parent_path()));
    } catch (const Error& e) {
      throw Error(e.code(), file + ": " + e.what());
    }
  } else {
    load_automaton(file);
  }
  for (const auto& v : violations) std::cerr << file << ": " << v << "\n";
  if (!violations.empty()) return kCheckFailed;
  std::cout << "ok\n";
  return kOk;
}

int cmd_det(const std::string& file, bool prune, std::size_t cap) {
  const AutomatonDocument doc = load_automaton(file);
  DetAutomaton d = det_span(doc.automaton, DetOptions{cap});
  if (prune) d = prune_reachable(d);
  std::cout << dump(to_json(d));
  return kOk;
}

int cmd_mdet(const std::string& file, bool expand, std::size_t max_len, std::size_t max_states) {
  const AutomatonDocument doc = load_automaton(file);
  const MDetMachine m = mdet(doc.automaton);
  if (expand)
    std::cout << dump(to_json(m, mdet_expand(m, max_states, max_len)));
  else
    std::cout << dump(to_json(m));
  return kOk;
}

int cmd_classical(const std::string& file) {
  const AutomatonDocument doc = load_automaton(file);
  const ClassicalNFA n = classical_from(rel_of(doc.automaton));
  std::cout << dump(to_json(classical_subset_construction(n)));
  return kOk;
}

int cmd_lang(const std::string& file, std::size_t max_len, bool count) {
  const SpanAutomaton a = load_automaton(file).automaton;
  for (const Word& w : language(a, max_len)) {
    std::cout << word_text(a.base, w);
    if (count) std::cout << '\t' << count_paths(a, w);
    std::cout << '\n';
  }
  return kOk;
}

int cmd_sim_check(const std::string& file, const std::string& mode) {
  const Simulation sim = load_simulation(file);
  const Strength strength = mode.empty() ? sim.strength : parse_strength(mode);
  const CheckResult r = check_span_simulation(sim, strength);
  if (r.ok) {
    std::cout << "ok: " << to_string(strength) << " simulation\n";
    return kOk;
  }
  std::cout << "fail: " << r.detail << "\n";
  return kCheckFailed;
}

int cmd_factor(const std::string& file, const std::string& target, std::size_t max_len,
               std::size_t max_states) {
  const Simulation alpha = load_simulation(file);
  const DetAutomaton g = as_det(alpha.target);
  const FactorizationResult r =
      target == "det" ? factor_det(alpha, g) : factor_mdet(alpha, g, max_len, max_states);
  std::cout << dump(to_json(r, target));
  return r.composite_ok && r.bisim_ok ? kOk : kCheckFailed;
}

int cmd_laws(std::uint64_t seed, std::size_t cases) {
  int status = kOk;
  for (const LawReport& r : run_all_laws(seed, cases)) {
    std::cout << r.name << '\t' << r.cases << '\t' << (r.ok ? "ok" : "FAIL") << '\n';
    if (!r.ok) {
      std::cout << "  counterexample (seed " << seed << "):\n  " << r.counterexample << '\n';
      status = kCheckFailed;
    }
  }
  return status;
}

int cmd_dot(const std::string& file) {
  const SpanAutomaton a = load_automaton(file).automaton;
  std::cout << to_dot(a, std::filesystem::path(file).stem().string());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Categorical nondeterministic automata: determinization, simulations, laws"};
  app.name("spanauto");
  app.require_subcommand(1);

  std::string file, mode, target = "det";
  bool prune = false, expand = false, count = false;
  std::size_t cap = kPowersetTableLimit, max_len = 4, max_states = kDefaultMaxStates, cases = 1000;
  std::uint64_t seed = 0;

  auto* validate_cmd = app.add_subcommand("validate", "Check an automaton or simulation document");
  validate_cmd->add_option("file", file)->required();

  auto* det_cmd = app.add_subcommand("det", "Powerset determinization");
  det_cmd->add_option("file", file)->required();
  det_cmd->add_flag("--prune", prune, "Keep only states reachable from the initial state");
  det_cmd->add_option("--powerset-cap", cap, "Largest fiber to take the powerset of");

  auto* mdet_cmd = app.add_subcommand("mdet", "Multiset determinization");
  mdet_cmd->add_option("file", file)->required();
  mdet_cmd->add_flag("--expand", expand, "Explore multiset states breadth-first");
  mdet_cmd->add_option("--max-len", max_len, "Exploration depth");
  mdet_cmd->add_option("--max-states", max_states, "State cap for the exploration");

  auto* classical_cmd = app.add_subcommand("classical", "Textbook subset construction");
  classical_cmd->add_option("file", file)->required();

  std::size_t lang_len = 0;
  auto* lang_cmd = app.add_subcommand("lang", "List accepted words up to a length");
  lang_cmd->add_option("file", file)->required();
  lang_cmd->add_option("--max-len", lang_len)->required();
  lang_cmd->add_flag("--count", count, "Print the number of accepting paths per word");

  auto* sim_cmd = app.add_subcommand("sim-check", "Check a simulation document");
  sim_cmd->add_option("file", file)->required();
  sim_cmd->add_option("--mode", mode, "strict|pseudo|lax (default: declared strength)")
      ->check(CLI::IsMember({"strict", "pseudo", "lax"}));

  auto* factor_cmd = app.add_subcommand("factor", "Factor a simulation into a deterministic automaton");
  factor_cmd->add_option("file", file)->required();
  factor_cmd->add_option("--target", target)->required()->check(CLI::IsMember({"det", "mdet"}));
  factor_cmd->add_option("--max-len", max_len, "Exploration depth for --target mdet");
  factor_cmd->add_option("--max-states", max_states, "State cap for --target mdet");

  auto* laws_cmd = app.add_subcommand("laws", "Run the randomized law suites");
  laws_cmd->add_option("--seed", seed);
  laws_cmd->add_option("--cases", cases);

  auto* dot_cmd = app.add_subcommand("dot", "Graphviz rendering");
  dot_cmd->add_option("file", file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "spanauto: usage: " << e.what() << "\n";
    return kInputError;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(file);
    if (det_cmd->parsed()) return cmd_det(file, prune, cap);
    if (mdet_cmd->parsed()) return cmd_mdet(file, expand, max_len, max_states);
    if (classical_cmd->parsed()) return cmd_classical(file);
    if (lang_cmd->parsed()) return cmd_lang(file, lang_len, count);
    if (sim_cmd->parsed()) return cmd_sim_check(file, mode);
    if (factor_cmd->parsed()) return cmd_factor(file, target, max_len, max_states);
    if (laws_cmd->parsed()) return cmd_laws(seed, cases);
    if (dot_cmd->parsed()) return cmd_dot(file);
  } catch (const Error& e) {
    std::cerr << "spanauto: " << to_string(e.code()) << ": " << e.what() << "\n";
    return e.code() == ErrorCode::not_natural ? kCheckFailed : kInputError;
  } catch (const std::exception& e) {
    std::cerr << "spanauto: internal: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
