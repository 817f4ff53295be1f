// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "spanauto/determinize.hpp"
#include "spanauto/laws.hpp"
#include "spanauto/random.hpp"
#include "spanauto/simulation.hpp"
#include "support.hpp"

using namespace spanauto;
using namespace testing;

namespace {

constexpr std::uint64_t kAutomataSeed = 20240601;
constexpr std::size_t kAutomataCount = 500;

struct Outcome {
  bool ok = true;
  std::string note;
};

std::vector<SpanAutomaton> generated_automata() {
  Rng rng(kAutomataSeed);
  std::vector<SpanAutomaton> out;
  for (std::size_t i = 0; i < kAutomataCount; ++i) out.push_back(random_span_automaton(rng));
  return out;
}

Outcome example1_reproduction() {
  const DetAutomaton d = det_span(example1());
  DetAutomaton expected;
  expected.base = example1().base;
  expected.fibers = {FinSet("P(q)", {"{}", "{1}", "{2}", "{1,2}"})};
  // Rows indexed {}, {1}, {2}, {1,2}.
  expected.transitions = {{0, 3, 0, 3}, {0, 2, 2, 2}};
  expected.initial = {0, 1};
  expected.finals = {{0, 2}, {0, 3}};
  const bool ok = same_base(d.base, expected.base) && d.fibers.size() == 1 &&
                  d.fibers[0].same_layout(expected.fibers[0]) && d.transitions == expected.transitions &&
                  d.initial == expected.initial && d.finals == expected.finals;
  return {ok, ok ? "4 subset states, transitions, initial and finals equal" : "structure differs"};
}

Outcome example2_separation() {
  const SpanAutomaton a = example2();
  const DetAutomaton d = det_span(a);
  const auto states = det_states(a);
  for (std::size_t n = 0; n < states.size(); ++n)
    for (const SubsetState& s : states[n])
      if (s.node != n || s.members >> a.fibers[n].size()) return {false, "subset state leaves its fiber"};
  std::size_t words = 0, accepted_words = 0;
  for (std::size_t node = 0; node < a.base.nodes().size(); ++node)
    for (const Word& w : enumerate_words(a.base, node, 6)) {
      const bool oracle = !brute_force_paths(a, w).empty();
      if (accepted(d, w) != oracle || accepted(a, w) != oracle)
        return {false, "language differs at " + word_text(a.base, w)};
      ++words;
      accepted_words += oracle;
    }
  return {true, std::to_string(words) + " words, " + std::to_string(accepted_words) + " accepted"};
}

Outcome classical_agreement() {
  Rng rng(kAutomataSeed + 1);
  for (int i = 0; i < 200; ++i) {
    const ClassicalNFA n = random_nfa(rng, 5, 3);
    if (!reachable_iso_check(prune_reachable(det(to_rel(n))),
                             prune_reachable(classical_subset_construction(n))))
      return {false, "instance " + std::to_string(i) + " not isomorphic"};
  }
  return {true, "200 NFAs"};
}

Outcome language_preservation(const std::vector<SpanAutomaton>& automata) {
  std::size_t words = 0;
  for (std::size_t i = 0; i < automata.size(); ++i) {
    const SpanAutomaton& a = automata[i];
    const DetAutomaton d = det_span(a);
    const MDetMachine m = mdet(a);
    for (std::size_t node = 0; node < a.base.nodes().size(); ++node)
      for (const Word& w : enumerate_words(a.base, node, 6)) {
        ++words;
        if (accepted(a, w) != accepted(d, w))
          return {false, "automaton " + std::to_string(i) + ": acceptance differs at " + word_text(a.base, w)};
        if (node != a.initial.node) continue;
        if (mdet_accept_count(m, w) != brute_force_paths(a, w).size())
          return {false, "automaton " + std::to_string(i) + ": count differs at " + word_text(a.base, w)};
      }
  }
  return {true, std::to_string(automata.size()) + " automata, " + std::to_string(words) + " words"};
}

Outcome law_suites() {
  std::size_t cases = 0;
  for (const LawReport& r : run_all_laws(0, 1000)) {
    if (!r.ok) return {false, r.name + ": " + r.counterexample};
    cases += r.cases;
  }
  return {true, std::to_string(law_names().size()) + " suites, " + std::to_string(cases) + " cases"};
}

Outcome canonical_simulations(const std::vector<SpanAutomaton>& automata) {
  std::size_t truncated = 0;
  for (std::size_t i = 0; i < automata.size(); ++i) {
    const SpanAutomaton& a = automata[i];
    if (!check_span_simulation(canonical_det_simulation(a), Strength::lax).ok)
      return {false, "automaton " + std::to_string(i) + ": det simulation not lax"};
    const BoundedSimulation b = canonical_mdet_simulation(a, 4);
    if (!b.pseudo.ok) return {false, "automaton " + std::to_string(i) + ": " + b.pseudo.detail};
    truncated += b.truncated;
  }
  return {true, std::to_string(automata.size()) + " automata (" + std::to_string(truncated) +
                    " expansions cut at length 4)"};
}

bool enumerable(const FactorInstance& inst) {
  auto small = [](const std::vector<FinSet>& fibers) {
    return std::all_of(fibers.begin(), fibers.end(), [](const FinSet& f) { return f.size() <= 2; });
  };
  return inst.alpha.source.base.edges().size() <= 2 && small(inst.alpha.source.fibers) &&
         small(inst.g.fibers);
}

Outcome universal_property() {
  Rng rng(kAutomataSeed + 2);
  AutomatonLimits general;
  general.max_states = 3;
  AutomatonLimits tiny;
  tiny.max_nodes = 2;
  tiny.max_states = 2;
  tiny.max_labels = 1;
  tiny.edge_density = 0.3;

  std::size_t det_unique = 0, mdet_unique = 0;
  for (int i = 0; i < 100; ++i) {
    const bool small = i % 2 == 1;
    const FactorInstance inst =
        random_det_factor_instance(rng, small ? tiny : general, small ? 1 : 2);
    const FactorizationResult r = factor_det(inst.alpha, inst.g);
    if (!r.composite_ok || !r.bisim_ok) return {false, "det instance " + std::to_string(i)};
    if (enumerable(inst)) {
      if (!r.unique_ok || !*r.unique_ok) return {false, "det instance " + std::to_string(i) + " not unique"};
      ++det_unique;
    }
  }
  for (int i = 0; i < 100; ++i) {
    const bool small = i % 2 == 1;
    const FactorInstance inst =
        random_mdet_factor_instance(rng, small ? tiny : general, small ? 1 : 2);
    const FactorizationResult r = factor_mdet(inst.alpha, inst.g, 4);
    if (!r.composite_ok || !r.bisim_ok) return {false, "mdet instance " + std::to_string(i)};
    if (enumerable(inst)) {
      if (!r.unique_ok || !*r.unique_ok) return {false, "mdet instance " + std::to_string(i) + " not unique"};
      ++mdet_unique;
    }
  }
  if (det_unique == 0 || mdet_unique == 0) return {false, "no exhaustively enumerable instances generated"};
  return {true, "100 + 100 instances; uniqueness confirmed on " + std::to_string(det_unique) + " + " +
                    std::to_string(mdet_unique)};
}

std::string run_cli(const std::string& args) {
  const std::string command =
      "cd '" + std::string(SPANAUTO_TEST_DIR) + "/fixtures' && '" + SPANAUTO_CLI + "' " + args;
  std::string out;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return "<popen failed>";
  std::array<char, 4096> buffer{};
  std::size_t n = 0;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) out.append(buffer.data(), n);
  if (pclose(pipe) != 0) out += "<nonzero exit>";
  return out;
}

std::string read_golden(const std::string& name) {
  std::ifstream in(std::string(SPANAUTO_TEST_DIR) + "/golden/" + name, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome cli_golden() {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"det example1.json", "example1.det.json"},
      {"det example2.json", "example2.det.json"},
      {"mdet example1.json", "example1.mdet.json"},
      {"mdet example2.json", "example2.mdet.json"},
      {"lang example1.json --max-len 2 --count", "example1.lang.txt"},
      {"lang example2.json --max-len 4 --count", "example2.lang.txt"},
  };
  for (const auto& [args, golden] : cases) {
    const std::string expected = read_golden(golden);
    if (expected.empty()) return {false, "missing golden " + golden};
    if (run_cli(args) != expected || run_cli(args) != expected) return {false, "`" + args + "` differs"};
  }
  return {true, std::to_string(cases.size()) + " commands byte-identical, twice each"};
}

}  // namespace

int main() {
  const std::vector<SpanAutomaton> automata = generated_automata();
  struct Criterion {
    const char* name;
    double limit_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"Example-1 reproduction", 1, example1_reproduction},
      {"Example-2 fiber separation", 5, example2_separation},
      {"Classical agreement", 30, classical_agreement},
      {"Language preservation", 60, [&] { return language_preservation(automata); }},
      {"Law suites", 60, law_suites},
      {"Canonical simulations", 60, [&] { return canonical_simulations(automata); }},
      {"Universal property", 120, universal_property},
      {"CLI determinism", 60, cli_golden},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && seconds > criteria[i].limit_seconds) {
      o.ok = false;
      o.note += " (over the time limit)";
    }
    failures += !o.ok;
    std::printf("%s %zu %s: %s [%.2fs / %.0fs]\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].name,
                o.note.c_str(), seconds, criteria[i].limit_seconds);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
