#pragma once

// Seeded generators for property tests and the law runner. Output depends
// only on the seed.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>

#include "spanauto/automata.hpp"
#include "spanauto/determinize.hpp"
#include "spanauto/multiset.hpp"
#include "spanauto/simulation.hpp"

namespace spanauto {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [lo, hi].
  std::size_t between(std::size_t lo, std::size_t hi);
  bool coin(double p = 0.5);
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Elements are id followed by a position: "A0", "A1", ...
FinSet random_finset(Rng& rng, const std::string& id, std::size_t max_size,
                     std::size_t min_size = 0);
Span random_span(Rng& rng, const FinSet& dom, const FinSet& cod, Nat max_mult = 2);
Relation random_relation(Rng& rng, const FinSet& dom, const FinSet& cod);
NatMatrix random_matrix(Rng& rng, const FinSet& dom, const FinSet& cod, Nat max_entry = 3);
Multiset random_multiset(Rng& rng, const FinSet& base, Nat max_count = 3);
SubsetMask random_subset(Rng& rng, std::size_t n);

struct AutomatonLimits {
  std::size_t max_nodes = 3;
  std::size_t max_states = 4;          // per fiber
  std::size_t max_labels = 3;          // edges per ordered node pair
  Nat max_mult = 2;                    // tokens per (from, to) pair
  double edge_density = 0.5;           // chance an ordered pair gets edges
  double transition_density = 0.35;    // chance a (from, to) pair is inhabited
};

/// Nodes "n0".., edges "e0".. labelled from "a".."z" distinctly per node
/// pair; states "1", "2", ... numbered across fibers.
SpanAutomaton random_span_automaton(Rng& rng, const AutomatonLimits& limits = {});

ClassicalNFA random_nfa(Rng& rng, std::size_t max_states = 5, std::size_t max_letters = 3);

/// A random total deterministic automaton over `base`.
DetAutomaton random_det_over(Rng& rng, const BaseGraph& base, std::size_t max_states);

/// A deterministic G and a simulation alpha : F -> G.
struct FactorInstance {
  Simulation alpha;
  DetAutomaton g;
};

/// G is the reachable product of a random DFA with Det(F); alpha sends
/// (d, S) to the members of S. Relationally strict; declared strict or lax.
FactorInstance random_det_factor_instance(Rng& rng, const AutomatonLimits& limits,
                                          std::size_t dfa_states = 2);

/// G is a finite product of a random DFA with reachable multiset states of
/// F; alpha sends (d, v) to v with multiplicities. Pseudo natural.
FactorInstance random_mdet_factor_instance(Rng& rng, const AutomatonLimits& limits,
                                           std::size_t dfa_states = 2);

}  // namespace spanauto
