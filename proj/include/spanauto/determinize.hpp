#pragma once

// Powerset determinization (image then powerset), multiset determinization
// (path-counting matrices), the textbook subset construction used as an
// oracle, and reachability pruning.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "spanauto/automata.hpp"
#include "spanauto/multiset.hpp"
#include "spanauto/powerset.hpp"

namespace spanauto {

struct DetOptions {
  /// Largest fiber whose powerset is built.
  std::size_t powerset_cap = 20;
};

/// A state of Det(F): a subset of one fiber.
struct SubsetState {
  std::size_t node = 0;
  SubsetMask members = 0;
  friend bool operator==(const SubsetState&, const SubsetState&) = default;
};

RelAutomaton rel_of(const SpanAutomaton& a);

/// Full powerset of each fiber in canonical subset order; initial {q0};
/// finals are the subsets meeting Q_f.
DetAutomaton det(const RelAutomaton& a, const DetOptions& options = {});
DetAutomaton det_span(const SpanAutomaton& a, const DetOptions& options = {});

/// The subset states behind det(a), fiber by fiber, in the same order.
std::vector<std::vector<SubsetState>> det_states(const AutomatonShape& a,
                                                 const DetOptions& options = {});

/// Intensional multiset determinization: one matrix per edge.
struct MDetMachine {
  BaseGraph base;
  std::vector<FinSet> fibers;
  std::vector<NatMatrix> matrices;
  StateRef initial;
  Multiset initial_vector;
  std::vector<StateRef> finals;
};

MDetMachine mdet(const SpanAutomaton& a);
Multiset mdet_run(const MDetMachine& m, const Word& w);
Nat mdet_accept_count(const MDetMachine& m, const Word& w);
/// Weighted acceptance of an arbitrary multiset state over `node`.
Nat mdet_accept_count(const MDetMachine& m, std::size_t node, const Multiset& v);

/// Breadth-first exploration of multiset states.
struct MDetExpansion {
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  BaseGraph base;
  std::vector<std::vector<Multiset>> states;       // per node, in discovery order
  std::vector<std::vector<std::size_t>> depth;     // per node, BFS depth
  std::vector<std::vector<std::size_t>> transitions;  // per edge; npos = not discovered
  StateRef initial;
  /// Some transition leaves the discovered set or the state cap was hit.
  bool truncated = false;

  std::optional<std::size_t> find(std::size_t node, const Multiset& v) const;
  std::size_t size() const;
};

/// Explores states reachable by words of length <= max_len, discovering at
/// most max_states states. `seeds` are extra depth-0 states (node, vector).
MDetExpansion mdet_expand(const MDetMachine& m, std::size_t max_states, std::size_t max_len,
                          const std::vector<std::pair<std::size_t, Multiset>>& seeds = {});

/// Textbook NFA over an alphabet.
struct ClassicalNFA {
  std::vector<std::string> alphabet;
  FinSet states;
  /// delta[state][letter] = successor states.
  std::vector<std::vector<std::vector<std::size_t>>> delta;
  std::size_t q0 = 0;
  std::vector<std::size_t> finals;
};

/// Reads a single-node automaton whose edges are all loops; letters are edge
/// labels.
ClassicalNFA classical_from(const RelAutomaton& a);
/// Single node "q", one loop edge per letter (id = label = letter).
RelAutomaton to_rel(const ClassicalNFA& n);

/// Rabin-Scott powerset DFA over a single-node base.
DetAutomaton classical_subset_construction(const ClassicalNFA& n);

DetAutomaton prune_reachable(const DetAutomaton& d);

/// State bijection between the reachable parts (d1 index -> d2 index, per
/// d1 node) commuting with transitions and preserving initial and finals.
/// Nodes are matched by id, edges by (source id, target id, label).
std::optional<std::vector<std::vector<std::size_t>>> reachable_iso_check(const DetAutomaton& d1,
                                                                         const DetAutomaton& d2);

}  // namespace spanauto
