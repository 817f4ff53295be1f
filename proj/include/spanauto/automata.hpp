#pragma once

// Base graphs (free categories), the three automaton flavours over them,
// and their language / path-count semantics.

#include <cstddef>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "spanauto/span.hpp"

namespace spanauto {

struct Edge {
  std::string id;
  std::string label;
  std::size_t src = 0;
  std::size_t dst = 0;
};

/// Finite directed multigraph generating a free category. Validated on
/// construction: distinct ids, valid endpoints, labels distinct among edges
/// sharing (src, dst).
class BaseGraph {
 public:
  BaseGraph() = default;
  BaseGraph(std::vector<std::string> nodes, std::vector<Edge> edges);

  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t node_index(const std::string& id) const;
  std::size_t edge_index(const std::string& id) const;
  /// Outgoing edges of a node, ordered by edge id.
  const std::vector<std::size_t>& out_edges(std::size_t node) const { return out_[node]; }
  /// True when another edge of the graph carries the same label.
  bool label_shared(std::size_t edge) const;

 private:
  std::vector<std::string> nodes_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, std::size_t> node_index_;
  std::unordered_map<std::string, std::size_t> edge_index_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<bool> shared_label_;
};

/// Structural equality: same nodes and edges in the same order.
bool same_base(const BaseGraph& a, const BaseGraph& b);

/// A morphism of the free category: a composable edge sequence. The empty
/// word is the identity on `start`.
struct Word {
  std::size_t start = 0;
  std::vector<std::size_t> edges;

  std::size_t length() const { return edges.size(); }
  friend bool operator==(const Word&, const Word&) = default;
};

std::size_t word_end(const BaseGraph& base, const Word& w);
bool well_formed(const BaseGraph& base, const Word& w);
Word concat(const BaseGraph& base, const Word& u, const Word& v);
/// Label rendering; edges whose label is shared get "(id)" appended. Labels
/// are concatenated when all are one character, otherwise joined with '.'.
std::string word_text(const BaseGraph& base, const Word& w);

/// A state: fiber (node) index plus element index inside that fiber.
struct StateRef {
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  std::size_t node = npos;
  std::size_t index = npos;
  friend auto operator<=>(const StateRef&, const StateRef&) = default;
};

/// Fields shared by every flavour.
struct AutomatonShape {
  BaseGraph base;
  std::vector<FinSet> fibers;  // one per node, pairwise disjoint labels
  StateRef initial;
  std::vector<StateRef> finals;

  /// Finds a state by label across all fibers.
  StateRef find_state(const std::string& label) const;
  const std::string& state_label(StateRef s) const { return fibers[s.node][s.index]; }
  bool is_final(StateRef s) const;
};

struct SpanAutomaton : AutomatonShape {
  std::vector<Span> transitions;  // one per edge
};

struct RelAutomaton : AutomatonShape {
  std::vector<Relation> transitions;
};

struct DetAutomaton : AutomatonShape {
  std::vector<std::vector<std::size_t>> transitions;  // total function tables
};

/// Empty when every invariant holds.
std::vector<std::string> validate(const SpanAutomaton& a);
std::vector<std::string> validate(const RelAutomaton& a);
std::vector<std::string> validate(const DetAutomaton& a);

SpanAutomaton to_span(const RelAutomaton& a);
SpanAutomaton to_span(const DetAutomaton& a);
RelAutomaton to_rel(const DetAutomaton& a);

/// All words from `from_node` up to `max_len`, length then lexicographic on
/// edge ids.
std::vector<Word> enumerate_words(const BaseGraph& base, std::size_t from_node,
                                  std::size_t max_len);

/// Path-count matrix of a word: entry (q, q') counts lifted paths q -> q'.
NatMatrix run_word_span(const SpanAutomaton& a, const Word& w);

bool accepted(const SpanAutomaton& a, const Word& w);
bool accepted(const RelAutomaton& a, const Word& w);
bool accepted(const DetAutomaton& a, const Word& w);

/// Number of accepting paths from the initial state over w.
Nat count_paths(const SpanAutomaton& a, const Word& w);

std::vector<Word> language(const SpanAutomaton& a, std::size_t max_len);
std::vector<Word> language(const RelAutomaton& a, std::size_t max_len);
std::vector<Word> language(const DetAutomaton& a, std::size_t max_len);

inline constexpr std::size_t kOracleWordBound = 12;

/// Independent oracle for count_paths: explicit enumeration of accepting
/// token sequences (token indices into each edge's span).
std::vector<std::vector<std::size_t>> brute_force_paths(const SpanAutomaton& a,
                                                        const Word& w,
                                                        std::size_t bound = kOracleWordBound);

/// Every word from every state has exactly one lifted path.
bool unique_lift_check(const SpanAutomaton& a, std::size_t max_len);
bool unique_lift_check(const DetAutomaton& a, std::size_t max_len);

/// Every lifted path splits uniquely along every factorization of its word.
bool ulf_factorization_check(const SpanAutomaton& a, std::size_t max_len);

bool is_deterministic(const RelAutomaton& a);

}  // namespace spanauto
