#pragma once

// Simulations between automata over a shared base: component data,
// naturality checks at strict / pseudo / lax strength, the canonical
// simulations into Det(F) and MDet(F), and universal-property factorization.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "spanauto/automata.hpp"
#include "spanauto/determinize.hpp"

namespace spanauto {

enum class Strength { strict, pseudo, lax };

const char* to_string(Strength s);
Strength parse_strength(const std::string& text);

/// A simulation from `source` (F) to `target` (F'): a transformation F' => F,
/// so each component goes from the target's fiber to the source's fiber.
struct Simulation {
  SpanAutomaton source;
  SpanAutomaton target;
  std::vector<Span> components;  // per node
  Strength strength = Strength::lax;
};

/// Per node, the target-fiber states whose naturality rows are checked.
using RowDomain = std::vector<std::vector<std::size_t>>;

struct CheckResult {
  bool ok = true;
  std::optional<std::size_t> failing_edge;  // first failure in edge-id order
  std::string detail;
  /// One 2-cell per edge, in edge order, when requested and ok.
  std::vector<SpanMorphism> witnesses;

  explicit operator bool() const { return ok; }
};

std::vector<std::string> validate(const Simulation& sim);

/// Strict naturality at the relational level: for every edge e : n -> m,
/// alpha_n ; F(e) and F'(e) ; alpha_m have the same image.
CheckResult check_rel_simulation(const Simulation& sim);

/// Pseudo: the two composite spans are isomorphic (equal matrices).
/// Lax: a span morphism exists from alpha_n ; F(e) to F'(e) ; alpha_m.
/// Strict is the relational check. `rows` restricts the checked rows.
CheckResult check_span_simulation(const Simulation& sim, Strength mode,
                                  const std::optional<RowDomain>& rows = std::nullopt,
                                  bool want_witnesses = false);

/// Component-wise dagger with source and target swapped.
Simulation dagger(const Simulation& sim);

/// The simulation and its dagger both pass at sim.strength.
bool check_bisimulation(const Simulation& sim,
                        const std::optional<RowDomain>& rows = std::nullopt,
                        const std::optional<RowDomain>& dagger_rows = std::nullopt);

/// first : F -> F', second : F' -> F''  gives  F -> F''.
Simulation compose_simulations(const Simulation& first, const Simulation& second);

/// Membership simulation from a to det_span(a), recorded as lax.
Simulation canonical_det_simulation(const SpanAutomaton& a, const DetOptions& options = {});

/// A finite slice of MDet(F) together with the simulation into it.
struct BoundedSimulation {
  Simulation simulation;
  /// Discovered multiset states; frontier states (successors outside the
  /// exploration bound) are present in the fibers but not checked.
  RowDomain rows;
  MDetExpansion expansion;
  bool truncated = false;
  CheckResult pseudo;
};

inline constexpr std::size_t kDefaultMaxStates = 100000;

/// Multiplicity simulation from a to MDet(a) on states reachable by words of
/// length <= max_len: multiset v relates to q with v(q) apex copies.
BoundedSimulation canonical_mdet_simulation(const SpanAutomaton& a, std::size_t max_len,
                                            std::size_t max_states = kDefaultMaxStates);

struct FactorizationResult {
  Simulation mate;
  bool composite_ok = false;
  bool bisim_ok = false;
  std::optional<bool> unique_ok;
};

/// Factors alpha : F -> G (G deterministic) through the canonical simulation
/// to Det(F). Throws not_natural when alpha fails its declared strength or
/// is not natural at the relational level.
FactorizationResult factor_det(const Simulation& alpha, const DetAutomaton& g,
                               const DetOptions& options = {});

/// Factors a pseudo alpha : F -> G through the canonical simulation to
/// MDet(F), checked on a slice seeded with the mate's states.
FactorizationResult factor_mdet(const Simulation& alpha, const DetAutomaton& g,
                                std::size_t max_len = 4,
                                std::size_t max_states = kDefaultMaxStates);

}  // namespace spanauto
