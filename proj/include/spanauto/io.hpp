#pragma once

// JSON documents for automata, simulations and results. Serialization is
// canonical: fixed key order, states in fiber order, transition entries
// sorted by (from, to), multiplicities as explicit counts.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "spanauto/automata.hpp"
#include "spanauto/determinize.hpp"
#include "spanauto/simulation.hpp"

namespace spanauto {

using Json = nlohmann::ordered_json;

inline constexpr const char* kFormatVersion = "1";

enum class DocumentKind { span, rel, det, classical_nfa };

const char* to_string(DocumentKind kind);

struct AutomatonDocument {
  DocumentKind kind = DocumentKind::span;
  SpanAutomaton automaton;
};

/// Schema errors throw Error(input) with a message starting at `path`.
AutomatonDocument automaton_from_json(const Json& j, const std::string& path = "$");
AutomatonDocument parse_automaton(const std::string& text);
AutomatonDocument load_automaton(const std::filesystem::path& file);

Json to_json(const AutomatonDocument& doc);
Json to_json(const DetAutomaton& d);

/// Reads a span automaton as deterministic; throws Error(input) unless every
/// transition is a total function with multiplicity one.
DetAutomaton as_det(const SpanAutomaton& a);

/// `source` and `target` are file paths (relative to `base_dir`) or inline
/// automaton documents.
Simulation simulation_from_json(const Json& j, const std::filesystem::path& base_dir,
                                const std::string& path = "$");
Simulation load_simulation(const std::filesystem::path& file);
/// Inline form: source and target embedded as span documents.
Json to_json(const Simulation& sim);

Json to_json(const MDetMachine& m);
Json to_json(const MDetMachine& m, const MDetExpansion& x);
Json to_json(const FactorizationResult& r, const std::string& target);

/// Two-space indentation and a trailing newline.
std::string dump(const Json& j);

}  // namespace spanauto
