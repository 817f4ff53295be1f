#pragma once

#include <string>

#include "spanauto/automata.hpp"

namespace spanauto {

/// Graphviz digraph: one node per state (clustered by fiber when the base
/// has several nodes), one edge per transition token, an arrow from a point
/// into the initial state, finals as double circles.
std::string to_dot(const SpanAutomaton& a, const std::string& name = "automaton");

}  // namespace spanauto
