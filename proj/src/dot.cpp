#include "spanauto/dot.hpp"

#include <algorithm>
#include <sstream>

namespace spanauto {

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string state_id(std::size_t node, std::size_t index) {
  return "s" + std::to_string(node) + "_" + std::to_string(index);
}

}  // namespace

std::string to_dot(const SpanAutomaton& a, const std::string& name) {
  std::ostringstream os;
  os << "digraph " << quoted(name) << " {\n  rankdir=LR;\n  node [shape=circle];\n";
  os << "  __start [shape=point];\n";
  const bool clustered = a.base.nodes().size() > 1;
  for (std::size_t n = 0; n < a.fibers.size(); ++n) {
    std::string indent = "  ";
    if (clustered) {
      os << "  subgraph " << quoted("cluster_" + a.base.nodes()[n]) << " {\n    label="
         << quoted(a.base.nodes()[n]) << ";\n";
      indent = "    ";
    }
    for (std::size_t i = 0; i < a.fibers[n].size(); ++i) {
      os << indent << state_id(n, i) << " [label=" << quoted(a.fibers[n][i]);
      if (a.is_final({n, i})) os << ", shape=doublecircle";
      os << "];\n";
    }
    if (clustered) os << "  }\n";
  }
  os << "  __start -> " << state_id(a.initial.node, a.initial.index) << ";\n";
  for (std::size_t e = 0; e < a.base.edges().size(); ++e) {
    const Edge& edge = a.base.edges()[e];
    const std::string label = a.base.label_shared(e) ? edge.label + " (" + edge.id + ")" : edge.label;
    for (const Token& t : a.transitions[e].tokens())
      os << "  " << state_id(edge.src, t.left) << " -> " << state_id(edge.dst, t.right)
         << " [label=" << quoted(label) << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace spanauto
