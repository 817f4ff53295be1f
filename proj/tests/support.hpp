#pragma once

#include <string>
#include <vector>

#include "spanauto/automata.hpp"

namespace testing {

using namespace spanauto;

inline Span span_of(const FinSet& a, const FinSet& b,
                    std::vector<std::pair<std::string, std::string>> feet) {
  std::vector<Token> tokens;
  for (const auto& [x, y] : feet)
    tokens.push_back({"t" + std::to_string(tokens.size()), a.index_of(x), b.index_of(y)});
  return Span(a, b, std::move(tokens));
}

inline Relation rel_of_pairs(const FinSet& a, const FinSet& b,
                             std::vector<std::pair<std::string, std::string>> pairs) {
  std::vector<Relation::Pair> out;
  for (const auto& [x, y] : pairs) out.emplace_back(a.index_of(x), b.index_of(y));
  return Relation(a, b, std::move(out));
}

// States {1,2}; a: 1->1, 1->2; b: 1->2, 2->2; q0 = 1; finals {2}.
inline SpanAutomaton example1() {
  SpanAutomaton a;
  a.base = BaseGraph({"q"}, {{"a", "a", 0, 0}, {"b", "b", 0, 0}});
  const FinSet q("q", {"1", "2"});
  a.fibers = {q};
  a.transitions = {span_of(q, q, {{"1", "1"}, {"1", "2"}}), span_of(q, q, {{"1", "2"}, {"2", "2"}})};
  a.initial = {0, 0};
  a.finals = {{0, 1}};
  return a;
}

// Nodes c {1,2} and d {3,4,5}; q0 = 1; finals {4}.
inline SpanAutomaton example2() {
  SpanAutomaton a;
  a.base = BaseGraph({"c", "d"}, {{"a", "a", 0, 0},
                                  {"b", "b", 0, 0},
                                  {"x", "x", 0, 1},
                                  {"c", "c", 1, 1},
                                  {"d", "d", 1, 1}});
  const FinSet c("c", {"1", "2"}), d("d", {"3", "4", "5"});
  a.fibers = {c, d};
  a.transitions = {span_of(c, c, {{"1", "1"}, {"1", "2"}}), span_of(c, c, {{"1", "2"}, {"2", "2"}}),
                   span_of(c, d, {{"1", "3"}, {"2", "4"}}), span_of(d, d, {{"3", "4"}, {"3", "5"}}),
                   span_of(d, d, {{"5", "4"}})};
  a.initial = {0, 0};
  a.finals = {{1, 1}};
  return a;
}

/// Word of single-character edge ids, starting at `start`.
inline Word word(const BaseGraph& base, const std::string& ids, std::size_t start = 0) {
  Word w{start, {}};
  for (char c : ids) w.edges.push_back(base.edge_index(std::string(1, c)));
  return w;
}

inline std::vector<std::string> texts(const BaseGraph& base, const std::vector<Word>& words) {
  std::vector<std::string> out;
  for (const Word& w : words) out.push_back(word_text(base, w));
  return out;
}

inline std::string fixture(const std::string& name) {
  return std::string(SPANAUTO_TEST_DIR) + "/fixtures/" + name;
}

}  // namespace testing
