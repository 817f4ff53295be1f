#include "spanauto/automata.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_set>

#include "spanauto/multiset.hpp"

namespace spanauto {

// ------------------------------------------------------------ BaseGraph

BaseGraph::BaseGraph(std::vector<std::string> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (!node_index_.emplace(nodes_[i], i).second)
      throw Error(ErrorCode::input, "duplicate node id '" + nodes_[i] + "'");
  std::set<std::tuple<std::size_t, std::size_t, std::string>> labels;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& edge = edges_[e];
    if (!edge_index_.emplace(edge.id, e).second)
      throw Error(ErrorCode::input, "duplicate edge id '" + edge.id + "'");
    if (edge.src >= nodes_.size() || edge.dst >= nodes_.size())
      throw Error(ErrorCode::input, "edge '" + edge.id + "' has an invalid endpoint");
    if (!labels.emplace(edge.src, edge.dst, edge.label).second)
      throw Error(ErrorCode::input, "label '" + edge.label + "' repeats between nodes '" +
                                        nodes_[edge.src] + "' and '" + nodes_[edge.dst] + "'");
  }
  out_.assign(nodes_.size(), {});
  for (std::size_t e = 0; e < edges_.size(); ++e) out_[edges_[e].src].push_back(e);
  for (auto& out : out_)
    std::sort(out.begin(), out.end(),
              [&](std::size_t x, std::size_t y) { return edges_[x].id < edges_[y].id; });
  std::unordered_map<std::string, int> label_uses;
  for (const auto& edge : edges_) ++label_uses[edge.label];
  shared_label_.resize(edges_.size());
  for (std::size_t e = 0; e < edges_.size(); ++e)
    shared_label_[e] = label_uses[edges_[e].label] > 1;
}

std::size_t BaseGraph::node_index(const std::string& id) const {
  auto it = node_index_.find(id);
  if (it == node_index_.end()) throw Error(ErrorCode::unknown_element, "unknown node '" + id + "'");
  return it->second;
}

std::size_t BaseGraph::edge_index(const std::string& id) const {
  auto it = edge_index_.find(id);
  if (it == edge_index_.end()) throw Error(ErrorCode::unknown_element, "unknown edge '" + id + "'");
  return it->second;
}

bool BaseGraph::label_shared(std::size_t edge) const { return shared_label_[edge]; }

bool same_base(const BaseGraph& a, const BaseGraph& b) {
  if (a.nodes() != b.nodes() || a.edges().size() != b.edges().size()) return false;
  for (std::size_t e = 0; e < a.edges().size(); ++e) {
    const Edge& x = a.edges()[e];
    const Edge& y = b.edges()[e];
    if (x.id != y.id || x.label != y.label || x.src != y.src || x.dst != y.dst) return false;
  }
  return true;
}

// ----------------------------------------------------------------- Word

std::size_t word_end(const BaseGraph& base, const Word& w) {
  return w.edges.empty() ? w.start : base.edges()[w.edges.back()].dst;
}

bool well_formed(const BaseGraph& base, const Word& w) {
  if (w.start >= base.nodes().size()) return false;
  std::size_t at = w.start;
  for (std::size_t e : w.edges) {
    if (e >= base.edges().size() || base.edges()[e].src != at) return false;
    at = base.edges()[e].dst;
  }
  return true;
}

Word concat(const BaseGraph& base, const Word& u, const Word& v) {
  if (word_end(base, u) != v.start)
    throw Error(ErrorCode::mismatch, "words are not composable");
  Word out = u;
  out.edges.insert(out.edges.end(), v.edges.begin(), v.edges.end());
  return out;
}

std::string word_text(const BaseGraph& base, const Word& w) {
  if (w.edges.empty()) return "ε";
  const bool compact = std::all_of(base.edges().begin(), base.edges().end(),
                                   [](const Edge& e) { return e.label.size() == 1; });
  std::string out;
  for (std::size_t i = 0; i < w.edges.size(); ++i) {
    const Edge& e = base.edges()[w.edges[i]];
    if (i && !compact) out += ".";
    out += e.label;
    if (base.label_shared(w.edges[i])) out += "(" + e.id + ")";
  }
  return out;
}

static void require_word(const BaseGraph& base, const Word& w) {
  if (!well_formed(base, w)) throw Error(ErrorCode::input, "ill-formed word");
}

// ------------------------------------------------------- AutomatonShape

StateRef AutomatonShape::find_state(const std::string& label) const {
  for (std::size_t n = 0; n < fibers.size(); ++n)
    if (auto i = fibers[n].find(label)) return {n, *i};
  return {};
}

bool AutomatonShape::is_final(StateRef s) const {
  return std::find(finals.begin(), finals.end(), s) != finals.end();
}

namespace {

bool valid_state(const AutomatonShape& a, StateRef s) {
  return s.node < a.fibers.size() && s.index < a.fibers[s.node].size();
}

std::vector<std::string> validate_shape(const AutomatonShape& a, std::size_t transition_count) {
  std::vector<std::string> out;
  const auto& base = a.base;
  if (a.fibers.size() != base.nodes().size())
    out.push_back("fiber count " + std::to_string(a.fibers.size()) + " differs from node count " +
                  std::to_string(base.nodes().size()));
  if (transition_count != base.edges().size())
    out.push_back("transition count " + std::to_string(transition_count) +
                  " differs from edge count " + std::to_string(base.edges().size()));
  std::unordered_map<std::string, std::size_t> owner;
  for (std::size_t n = 0; n < a.fibers.size(); ++n)
    for (const auto& label : a.fibers[n].elements()) {
      auto [it, fresh] = owner.emplace(label, n);
      if (!fresh)
        out.push_back("state '" + label + "' appears in fibers of nodes '" +
                      base.nodes()[it->second] + "' and '" + base.nodes()[n] + "'");
    }
  if (!valid_state(a, a.initial)) out.push_back("initial state is not in any fiber");
  for (std::size_t i = 0; i < a.finals.size(); ++i)
    if (!valid_state(a, a.finals[i]))
      out.push_back("final state #" + std::to_string(i) + " is not in any fiber");
  return out;
}

template <typename Morphism>
void validate_feet(const AutomatonShape& a, const std::vector<Morphism>& transitions,
                   std::vector<std::string>& out) {
  const auto& base = a.base;
  const std::size_t n = std::min(transitions.size(), base.edges().size());
  for (std::size_t e = 0; e < n; ++e) {
    const Edge& edge = base.edges()[e];
    if (edge.src >= a.fibers.size() || edge.dst >= a.fibers.size()) continue;
    if (!transitions[e].dom().same_layout(a.fibers[edge.src]))
      out.push_back("transition '" + edge.id + "': source feet differ from the fiber of node '" +
                    base.nodes()[edge.src] + "'");
    if (!transitions[e].cod().same_layout(a.fibers[edge.dst]))
      out.push_back("transition '" + edge.id + "': target feet differ from the fiber of node '" +
                    base.nodes()[edge.dst] + "'");
  }
}

}  // namespace

std::vector<std::string> validate(const SpanAutomaton& a) {
  auto out = validate_shape(a, a.transitions.size());
  validate_feet(a, a.transitions, out);
  return out;
}

std::vector<std::string> validate(const RelAutomaton& a) {
  auto out = validate_shape(a, a.transitions.size());
  validate_feet(a, a.transitions, out);
  return out;
}

std::vector<std::string> validate(const DetAutomaton& a) {
  auto out = validate_shape(a, a.transitions.size());
  const auto& base = a.base;
  const std::size_t n = std::min(a.transitions.size(), base.edges().size());
  for (std::size_t e = 0; e < n; ++e) {
    const Edge& edge = base.edges()[e];
    if (edge.src >= a.fibers.size() || edge.dst >= a.fibers.size()) continue;
    const auto& f = a.transitions[e];
    if (f.size() != a.fibers[edge.src].size()) {
      out.push_back("transition '" + edge.id + "' is not total on the fiber of node '" +
                    base.nodes()[edge.src] + "'");
      continue;
    }
    for (std::size_t target : f)
      if (target >= a.fibers[edge.dst].size()) {
        out.push_back("transition '" + edge.id + "' maps outside the fiber of node '" +
                      base.nodes()[edge.dst] + "'");
        break;
      }
  }
  return out;
}

// ---------------------------------------------------------- conversions

SpanAutomaton to_span(const RelAutomaton& a) {
  SpanAutomaton out;
  static_cast<AutomatonShape&>(out) = a;
  out.transitions.reserve(a.transitions.size());
  for (const auto& r : a.transitions) out.transitions.push_back(from_relation(r));
  return out;
}

RelAutomaton to_rel(const DetAutomaton& a) {
  RelAutomaton out;
  static_cast<AutomatonShape&>(out) = a;
  for (std::size_t e = 0; e < a.transitions.size(); ++e) {
    const Edge& edge = a.base.edges()[e];
    out.transitions.push_back(
        function_graph(a.fibers[edge.src], a.fibers[edge.dst], a.transitions[e]));
  }
  return out;
}

SpanAutomaton to_span(const DetAutomaton& a) { return to_span(to_rel(a)); }

// ------------------------------------------------------------ semantics

std::vector<Word> enumerate_words(const BaseGraph& base, std::size_t from_node,
                                  std::size_t max_len) {
  if (from_node >= base.nodes().size())
    throw Error(ErrorCode::unknown_element, "enumerate_words: node out of range");
  std::vector<Word> out{Word{from_node, {}}};
  std::size_t level_begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::size_t level_end = out.size();
    for (std::size_t i = level_begin; i < level_end; ++i) {
      const std::size_t end = word_end(base, out[i]);
      for (std::size_t e : base.out_edges(end)) {
        Word w = out[i];
        w.edges.push_back(e);
        out.push_back(std::move(w));
      }
    }
    level_begin = level_end;
  }
  return out;
}

NatMatrix run_word_span(const SpanAutomaton& a, const Word& w) {
  require_word(a.base, w);
  NatMatrix acc = identity_matrix(a.fibers.at(w.start));
  for (std::size_t e : w.edges) acc = matrix_compose(acc, to_matrix(a.transitions[e]));
  return acc;
}

Nat count_paths(const SpanAutomaton& a, const Word& w) {
  require_word(a.base, w);
  if (!valid_state(a, a.initial) || w.start != a.initial.node) return 0;
  Multiset v = multiset_unit(a.fibers[w.start], a.initial.index);
  for (std::size_t e : w.edges) v = multiset_extend(to_matrix(a.transitions[e]), v);
  const std::size_t end = word_end(a.base, w);
  Nat total = 0;
  for (const StateRef& f : a.finals)
    if (f.node == end) total = checked_add(total, v.at(f.index));
  return total;
}

bool accepted(const SpanAutomaton& a, const Word& w) { return count_paths(a, w) > 0; }

bool accepted(const RelAutomaton& a, const Word& w) {
  require_word(a.base, w);
  if (!valid_state(a, a.initial) || w.start != a.initial.node) return false;
  std::vector<std::size_t> current{a.initial.index};
  for (std::size_t e : w.edges) {
    std::vector<std::size_t> next;
    for (std::size_t q : current) {
      auto succ = a.transitions[e].successors(q);
      next.insert(next.end(), succ.begin(), succ.end());
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    current = std::move(next);
  }
  const std::size_t end = word_end(a.base, w);
  return std::any_of(current.begin(), current.end(),
                     [&](std::size_t q) { return a.is_final({end, q}); });
}

bool accepted(const DetAutomaton& a, const Word& w) {
  require_word(a.base, w);
  if (!valid_state(a, a.initial) || w.start != a.initial.node) return false;
  std::size_t q = a.initial.index;
  for (std::size_t e : w.edges) q = a.transitions[e].at(q);
  return a.is_final({word_end(a.base, w), q});
}

namespace {

template <typename A>
std::vector<Word> language_of(const A& a, std::size_t max_len) {
  if (!valid_state(a, a.initial)) return {};
  std::vector<Word> out;
  for (auto& w : enumerate_words(a.base, a.initial.node, max_len))
    if (accepted(a, w)) out.push_back(std::move(w));
  return out;
}

}  // namespace

std::vector<Word> language(const SpanAutomaton& a, std::size_t max_len) {
  return language_of(a, max_len);
}
std::vector<Word> language(const RelAutomaton& a, std::size_t max_len) {
  return language_of(a, max_len);
}
std::vector<Word> language(const DetAutomaton& a, std::size_t max_len) {
  return language_of(a, max_len);
}

std::vector<std::vector<std::size_t>> brute_force_paths(const SpanAutomaton& a, const Word& w,
                                                        std::size_t bound) {
  if (w.length() > bound)
    throw Error(ErrorCode::bound_exceeded, "brute_force_paths: word longer than the oracle bound " +
                                               std::to_string(bound));
  require_word(a.base, w);
  std::vector<std::vector<std::size_t>> out;
  if (!valid_state(a, a.initial) || w.start != a.initial.node) return out;
  const std::size_t end = word_end(a.base, w);
  std::vector<std::size_t> path;
  std::function<void(std::size_t, std::size_t)> walk = [&](std::size_t step, std::size_t state) {
    if (step == w.length()) {
      if (a.is_final({end, state})) out.push_back(path);
      return;
    }
    const Span& span = a.transitions[w.edges[step]];
    for (std::size_t t = 0; t < span.size(); ++t) {
      if (span.tokens()[t].left != state) continue;
      path.push_back(t);
      walk(step + 1, span.tokens()[t].right);
      path.pop_back();
    }
  };
  walk(0, a.initial.index);
  return out;
}

bool unique_lift_check(const SpanAutomaton& a, std::size_t max_len) {
  std::vector<NatMatrix> matrices;
  matrices.reserve(a.transitions.size());
  for (const auto& s : a.transitions) matrices.push_back(to_matrix(s));
  for (std::size_t n = 0; n < a.fibers.size(); ++n) {
    for (std::size_t q = 0; q < a.fibers[n].size(); ++q) {
      // Depth-first over words from n, carrying the lift-count vector.
      std::function<bool(std::size_t, const Multiset&, std::size_t)> walk =
          [&](std::size_t node, const Multiset& v, std::size_t depth) {
            if (v.total() != 1) return false;
            if (depth == max_len) return true;
            for (std::size_t e : a.base.out_edges(node))
              if (!walk(a.base.edges()[e].dst, multiset_extend(matrices[e], v), depth + 1))
                return false;
            return true;
          };
      if (!walk(n, multiset_unit(a.fibers[n], q), 0)) return false;
    }
  }
  return true;
}

bool unique_lift_check(const DetAutomaton& a, std::size_t max_len) {
  return unique_lift_check(to_span(a), max_len);
}

namespace {

struct LiftedPath {
  std::size_t start;
  std::vector<std::size_t> tokens;
  std::size_t end;
};

std::vector<LiftedPath> lifted_paths(const SpanAutomaton& a, const Word& w, std::size_t start) {
  std::vector<LiftedPath> out;
  std::vector<std::size_t> tokens;
  std::function<void(std::size_t, std::size_t)> walk = [&](std::size_t step, std::size_t state) {
    if (step == w.length()) {
      out.push_back({start, tokens, state});
      return;
    }
    const Span& span = a.transitions[w.edges[step]];
    for (std::size_t t = 0; t < span.size(); ++t) {
      if (span.tokens()[t].left != state) continue;
      tokens.push_back(t);
      walk(step + 1, span.tokens()[t].right);
      tokens.pop_back();
    }
  };
  walk(0, start);
  return out;
}

}  // namespace

bool ulf_factorization_check(const SpanAutomaton& a, std::size_t max_len) {
  for (std::size_t n = 0; n < a.fibers.size(); ++n) {
    for (const Word& w : enumerate_words(a.base, n, max_len)) {
      for (std::size_t k = 0; k <= w.length(); ++k) {
        const Word u{w.start, {w.edges.begin(), w.edges.begin() + k}};
        const Word v{word_end(a.base, u), {w.edges.begin() + k, w.edges.end()}};
        std::vector<LiftedPath> prefixes, suffixes;
        for (std::size_t q = 0; q < a.fibers[u.start].size(); ++q)
          for (auto& p : lifted_paths(a, u, q)) prefixes.push_back(std::move(p));
        for (std::size_t q = 0; q < a.fibers[v.start].size(); ++q)
          for (auto& p : lifted_paths(a, v, q)) suffixes.push_back(std::move(p));
        for (std::size_t q = 0; q < a.fibers[n].size(); ++q) {
          for (const LiftedPath& whole : lifted_paths(a, w, q)) {
            std::size_t splits = 0;
            for (const LiftedPath& beta : prefixes) {
              if (beta.start != whole.start ||
                  !std::equal(beta.tokens.begin(), beta.tokens.end(), whole.tokens.begin()))
                continue;
              for (const LiftedPath& gamma : suffixes)
                if (gamma.start == beta.end && gamma.end == whole.end &&
                    std::equal(gamma.tokens.begin(), gamma.tokens.end(),
                               whole.tokens.begin() + static_cast<std::ptrdiff_t>(k)))
                  ++splits;
            }
            if (splits != 1) return false;
          }
        }
      }
    }
  }
  return true;
}

bool is_deterministic(const RelAutomaton& a) {
  return std::all_of(a.transitions.begin(), a.transitions.end(),
                     [](const Relation& r) { return is_total_function(r); });
}

}  // namespace spanauto
