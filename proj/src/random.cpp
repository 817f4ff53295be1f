#include "spanauto/random.hpp"

#include <algorithm>
#include <map>
#include <queue>

namespace spanauto {

std::size_t Rng::between(std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
}

bool Rng::coin(double p) { return std::bernoulli_distribution(p)(engine_); }

FinSet random_finset(Rng& rng, const std::string& id, std::size_t max_size, std::size_t min_size) {
  const std::size_t n = rng.between(min_size, std::max(min_size, max_size));
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(id + std::to_string(i));
  return FinSet(id, std::move(labels));
}

namespace {

std::vector<Token> random_tokens(Rng& rng, std::size_t rows, std::size_t cols, Nat max_mult,
                                 double density) {
  std::vector<Token> tokens;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      if (!rng.coin(density)) continue;
      const Nat k = rng.between(1, max_mult);
      for (Nat c = 0; c < k; ++c) tokens.push_back({"t" + std::to_string(tokens.size()), i, j});
    }
  std::shuffle(tokens.begin(), tokens.end(), rng.engine());
  return tokens;
}

}  // namespace

Span random_span(Rng& rng, const FinSet& dom, const FinSet& cod, Nat max_mult) {
  return Span(dom, cod, random_tokens(rng, dom.size(), cod.size(), max_mult, 0.4));
}

Relation random_relation(Rng& rng, const FinSet& dom, const FinSet& cod) {
  std::vector<Relation::Pair> pairs;
  for (std::size_t i = 0; i < dom.size(); ++i)
    for (std::size_t j = 0; j < cod.size(); ++j)
      if (rng.coin(0.4)) pairs.emplace_back(i, j);
  return Relation(dom, cod, std::move(pairs));
}

NatMatrix random_matrix(Rng& rng, const FinSet& dom, const FinSet& cod, Nat max_entry) {
  std::vector<std::vector<Nat>> entries(dom.size(), std::vector<Nat>(cod.size(), 0));
  for (auto& row : entries)
    for (auto& x : row)
      if (rng.coin(0.5)) x = rng.between(1, max_entry);
  return NatMatrix::from_dense(dom, cod, entries);
}

Multiset random_multiset(Rng& rng, const FinSet& base, Nat max_count) {
  std::vector<Nat> counts(base.size());
  for (auto& c : counts) c = rng.between(0, max_count);
  return Multiset(base, std::move(counts));
}

SubsetMask random_subset(Rng& rng, std::size_t n) {
  SubsetMask mask = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (rng.coin()) mask |= SubsetMask{1} << i;
  return mask;
}

namespace {

BaseGraph random_base(Rng& rng, const AutomatonLimits& limits) {
  const std::size_t n = rng.between(1, limits.max_nodes);
  std::vector<std::string> nodes;
  for (std::size_t i = 0; i < n; ++i) nodes.push_back("n" + std::to_string(i));
  std::vector<Edge> edges;
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t d = 0; d < n; ++d) {
      if (!rng.coin(limits.edge_density) && !(s == 0 && d == 0)) continue;
      std::vector<std::string> letters;
      for (std::size_t i = 0; i < std::max<std::size_t>(limits.max_labels, 1); ++i)
        letters.push_back(std::string(1, static_cast<char>('a' + i)));
      std::shuffle(letters.begin(), letters.end(), rng.engine());
      letters.resize(rng.between(1, letters.size()));
      std::sort(letters.begin(), letters.end());
      for (const auto& l : letters) edges.push_back({"e" + std::to_string(edges.size()), l, s, d});
    }
  return BaseGraph(std::move(nodes), std::move(edges));
}

std::vector<FinSet> numbered_fibers(Rng& rng, const BaseGraph& base, std::size_t max_states,
                                    const std::string& prefix, std::size_t min_first = 1) {
  std::vector<FinSet> fibers;
  std::size_t next = 1;
  for (std::size_t n = 0; n < base.nodes().size(); ++n) {
    const std::size_t size = rng.between(n == 0 ? min_first : 0, max_states);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < size; ++i) labels.push_back(prefix + std::to_string(next++));
    fibers.emplace_back(base.nodes()[n], std::move(labels));
  }
  return fibers;
}

std::vector<StateRef> random_finals(Rng& rng, const std::vector<FinSet>& fibers) {
  std::vector<StateRef> finals;
  for (std::size_t n = 0; n < fibers.size(); ++n)
    for (std::size_t i = 0; i < fibers[n].size(); ++i)
      if (rng.coin(0.4)) finals.push_back({n, i});
  return finals;
}

}  // namespace

SpanAutomaton random_span_automaton(Rng& rng, const AutomatonLimits& limits) {
  SpanAutomaton a;
  a.base = random_base(rng, limits);
  a.fibers = numbered_fibers(rng, a.base, limits.max_states, "");
  for (const Edge& e : a.base.edges())
    a.transitions.emplace_back(a.fibers[e.src], a.fibers[e.dst],
                               random_tokens(rng, a.fibers[e.src].size(), a.fibers[e.dst].size(),
                                             limits.max_mult, limits.transition_density));
  a.initial = {0, rng.between(0, a.fibers[0].size() - 1)};
  a.finals = random_finals(rng, a.fibers);
  return a;
}

ClassicalNFA random_nfa(Rng& rng, std::size_t max_states, std::size_t max_letters) {
  ClassicalNFA n;
  const std::size_t k = rng.between(1, max_letters);
  for (std::size_t i = 0; i < k; ++i) n.alphabet.push_back(std::string(1, static_cast<char>('a' + i)));
  const std::size_t size = rng.between(1, max_states);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < size; ++i) labels.push_back(std::to_string(i + 1));
  n.states = FinSet("Q", std::move(labels));
  n.delta.assign(size, std::vector<std::vector<std::size_t>>(k));
  for (std::size_t q = 0; q < size; ++q)
    for (std::size_t l = 0; l < k; ++l)
      for (std::size_t r = 0; r < size; ++r)
        if (rng.coin(0.3)) n.delta[q][l].push_back(r);
  n.q0 = rng.between(0, size - 1);
  for (std::size_t q = 0; q < size; ++q)
    if (rng.coin(0.4)) n.finals.push_back(q);
  return n;
}

DetAutomaton random_det_over(Rng& rng, const BaseGraph& base, std::size_t max_states) {
  DetAutomaton d;
  d.base = base;
  d.fibers = numbered_fibers(rng, base, max_states, "g");
  // Targets of edges need a nonempty fiber whenever the source has states.
  for (const Edge& e : base.edges())
    if (!d.fibers[e.src].empty() && d.fibers[e.dst].empty())
      return random_det_over(rng, base, max_states);
  for (const Edge& e : base.edges()) {
    std::vector<std::size_t> table;
    for (std::size_t i = 0; i < d.fibers[e.src].size(); ++i)
      table.push_back(rng.between(0, d.fibers[e.dst].size() - 1));
    d.transitions.push_back(std::move(table));
  }
  d.initial = {0, 0};
  d.finals = random_finals(rng, d.fibers);
  return d;
}

namespace {

// Reachable product of a DFA with a deterministic system whose states are
// keyed by K, explored from `seeds`. Returns false past `cap` states.
template <typename Key, typename Step, typename Label>
bool product_closure(const DetAutomaton& d, std::vector<std::pair<std::size_t, Key>> seeds,
                     std::vector<std::pair<std::size_t, Key>> initial_first, std::size_t cap,
                     Step&& step, Label&& label, DetAutomaton& g,
                     std::vector<std::vector<Key>>& keys) {
  const BaseGraph& base = d.base;
  const std::size_t nodes = base.nodes().size();
  std::vector<std::map<std::pair<std::size_t, Key>, std::size_t>> index(nodes);
  std::vector<std::vector<std::pair<std::size_t, Key>>> states(nodes);
  std::queue<std::pair<std::size_t, std::size_t>> work;
  std::size_t total = 0;
  auto add = [&](std::size_t n, std::pair<std::size_t, Key> s) -> std::size_t {
    auto [it, fresh] = index[n].emplace(s, states[n].size());
    if (fresh) {
      states[n].push_back(std::move(s));
      work.emplace(n, it->second);
      ++total;
    }
    return it->second;
  };
  for (auto& s : initial_first) add(0, std::move(s));
  for (auto& [n, k] : seeds) add(n, {0, std::move(k)});
  while (!work.empty() && total <= cap) {
    auto [n, i] = work.front();
    work.pop();
    for (std::size_t e : base.out_edges(n)) {
      const Edge& edge = base.edges()[e];
      const auto& [dstate, key] = states[n][i];
      add(edge.dst, {d.transitions[e][dstate], step(e, key)});
    }
  }
  if (total > cap) return false;

  g.base = base;
  g.fibers.clear();
  g.transitions.assign(base.edges().size(), {});
  keys.assign(nodes, {});
  for (std::size_t n = 0; n < nodes; ++n) {
    std::vector<std::string> labels;
    for (const auto& [ds, key] : states[n]) {
      labels.push_back(d.fibers[n][ds] + "|" + label(n, key));
      keys[n].push_back(key);
    }
    g.fibers.emplace_back(base.nodes()[n], std::move(labels));
  }
  for (std::size_t e = 0; e < base.edges().size(); ++e) {
    const Edge& edge = base.edges()[e];
    for (const auto& [ds, key] : states[edge.src])
      g.transitions[e].push_back(index[edge.dst].at({d.transitions[e][ds], step(e, key)}));
  }
  g.initial = {0, 0};
  return true;
}

// A DFA over `base` with at least one state at every node.
DetAutomaton covering_det(Rng& rng, const BaseGraph& base, std::size_t max_states) {
  for (;;) {
    DetAutomaton d = random_det_over(rng, base, max_states);
    if (std::all_of(d.fibers.begin(), d.fibers.end(), [](const FinSet& f) { return !f.empty(); }))
      return d;
  }
}

}  // namespace

FactorInstance random_det_factor_instance(Rng& rng, const AutomatonLimits& limits,
                                          std::size_t dfa_states) {
  const SpanAutomaton f = random_span_automaton(rng, limits);
  const DetAutomaton det_f = det_span(f);
  const auto subsets = det_states(f);
  const DetAutomaton d = covering_det(rng, f.base, dfa_states);

  std::vector<std::pair<std::size_t, std::size_t>> seeds;  // (node, Det(F) index)
  for (std::size_t n = 0; n < f.fibers.size(); ++n)
    if (rng.coin()) seeds.emplace_back(n, rng.between(0, det_f.fibers[n].size() - 1));

  DetAutomaton g;
  std::vector<std::vector<std::size_t>> keys;
  product_closure<std::size_t>(
      d, seeds, {{0, det_f.initial.index}}, static_cast<std::size_t>(-1),
      [&](std::size_t e, std::size_t s) { return det_f.transitions[e][s]; },
      [&](std::size_t n, std::size_t s) { return det_f.fibers[n][s]; }, g, keys);
  for (std::size_t n = 0; n < g.fibers.size(); ++n)
    for (std::size_t i = 0; i < g.fibers[n].size(); ++i)
      if (det_f.is_final({n, keys[n][i]})) g.finals.push_back({n, i});

  Simulation alpha{f, to_span(g), {}, rng.coin() ? Strength::strict : Strength::lax};
  for (std::size_t n = 0; n < g.fibers.size(); ++n) {
    std::vector<Relation::Pair> pairs;
    for (std::size_t i = 0; i < keys[n].size(); ++i)
      for (std::size_t q : mask_members(subsets[n][keys[n][i]].members)) pairs.emplace_back(i, q);
    alpha.components.push_back(from_relation(Relation(g.fibers[n], f.fibers[n], std::move(pairs))));
  }
  return {std::move(alpha), std::move(g)};
}

FactorInstance random_mdet_factor_instance(Rng& rng, const AutomatonLimits& limits,
                                           std::size_t dfa_states) {
  constexpr std::size_t kCap = 48;
  for (std::size_t attempt = 0;; ++attempt) {
    SpanAutomaton f = random_span_automaton(rng, limits);
    if (attempt >= 8) {
      // Keep one token per source state: multiset totals can then only
      // shrink, so the reachable part is finite.
      for (std::size_t e = 0; e < f.transitions.size(); ++e) {
        std::vector<Token> kept;
        std::vector<bool> seen(f.transitions[e].dom().size(), false);
        for (const Token& t : f.transitions[e].tokens())
          if (!seen[t.left]) {
            seen[t.left] = true;
            kept.push_back(t);
          }
        f.transitions[e] = Span(f.transitions[e].dom(), f.transitions[e].cod(), std::move(kept));
      }
    }
    const MDetMachine m = mdet(f);
    const DetAutomaton d = covering_det(rng, f.base, dfa_states);
    std::vector<std::pair<std::size_t, std::vector<Nat>>> seeds;
    for (std::size_t n = 0; n < f.fibers.size(); ++n)
      if (rng.coin(0.3)) seeds.emplace_back(n, random_multiset(rng, f.fibers[n], 1).counts());

    DetAutomaton g;
    std::vector<std::vector<std::vector<Nat>>> keys;
    bool closed = false;
    try {
      closed = product_closure<std::vector<Nat>>(
          d, seeds, {{0, m.initial_vector.counts()}}, kCap,
          [&](std::size_t e, const std::vector<Nat>& v) {
            return multiset_extend(m.matrices[e], Multiset(m.fibers[f.base.edges()[e].src], v)).counts();
          },
          [&](std::size_t n, const std::vector<Nat>& v) {
            return Multiset(m.fibers[n], v).tuple_label();
          },
          g, keys);
    } catch (const Error& e) {
      // Counts can double along a long chain; such an F is redrawn.
      if (e.code() != ErrorCode::overflow) throw;
    }
    if (!closed) continue;
    for (std::size_t n = 0; n < g.fibers.size(); ++n)
      for (std::size_t i = 0; i < g.fibers[n].size(); ++i)
        if (mdet_accept_count(m, n, Multiset(m.fibers[n], keys[n][i])) > 0) g.finals.push_back({n, i});

    Simulation alpha{f, to_span(g), {}, Strength::pseudo};
    for (std::size_t n = 0; n < g.fibers.size(); ++n) {
      std::vector<std::vector<Nat>> rows = keys[n];
      alpha.components.push_back(
          from_matrix(NatMatrix::from_dense(g.fibers[n], f.fibers[n], rows)));
    }
    return {std::move(alpha), std::move(g)};
  }
}

}  // namespace spanauto
