#include "spanauto/determinize.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "spanauto/kernels.hpp"

namespace spanauto {

RelAutomaton rel_of(const SpanAutomaton& a) {
  RelAutomaton out;
  static_cast<AutomatonShape&>(out) = a;
  out.transitions.reserve(a.transitions.size());
  for (const Span& s : a.transitions) out.transitions.push_back(image(s));
  return out;
}

namespace {

std::string empty_subset_label(const BaseGraph& base, std::size_t node) {
  return base.nodes().size() == 1 ? "{}" : "{}@" + base.nodes()[node];
}

}  // namespace

std::vector<std::vector<SubsetState>> det_states(const AutomatonShape& a,
                                                 const DetOptions& options) {
  std::vector<std::vector<SubsetState>> out(a.fibers.size());
  for (std::size_t n = 0; n < a.fibers.size(); ++n)
    for (SubsetMask m : canonical_subsets(a.fibers[n].size(), options.powerset_cap))
      out[n].push_back({n, m});
  return out;
}

DetAutomaton det(const RelAutomaton& a, const DetOptions& options) {
  if (auto violations = validate(a); !violations.empty())
    throw Error(ErrorCode::input, "det: invalid automaton: " + violations.front());
  const auto& base = a.base;
  const std::size_t nodes = base.nodes().size();

  std::vector<std::vector<SubsetMask>> order(nodes);
  std::vector<std::vector<std::size_t>> rank(nodes);
  DetAutomaton d;
  d.base = base;
  for (std::size_t n = 0; n < nodes; ++n) {
    const FinSet& fiber = a.fibers[n];
    order[n] = canonical_subsets(fiber.size(), options.powerset_cap);
    rank[n].assign(order[n].size(), 0);
    std::vector<std::string> labels;
    labels.reserve(order[n].size());
    for (std::size_t i = 0; i < order[n].size(); ++i) {
      rank[n][order[n][i]] = i;
      labels.push_back(subset_label(fiber, order[n][i], empty_subset_label(base, n)));
    }
    d.fibers.emplace_back("P(" + fiber.id() + ")", std::move(labels));
  }

  for (std::size_t e = 0; e < base.edges().size(); ++e) {
    const Edge& edge = base.edges()[e];
    const Relation& r = a.transitions[e];
    std::vector<SubsetMask> rows(r.dom().size(), 0);
    for (const auto& [x, y] : r.pairs()) rows[x] |= SubsetMask{1} << y;
    const auto table = kernels::powerset_table_parallel(rows);
    std::vector<std::size_t> f(order[edge.src].size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = rank[edge.dst][table[order[edge.src][i]]];
    d.transitions.push_back(std::move(f));
  }

  d.initial = {a.initial.node, rank[a.initial.node][SubsetMask{1} << a.initial.index]};
  std::vector<SubsetMask> final_masks(nodes, 0);
  for (const StateRef& f : a.finals) final_masks[f.node] |= SubsetMask{1} << f.index;
  for (std::size_t n = 0; n < nodes; ++n)
    for (std::size_t i = 0; i < order[n].size(); ++i)
      if (order[n][i] & final_masks[n]) d.finals.push_back({n, i});
  return d;
}

DetAutomaton det_span(const SpanAutomaton& a, const DetOptions& options) {
  return det(rel_of(a), options);
}

// ---------------------------------------------------------------- MDet

MDetMachine mdet(const SpanAutomaton& a) {
  if (auto violations = validate(a); !violations.empty())
    throw Error(ErrorCode::input, "mdet: invalid automaton: " + violations.front());
  std::vector<NatMatrix> matrices;
  matrices.reserve(a.transitions.size());
  for (const Span& s : a.transitions) matrices.push_back(to_matrix(s));
  return MDetMachine{a.base,
                     a.fibers,
                     std::move(matrices),
                     a.initial,
                     multiset_unit(a.fibers[a.initial.node], a.initial.index),
                     a.finals};
}

Multiset mdet_run(const MDetMachine& m, const Word& w) {
  if (!well_formed(m.base, w)) throw Error(ErrorCode::input, "ill-formed word");
  if (w.start != m.initial.node)
    throw Error(ErrorCode::input, "mdet_run: word is not based at the initial node");
  Multiset v = m.initial_vector;
  for (std::size_t e : w.edges) v = multiset_extend(m.matrices[e], v);
  return v;
}

Nat mdet_accept_count(const MDetMachine& m, std::size_t node, const Multiset& v) {
  Nat total = 0;
  for (const StateRef& f : m.finals)
    if (f.node == node) total = checked_add(total, v.at(f.index));
  return total;
}

Nat mdet_accept_count(const MDetMachine& m, const Word& w) {
  if (w.start != m.initial.node) return 0;
  return mdet_accept_count(m, word_end(m.base, w), mdet_run(m, w));
}

std::optional<std::size_t> MDetExpansion::find(std::size_t node, const Multiset& v) const {
  const auto& fiber = states.at(node);
  for (std::size_t i = 0; i < fiber.size(); ++i)
    if (fiber[i].counts() == v.counts()) return i;
  return std::nullopt;
}

std::size_t MDetExpansion::size() const {
  std::size_t n = 0;
  for (const auto& f : states) n += f.size();
  return n;
}

MDetExpansion mdet_expand(const MDetMachine& m, std::size_t max_states, std::size_t max_len,
                          const std::vector<std::pair<std::size_t, Multiset>>& seeds) {
  MDetExpansion x;
  x.base = m.base;
  const std::size_t nodes = m.base.nodes().size();
  x.states.resize(nodes);
  x.depth.resize(nodes);
  std::vector<std::map<std::vector<Nat>, std::size_t>> index(nodes);
  std::deque<StateRef> queue;

  auto discover = [&](std::size_t node, const Multiset& v,
                      std::size_t depth) -> std::optional<std::size_t> {
    auto it = index[node].find(v.counts());
    if (it != index[node].end()) return it->second;
    if (x.size() >= max_states) {
      x.truncated = true;
      return std::nullopt;
    }
    const std::size_t i = x.states[node].size();
    index[node].emplace(v.counts(), i);
    x.states[node].push_back(v);
    x.depth[node].push_back(depth);
    queue.push_back({node, i});
    return i;
  };

  if (auto i = discover(m.initial.node, m.initial_vector, 0)) x.initial = {m.initial.node, *i};
  for (const auto& [node, v] : seeds) {
    detail::require_equal_sets(v.base(), m.fibers.at(node), "mdet_expand seed");
    discover(node, v, 0);
  }

  // Discovery pass: breadth first, edges in id order.
  while (!queue.empty()) {
    const StateRef s = queue.front();
    queue.pop_front();
    if (x.depth[s.node][s.index] >= max_len) continue;
    for (std::size_t e : m.base.out_edges(s.node)) {
      const Multiset next = multiset_extend(m.matrices[e], x.states[s.node][s.index]);
      discover(m.base.edges()[e].dst, next, x.depth[s.node][s.index] + 1);
    }
  }

  // Transition pass over everything discovered.
  x.transitions.resize(m.base.edges().size());
  for (std::size_t e = 0; e < m.base.edges().size(); ++e) {
    const Edge& edge = m.base.edges()[e];
    auto& f = x.transitions[e];
    f.assign(x.states[edge.src].size(), MDetExpansion::npos);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const Multiset next = multiset_extend(m.matrices[e], x.states[edge.src][i]);
      auto it = index[edge.dst].find(next.counts());
      if (it == index[edge.dst].end())
        x.truncated = true;
      else
        f[i] = it->second;
    }
  }
  return x;
}

// ----------------------------------------------------------- classical

ClassicalNFA classical_from(const RelAutomaton& a) {
  if (a.base.nodes().size() != 1)
    throw Error(ErrorCode::input, "a classical NFA needs a single-node base");
  if (auto violations = validate(a); !violations.empty())
    throw Error(ErrorCode::input, "invalid automaton: " + violations.front());
  ClassicalNFA n;
  n.states = a.fibers[0];
  n.delta.assign(n.states.size(), {});
  for (std::size_t e = 0; e < a.base.edges().size(); ++e) {
    n.alphabet.push_back(a.base.edges()[e].label);
    for (std::size_t q = 0; q < n.states.size(); ++q)
      n.delta[q].push_back(a.transitions[e].successors(q));
  }
  n.q0 = a.initial.index;
  for (const StateRef& f : a.finals) n.finals.push_back(f.index);
  return n;
}

RelAutomaton to_rel(const ClassicalNFA& n) {
  std::vector<Edge> edges;
  for (const auto& letter : n.alphabet) edges.push_back({letter, letter, 0, 0});
  RelAutomaton a;
  a.base = BaseGraph({"q"}, std::move(edges));
  a.fibers = {n.states};
  for (std::size_t l = 0; l < n.alphabet.size(); ++l) {
    std::vector<Relation::Pair> pairs;
    for (std::size_t q = 0; q < n.states.size(); ++q)
      for (std::size_t t : n.delta[q][l]) pairs.emplace_back(q, t);
    a.transitions.emplace_back(n.states, n.states, std::move(pairs));
  }
  a.initial = {0, n.q0};
  for (std::size_t f : n.finals) a.finals.push_back({0, f});
  return a;
}

DetAutomaton classical_subset_construction(const ClassicalNFA& n) {
  const std::size_t q = n.states.size();
  if (q > 20) throw Error(ErrorCode::bound_exceeded, "subset construction over more than 20 states");
  const std::size_t subsets = std::size_t{1} << q;

  std::vector<std::string> labels;
  for (std::size_t s = 0; s < subsets; ++s) {
    std::string label = "{";
    for (std::size_t i = 0, k = 0; i < q; ++i)
      if (s >> i & 1) label += (k++ ? "," : "") + n.states[i];
    labels.push_back(label + "}");
  }

  std::vector<Edge> edges;
  for (const auto& letter : n.alphabet) edges.push_back({letter, letter, 0, 0});
  DetAutomaton d;
  d.base = BaseGraph({"q"}, std::move(edges));
  d.fibers.emplace_back("P(" + n.states.id() + ")", std::move(labels));
  for (std::size_t l = 0; l < n.alphabet.size(); ++l) {
    std::vector<std::size_t> f(subsets, 0);
    for (std::size_t s = 0; s < subsets; ++s) {
      std::size_t next = 0;
      for (std::size_t i = 0; i < q; ++i)
        if (s >> i & 1)
          for (std::size_t t : n.delta[i][l]) next |= std::size_t{1} << t;
      f[s] = next;
    }
    d.transitions.push_back(std::move(f));
  }
  d.initial = {0, std::size_t{1} << n.q0};
  std::size_t final_mask = 0;
  for (std::size_t f : n.finals) final_mask |= std::size_t{1} << f;
  for (std::size_t s = 0; s < subsets; ++s)
    if (s & final_mask) d.finals.push_back({0, s});
  return d;
}

// ------------------------------------------------------------- pruning

DetAutomaton prune_reachable(const DetAutomaton& d) {
  const auto& base = d.base;
  std::vector<std::vector<bool>> seen(d.fibers.size());
  for (std::size_t n = 0; n < d.fibers.size(); ++n) seen[n].assign(d.fibers[n].size(), false);
  std::deque<StateRef> queue{d.initial};
  seen[d.initial.node][d.initial.index] = true;
  while (!queue.empty()) {
    const StateRef s = queue.front();
    queue.pop_front();
    for (std::size_t e : base.out_edges(s.node)) {
      const StateRef t{base.edges()[e].dst, d.transitions[e][s.index]};
      if (!seen[t.node][t.index]) {
        seen[t.node][t.index] = true;
        queue.push_back(t);
      }
    }
  }

  DetAutomaton out;
  out.base = base;
  std::vector<std::vector<std::size_t>> remap(d.fibers.size());
  for (std::size_t n = 0; n < d.fibers.size(); ++n) {
    std::vector<std::string> labels;
    remap[n].assign(d.fibers[n].size(), StateRef::npos);
    for (std::size_t i = 0; i < d.fibers[n].size(); ++i)
      if (seen[n][i]) {
        remap[n][i] = labels.size();
        labels.push_back(d.fibers[n][i]);
      }
    out.fibers.emplace_back(d.fibers[n].id(), std::move(labels));
  }
  for (std::size_t e = 0; e < base.edges().size(); ++e) {
    const Edge& edge = base.edges()[e];
    std::vector<std::size_t> f;
    for (std::size_t i = 0; i < d.fibers[edge.src].size(); ++i)
      if (seen[edge.src][i]) f.push_back(remap[edge.dst][d.transitions[e][i]]);
    out.transitions.push_back(std::move(f));
  }
  out.initial = {d.initial.node, remap[d.initial.node][d.initial.index]};
  for (const StateRef& f : d.finals)
    if (seen[f.node][f.index]) out.finals.push_back({f.node, remap[f.node][f.index]});
  return out;
}

std::optional<std::vector<std::vector<std::size_t>>> reachable_iso_check(const DetAutomaton& d1,
                                                                         const DetAutomaton& d2) {
  const DetAutomaton a = prune_reachable(d1);
  const DetAutomaton b = prune_reachable(d2);
  const auto& ba = a.base;
  const auto& bb = b.base;
  if (ba.nodes().size() != bb.nodes().size() || ba.edges().size() != bb.edges().size())
    return std::nullopt;

  std::vector<std::size_t> node_map(ba.nodes().size());
  for (std::size_t n = 0; n < ba.nodes().size(); ++n) {
    try {
      node_map[n] = bb.node_index(ba.nodes()[n]);
    } catch (const Error&) {
      return std::nullopt;
    }
  }
  std::map<std::tuple<std::string, std::string, std::string>, std::size_t> b_edges;
  for (std::size_t e = 0; e < bb.edges().size(); ++e) {
    const Edge& edge = bb.edges()[e];
    b_edges[{bb.nodes()[edge.src], bb.nodes()[edge.dst], edge.label}] = e;
  }
  std::vector<std::size_t> edge_map(ba.edges().size());
  for (std::size_t e = 0; e < ba.edges().size(); ++e) {
    const Edge& edge = ba.edges()[e];
    auto it = b_edges.find({ba.nodes()[edge.src], ba.nodes()[edge.dst], edge.label});
    if (it == b_edges.end()) return std::nullopt;
    edge_map[e] = it->second;
  }

  for (std::size_t n = 0; n < a.fibers.size(); ++n)
    if (a.fibers[n].size() != b.fibers[node_map[n]].size()) return std::nullopt;
  if (node_map[a.initial.node] != b.initial.node) return std::nullopt;

  std::vector<std::vector<std::size_t>> map(a.fibers.size());
  std::vector<std::vector<bool>> hit(b.fibers.size());
  for (std::size_t n = 0; n < a.fibers.size(); ++n) {
    map[n].assign(a.fibers[n].size(), StateRef::npos);
    hit[node_map[n]].assign(b.fibers[node_map[n]].size(), false);
  }
  std::deque<StateRef> queue{a.initial};
  map[a.initial.node][a.initial.index] = b.initial.index;
  hit[b.initial.node][b.initial.index] = true;
  while (!queue.empty()) {
    const StateRef s = queue.front();
    queue.pop_front();
    const std::size_t image = map[s.node][s.index];
    if (a.is_final(s) != b.is_final({node_map[s.node], image})) return std::nullopt;
    for (std::size_t e : ba.out_edges(s.node)) {
      const std::size_t dst = ba.edges()[e].dst;
      const std::size_t ta = a.transitions[e][s.index];
      const std::size_t tb = b.transitions[edge_map[e]][image];
      std::size_t& slot = map[dst][ta];
      if (slot == StateRef::npos) {
        if (hit[node_map[dst]][tb]) return std::nullopt;
        slot = tb;
        hit[node_map[dst]][tb] = true;
        queue.push_back({dst, ta});
      } else if (slot != tb) {
        return std::nullopt;
      }
    }
  }
  return map;
}

}  // namespace spanauto
