#include "spanauto/simulation.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "omp_util.hpp"

namespace spanauto {

const char* to_string(Strength s) {
  switch (s) {
    case Strength::strict: return "strict";
    case Strength::pseudo: return "pseudo";
    case Strength::lax: return "lax";
  }
  return "lax";
}

Strength parse_strength(const std::string& text) {
  if (text == "strict") return Strength::strict;
  if (text == "pseudo") return Strength::pseudo;
  if (text == "lax") return Strength::lax;
  throw Error(ErrorCode::input, "unknown strength '" + text + "' (expected strict|pseudo|lax)");
}

std::vector<std::string> validate(const Simulation& sim) {
  std::vector<std::string> out;
  for (const auto& v : validate(sim.source)) out.push_back("source: " + v);
  for (const auto& v : validate(sim.target)) out.push_back("target: " + v);
  if (!same_base(sim.source.base, sim.target.base)) {
    out.push_back("source and target have different base graphs");
    return out;
  }
  const auto& nodes = sim.source.base.nodes();
  if (sim.components.size() != nodes.size()) {
    out.push_back("component count differs from node count");
    return out;
  }
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    if (n >= sim.source.fibers.size() || n >= sim.target.fibers.size()) break;
    if (!sim.components[n].dom().same_layout(sim.target.fibers[n]))
      out.push_back("component at node '" + nodes[n] + "' does not start at the target fiber");
    if (!sim.components[n].cod().same_layout(sim.source.fibers[n]))
      out.push_back("component at node '" + nodes[n] + "' does not end at the source fiber");
  }
  return out;
}

namespace {

using Row = NatMatrix::Row;

// sum_k coeff(k) * m.row(k)
Row row_times(const Row& coeffs, const NatMatrix& m) {
  Row acc;
  for (const auto& [k, c] : coeffs)
    for (const auto& [j, n] : m.row(k)) acc.emplace_back(j, checked_mul(c, n));
  std::sort(acc.begin(), acc.end());
  Row out;
  for (const auto& [j, n] : acc) {
    if (!out.empty() && out.back().first == j)
      out.back().second = checked_add(out.back().second, n);
    else
      out.emplace_back(j, n);
  }
  return out;
}

bool support_included(const Row& a, const Row& b) {
  std::size_t i = 0;
  for (const auto& [j, n] : a) {
    while (i < b.size() && b[i].first < j) ++i;
    if (i == b.size() || b[i].first != j) return false;
  }
  return true;
}

bool rows_agree(const Row& left, const Row& right, Strength mode) {
  switch (mode) {
    case Strength::pseudo: return left == right;
    case Strength::lax: return support_included(left, right);
    case Strength::strict: return support_included(left, right) && support_included(right, left);
  }
  return false;
}

std::string row_text(const Row& row, const FinSet& cod) {
  std::string out = "{";
  for (std::size_t i = 0; i < row.size(); ++i)
    out += (i ? "," : "") + cod[row[i].first] + ":" + std::to_string(row[i].second);
  return out + "}";
}

void require_valid(const Simulation& sim) {
  if (!same_base(sim.source.base, sim.target.base))
    throw Error(ErrorCode::mismatch, "simulation endpoints have different base graphs");
  if (auto v = validate(sim); !v.empty())
    throw Error(ErrorCode::input, "invalid simulation: " + v.front());
}

}  // namespace

CheckResult check_span_simulation(const Simulation& sim, Strength mode,
                                  const std::optional<RowDomain>& rows, bool want_witnesses) {
  require_valid(sim);
  const BaseGraph& base = sim.source.base;
  const std::size_t edge_count = base.edges().size();

  std::vector<NatMatrix> alpha;
  for (const Span& c : sim.components) alpha.push_back(to_matrix(c));

  std::vector<std::string> failures(edge_count);
  detail::ExceptionSlot slot;
  const auto n_edges = static_cast<std::int64_t>(edge_count);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t ei = 0; ei < n_edges; ++ei) {
    slot.run([&] {
      const auto e = static_cast<std::size_t>(ei);
      const Edge& edge = base.edges()[e];
      const NatMatrix fs = to_matrix(sim.source.transitions[e]);
      const NatMatrix ft = to_matrix(sim.target.transitions[e]);
      std::vector<std::size_t> all;
      const std::vector<std::size_t>* domain = nullptr;
      if (rows) {
        domain = &rows->at(edge.src);
      } else {
        all.resize(sim.target.fibers[edge.src].size());
        std::iota(all.begin(), all.end(), 0);
        domain = &all;
      }
      for (std::size_t x : *domain) {
        const Row left = row_times(alpha[edge.src].row(x), fs);
        const Row right = row_times(ft.row(x), alpha[edge.dst]);
        if (!rows_agree(left, right, mode)) {
          const FinSet& cod = sim.source.fibers[edge.dst];
          failures[e] = "edge '" + edge.id + "' at target state '" +
                        sim.target.fibers[edge.src][x] + "': through source " +
                        row_text(left, cod) + ", through target " + row_text(right, cod);
          return;
        }
      }
    });
  }
  slot.rethrow();

  std::vector<std::size_t> order(edge_count);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return base.edges()[a].id < base.edges()[b].id;
  });

  CheckResult result;
  for (std::size_t e : order)
    if (!failures[e].empty()) {
      result.ok = false;
      result.failing_edge = e;
      result.detail = failures[e];
      return result;
    }

  if (want_witnesses && !rows && mode != Strength::strict) {
    for (std::size_t e = 0; e < edge_count; ++e) {
      const Edge& edge = base.edges()[e];
      const Span left = compose_spans(sim.components[edge.src], sim.source.transitions[e]);
      const Span right = compose_spans(sim.target.transitions[e], sim.components[edge.dst]);
      auto w = span_morphism_search(left, right, mode == Strength::pseudo);
      if (!w) throw std::logic_error("naturality witness missing for a passing square");
      result.witnesses.push_back(std::move(*w));
    }
  }
  return result;
}

CheckResult check_rel_simulation(const Simulation& sim) {
  return check_span_simulation(sim, Strength::strict);
}

Simulation dagger(const Simulation& sim) {
  Simulation out{sim.target, sim.source, {}, sim.strength};
  for (const Span& c : sim.components) out.components.push_back(dagger_span(c));
  return out;
}

bool check_bisimulation(const Simulation& sim, const std::optional<RowDomain>& rows,
                        const std::optional<RowDomain>& dagger_rows) {
  return check_span_simulation(sim, sim.strength, rows).ok &&
         check_span_simulation(dagger(sim), sim.strength, dagger_rows).ok;
}

Simulation compose_simulations(const Simulation& first, const Simulation& second) {
  if (!same_base(first.source.base, second.source.base))
    throw Error(ErrorCode::mismatch, "simulations over different base graphs");
  for (std::size_t n = 0; n < first.target.fibers.size(); ++n)
    if (!first.target.fibers[n].same_layout(second.source.fibers.at(n)))
      throw Error(ErrorCode::mismatch, "simulations do not meet at a common automaton");
  Simulation out{first.source, second.target, {}, std::max(first.strength, second.strength)};
  for (std::size_t n = 0; n < first.components.size(); ++n)
    out.components.push_back(compose_spans(second.components[n], first.components[n]));
  return out;
}

Simulation canonical_det_simulation(const SpanAutomaton& a, const DetOptions& options) {
  const DetAutomaton d = det_span(a, options);
  const auto states = det_states(a, options);
  Simulation sim{a, to_span(d), {}, Strength::lax};
  for (std::size_t n = 0; n < a.fibers.size(); ++n) {
    std::vector<Relation::Pair> pairs;
    for (std::size_t i = 0; i < states[n].size(); ++i)
      for (std::size_t q : mask_members(states[n][i].members)) pairs.emplace_back(i, q);
    sim.components.push_back(from_relation(Relation(d.fibers[n], a.fibers[n], std::move(pairs))));
  }
  return sim;
}

// ------------------------------------------------------------ MDet slice

namespace {

struct Slice {
  SpanAutomaton automaton;
  RowDomain rows;                              // discovered states
  std::vector<std::vector<Multiset>> states;   // discovered then frontier
};

Slice build_slice(const MDetMachine& m, const MDetExpansion& x) {
  const BaseGraph& base = m.base;
  const std::size_t nodes = base.nodes().size();
  Slice slice;
  slice.states = x.states;
  slice.rows.resize(nodes);
  std::vector<std::map<std::vector<Nat>, std::size_t>> index(nodes);
  for (std::size_t n = 0; n < nodes; ++n)
    for (std::size_t i = 0; i < x.states[n].size(); ++i) {
      slice.rows[n].push_back(i);
      index[n].emplace(x.states[n][i].counts(), i);
    }

  std::vector<std::vector<std::size_t>> successor(base.edges().size());
  for (std::size_t e = 0; e < base.edges().size(); ++e) {
    const Edge& edge = base.edges()[e];
    for (std::size_t i = 0; i < x.states[edge.src].size(); ++i) {
      std::size_t target = x.transitions[e][i];
      if (target == MDetExpansion::npos) {
        Multiset next = multiset_extend(m.matrices[e], x.states[edge.src][i]);
        auto [it, fresh] = index[edge.dst].emplace(next.counts(), slice.states[edge.dst].size());
        if (fresh) slice.states[edge.dst].push_back(std::move(next));
        target = it->second;
      }
      successor[e].push_back(target);
    }
  }

  SpanAutomaton& a = slice.automaton;
  a.base = base;
  for (std::size_t n = 0; n < nodes; ++n) {
    std::vector<std::string> labels;
    const std::string prefix = nodes == 1 ? "" : base.nodes()[n] + ":";
    for (const Multiset& v : slice.states[n]) labels.push_back(prefix + v.tuple_label());
    a.fibers.emplace_back("MDet(" + m.fibers[n].id() + ")", std::move(labels));
  }
  for (std::size_t e = 0; e < base.edges().size(); ++e) {
    const Edge& edge = base.edges()[e];
    std::vector<Token> tokens;
    for (std::size_t i = 0; i < successor[e].size(); ++i)
      tokens.push_back({a.fibers[edge.src][i], i, successor[e][i]});
    a.transitions.emplace_back(a.fibers[edge.src], a.fibers[edge.dst], std::move(tokens));
  }
  a.initial = x.initial;
  for (std::size_t n = 0; n < nodes; ++n)
    for (std::size_t i = 0; i < slice.states[n].size(); ++i)
      if (mdet_accept_count(m, n, slice.states[n][i]) > 0) a.finals.push_back({n, i});
  return slice;
}

Simulation multiplicity_simulation(const SpanAutomaton& f, const Slice& slice) {
  Simulation sim{f, slice.automaton, {}, Strength::pseudo};
  for (std::size_t n = 0; n < f.fibers.size(); ++n) {
    std::vector<NatMatrix::Row> rows;
    for (const Multiset& v : slice.states[n]) {
      NatMatrix::Row row;
      for (std::size_t q = 0; q < v.counts().size(); ++q)
        if (v.at(q)) row.emplace_back(q, v.at(q));
      rows.push_back(std::move(row));
    }
    sim.components.push_back(
        from_matrix(NatMatrix(slice.automaton.fibers[n], f.fibers[n], std::move(rows))));
  }
  return sim;
}

void require_target_is(const Simulation& alpha, const DetAutomaton& g) {
  require_valid(alpha);
  if (auto v = validate(g); !v.empty())
    throw Error(ErrorCode::input, "deterministic target invalid: " + v.front());
  const SpanAutomaton gs = to_span(g);
  bool same = same_base(alpha.target.base, gs.base);
  for (std::size_t n = 0; same && n < gs.fibers.size(); ++n)
    same = alpha.target.fibers[n].same_layout(gs.fibers[n]);
  for (std::size_t e = 0; same && e < gs.transitions.size(); ++e)
    same = to_matrix(alpha.target.transitions[e]) == to_matrix(gs.transitions[e]);
  if (!same)
    throw Error(ErrorCode::mismatch, "the simulation's target is not the given deterministic automaton");
}

Simulation functional_mate(const SpanAutomaton& source, const DetAutomaton& g,
                           const std::vector<std::vector<std::size_t>>& choice) {
  Simulation mate{source, to_span(g), {}, Strength::lax};
  for (std::size_t n = 0; n < g.fibers.size(); ++n)
    mate.components.push_back(
        from_relation(function_graph(g.fibers[n], source.fibers[n], choice[n])));
  return mate;
}

// Enumerates every family of functions G(n) -> candidates(n) and counts those
// accepted by `factors`; nullopt when the search space exceeds `limit`.
template <typename Accept>
std::optional<std::size_t> count_factorizations(
    const DetAutomaton& g, const std::vector<std::vector<std::size_t>>& candidates,
    std::size_t limit, Accept&& factors) {
  std::vector<std::pair<std::size_t, std::size_t>> slots;  // (node, G-state)
  std::size_t space = 1;
  for (std::size_t n = 0; n < g.fibers.size(); ++n)
    for (std::size_t x = 0; x < g.fibers[n].size(); ++x) {
      slots.emplace_back(n, x);
      if (candidates[n].empty()) return 0;
      space *= candidates[n].size();
      if (space > limit) return std::nullopt;
    }
  std::vector<std::size_t> digit(slots.size(), 0);
  std::vector<std::vector<std::size_t>> choice(g.fibers.size());
  for (std::size_t n = 0; n < g.fibers.size(); ++n) choice[n].assign(g.fibers[n].size(), 0);
  std::size_t count = 0;
  for (std::size_t step = 0; step < space; ++step) {
    for (std::size_t s = 0; s < slots.size(); ++s)
      choice[slots[s].first][slots[s].second] = candidates[slots[s].first][digit[s]];
    if (factors(choice)) ++count;
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if (++digit[s] < candidates[slots[s].first].size()) break;
      digit[s] = 0;
    }
  }
  return count;
}

bool small_enough_for_uniqueness(const SpanAutomaton& f) {
  if (f.base.edges().size() > 2) return false;
  return std::all_of(f.fibers.begin(), f.fibers.end(),
                     [](const FinSet& s) { return s.size() <= 2; });
}

constexpr std::size_t kUniquenessSearchLimit = std::size_t{1} << 16;

}  // namespace

BoundedSimulation canonical_mdet_simulation(const SpanAutomaton& a, std::size_t max_len,
                                            std::size_t max_states) {
  const MDetMachine m = mdet(a);
  MDetExpansion x = mdet_expand(m, max_states, max_len);
  Slice slice = build_slice(m, x);
  BoundedSimulation out{multiplicity_simulation(a, slice), slice.rows, std::move(x), false, {}};
  out.truncated = out.expansion.truncated;
  out.pseudo = check_span_simulation(out.simulation, Strength::pseudo, out.rows);
  return out;
}

FactorizationResult factor_det(const Simulation& alpha, const DetAutomaton& g,
                               const DetOptions& options) {
  require_target_is(alpha, g);
  if (auto declared = check_span_simulation(alpha, alpha.strength); !declared.ok)
    throw Error(ErrorCode::not_natural, std::string("alpha is not ") + to_string(alpha.strength) +
                                            " natural: " + declared.detail);
  if (auto rel = check_rel_simulation(alpha); !rel.ok)
    throw Error(ErrorCode::not_natural,
                "alpha is not natural at the relational level: " + rel.detail);

  const SpanAutomaton& f = alpha.source;
  const Simulation canonical = canonical_det_simulation(f, options);
  const SpanAutomaton& det_f = canonical.target;

  std::vector<std::vector<std::size_t>> beta(g.fibers.size());
  for (std::size_t n = 0; n < g.fibers.size(); ++n) {
    const auto rank = canonical_subset_rank(f.fibers[n].size(), options.powerset_cap);
    const Relation r = image(alpha.components[n]);
    for (std::size_t x = 0; x < g.fibers[n].size(); ++x)
      beta[n].push_back(rank[members_mask(r.successors(x))]);
  }

  auto composite_matches = [&](const Simulation& mate) {
    const Simulation composite = compose_simulations(canonical, mate);
    for (std::size_t n = 0; n < composite.components.size(); ++n)
      if (!(image(composite.components[n]) == image(alpha.components[n]))) return false;
    return true;
  };

  FactorizationResult result{functional_mate(det_f, g, beta), false, false, std::nullopt};
  result.composite_ok = composite_matches(result.mate);
  result.bisim_ok = check_bisimulation(result.mate);

  if (small_enough_for_uniqueness(f)) {
    std::vector<std::vector<std::size_t>> candidates(g.fibers.size());
    for (std::size_t n = 0; n < g.fibers.size(); ++n) {
      candidates[n].resize(det_f.fibers[n].size());
      std::iota(candidates[n].begin(), candidates[n].end(), 0);
    }
    bool found_beta = false;
    auto count = count_factorizations(g, candidates, kUniquenessSearchLimit, [&](const auto& choice) {
      const Simulation mate = functional_mate(det_f, g, choice);
      if (!composite_matches(mate) || !check_bisimulation(mate)) return false;
      if (choice == beta) found_beta = true;
      return true;
    });
    if (count) result.unique_ok = *count == 1 && found_beta;
  }
  return result;
}

FactorizationResult factor_mdet(const Simulation& alpha, const DetAutomaton& g,
                                std::size_t max_len, std::size_t max_states) {
  require_target_is(alpha, g);
  if (alpha.strength != Strength::pseudo)
    throw Error(ErrorCode::not_natural,
                "factor_mdet needs a pseudo (forward-backward) simulation; alpha is declared " +
                    std::string(to_string(alpha.strength)));
  if (auto check = check_span_simulation(alpha, Strength::pseudo); !check.ok)
    throw Error(ErrorCode::not_natural, "alpha is not pseudo natural: " + check.detail);

  const SpanAutomaton& f = alpha.source;
  const MDetMachine m = mdet(f);

  std::vector<std::vector<Multiset>> beta_vectors(g.fibers.size());
  std::vector<std::pair<std::size_t, Multiset>> seeds;
  for (std::size_t n = 0; n < g.fibers.size(); ++n) {
    const NatMatrix counts = to_matrix(alpha.components[n]);
    for (std::size_t x = 0; x < g.fibers[n].size(); ++x) {
      beta_vectors[n].push_back(row_multiset(counts, x));
      seeds.emplace_back(n, beta_vectors[n].back());
    }
  }
  const MDetExpansion x = mdet_expand(m, max_states, max_len, seeds);
  const Slice slice = build_slice(m, x);
  const Simulation canonical = multiplicity_simulation(f, slice);

  std::vector<std::vector<std::size_t>> beta(g.fibers.size());
  for (std::size_t n = 0; n < g.fibers.size(); ++n)
    for (const Multiset& v : beta_vectors[n]) {
      auto i = x.find(n, v);
      if (!i) throw Error(ErrorCode::bound_exceeded, "state cap reached before seeding the mate");
      beta[n].push_back(*i);
    }

  auto composite_matches = [&](const Simulation& mate) {
    const Simulation composite = compose_simulations(canonical, mate);
    for (std::size_t n = 0; n < composite.components.size(); ++n)
      if (!span_iso_eq(composite.components[n], alpha.components[n])) return false;
    return true;
  };
  auto bisimilar = [&](const Simulation& mate) {
    return check_bisimulation(mate, std::nullopt, slice.rows);
  };

  FactorizationResult result{functional_mate(slice.automaton, g, beta), false, false, std::nullopt};
  result.composite_ok = composite_matches(result.mate);
  result.bisim_ok = bisimilar(result.mate);

  if (small_enough_for_uniqueness(f)) {
    bool found_beta = false;
    auto count = count_factorizations(g, slice.rows, kUniquenessSearchLimit, [&](const auto& choice) {
      const Simulation mate = functional_mate(slice.automaton, g, choice);
      if (!composite_matches(mate) || !bisimilar(mate)) return false;
      if (choice == beta) found_beta = true;
      return true;
    });
    if (count) result.unique_ok = *count == 1 && found_beta;
  }
  return result;
}

}  // namespace spanauto
