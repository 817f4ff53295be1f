#include <doctest.h>

#include <algorithm>

#include "spanauto/io.hpp"
#include "spanauto/random.hpp"
#include "spanauto/simulation.hpp"
#include "support.hpp"

using namespace spanauto;
using namespace testing;

namespace {

Simulation identity_simulation(const SpanAutomaton& a, Strength s = Strength::pseudo) {
  Simulation sim{a, a, {}, s};
  for (const FinSet& f : a.fibers) sim.components.push_back(identity_span(f));
  return sim;
}

bool support_le(const NatMatrix& x, const NatMatrix& y) {
  for (std::size_t i = 0; i < x.dom().size(); ++i)
    for (const auto& [j, n] : x.row(i))
      if (y.at(i, j) == 0) return false;
  return true;
}

// A copy of `a` with every fiber permuted and relabelled, and the
// simulation from `a` to it whose components are the permutations.
Simulation relabeling(const SpanAutomaton& a, Rng& rng) {
  SpanAutomaton b = a;
  std::vector<NatMatrix> perm;
  std::vector<std::vector<std::size_t>> inverse;
  for (std::size_t n = 0; n < a.fibers.size(); ++n) {
    const FinSet& fib = a.fibers[n];
    std::vector<std::size_t> pi(fib.size());
    for (std::size_t i = 0; i < pi.size(); ++i) pi[i] = i;
    std::shuffle(pi.begin(), pi.end(), rng.engine());
    std::vector<std::string> labels;
    std::vector<NatMatrix::Row> rows;
    std::vector<std::size_t> inv(pi.size());
    for (std::size_t i = 0; i < pi.size(); ++i) {
      labels.push_back("r" + fib[pi[i]]);
      rows.push_back({{pi[i], 1}});
      inv[pi[i]] = i;
    }
    b.fibers[n] = FinSet("P(" + fib.id() + ")", labels);
    perm.emplace_back(b.fibers[n], fib, rows);
    inverse.push_back(inv);
  }
  for (std::size_t e = 0; e < a.base.edges().size(); ++e) {
    const Edge& edge = a.base.edges()[e];
    b.transitions[e] = from_matrix(matrix_compose(
        matrix_compose(perm[edge.src], to_matrix(a.transitions[e])), transpose(perm[edge.dst])));
  }
  const auto move = [&](StateRef s) { return StateRef{s.node, inverse[s.node][s.index]}; };
  b.initial = move(a.initial);
  for (StateRef& s : b.finals) s = move(s);
  std::sort(b.finals.begin(), b.finals.end());
  Simulation sim{a, b, {}, Strength::pseudo};
  for (const NatMatrix& p : perm) sim.components.push_back(from_matrix(p));
  return sim;
}

}  // namespace

TEST_CASE("identity simulation passes every strength") {
  const Simulation id = identity_simulation(example2());
  CHECK(check_rel_simulation(id).ok);
  CHECK(check_span_simulation(id, Strength::pseudo).ok);
  CHECK(check_span_simulation(id, Strength::lax).ok);
  const CheckResult r = check_span_simulation(id, Strength::pseudo, std::nullopt, true);
  REQUIRE(r.witnesses.size() == 5);
  for (const auto& w : r.witnesses) CHECK(w.is_iso());
  CHECK(check_bisimulation(id));
}

TEST_CASE("swapping Example-1 states breaks the a-square") {
  Simulation sim = identity_simulation(example1(), Strength::strict);
  const FinSet& q = sim.source.fibers[0];
  sim.components[0] = span_of(q, q, {{"1", "2"}, {"2", "1"}});
  const CheckResult r = check_rel_simulation(sim);
  CHECK_FALSE(r.ok);
  REQUIRE(r.failing_edge);
  CHECK(*r.failing_edge == 0);
  CHECK(r.detail.find("edge 'a'") != std::string::npos);
}

TEST_CASE("first failure is reported in edge-id order") {
  // Edge ids out of declaration order: "z" is declared first.
  SpanAutomaton a;
  a.base = BaseGraph({"n"}, {{"z", "z", 0, 0}, {"m", "m", 0, 0}});
  const FinSet q("n", {"1", "2"});
  a.fibers = {q};
  a.transitions = {span_of(q, q, {{"1", "2"}}), span_of(q, q, {{"1", "2"}})};
  a.initial = {0, 0};
  Simulation sim = identity_simulation(a, Strength::strict);
  sim.components[0] = span_of(q, q, {{"1", "2"}, {"2", "1"}});
  const CheckResult r = check_rel_simulation(sim);
  REQUIRE(r.failing_edge);
  CHECK(*r.failing_edge == 1);
}

TEST_CASE("canonical det simulation on Example-1") {
  const SpanAutomaton a = example1();
  const Simulation c = canonical_det_simulation(a);
  const FinSet& subsets = c.target.fibers[0];
  CHECK(image(c.components[0]) == rel_of_pairs(subsets, a.fibers[0],
                                               {{"{1}", "1"}, {"{2}", "2"}, {"{1,2}", "1"}, {"{1,2}", "2"}}));
  CHECK(c.strength == Strength::lax);
  CHECK(check_rel_simulation(c).ok);
  CHECK(check_span_simulation(c, Strength::lax).ok);
  const CheckResult pseudo = check_span_simulation(c, Strength::pseudo);
  CHECK_FALSE(pseudo.ok);
  CHECK(*pseudo.failing_edge == 1);
  // The initial subset relates to q0 only.
  const auto succ = image(c.components[0]).successors(c.target.initial.index);
  CHECK(succ == std::vector<std::size_t>{a.initial.index});
  // The converse of membership is not natural here.
  CHECK_FALSE(check_bisimulation(c));
}

TEST_CASE("a span automaton against its image: lax always, pseudo only without multiplicity") {
  SpanAutomaton a = example1();
  Simulation sim{a, to_span(rel_of(a)), {identity_span(a.fibers[0])}, Strength::lax};
  CHECK(check_span_simulation(sim, Strength::lax).ok);
  CHECK(check_span_simulation(sim, Strength::pseudo).ok);

  const FinSet& q = a.fibers[0];
  a.transitions[0] = span_of(q, q, {{"1", "1"}, {"1", "2"}, {"1", "2"}});
  sim = Simulation{a, to_span(rel_of(a)), {identity_span(q)}, Strength::lax};
  CHECK(check_span_simulation(sim, Strength::lax).ok);
  const CheckResult r = check_span_simulation(sim, Strength::lax, std::nullopt, true);
  REQUIRE(r.witnesses.size() == 2);
  CHECK_FALSE(r.witnesses[0].is_iso());
  CHECK_FALSE(check_span_simulation(sim, Strength::pseudo).ok);
}

TEST_CASE("lax orientation is composite-through-source into composite-through-target") {
  // The target has a transition the source lacks: lax holds one way only.
  const SpanAutomaton big = example1();
  SpanAutomaton small = big;
  const FinSet& q = big.fibers[0];
  small.transitions[0] = span_of(q, q, {{"1", "1"}});
  const Simulation into_big{small, big, {identity_span(q)}, Strength::lax};
  const Simulation into_small{big, small, {identity_span(q)}, Strength::lax};
  CHECK(check_span_simulation(into_big, Strength::lax).ok);
  CHECK_FALSE(check_span_simulation(into_small, Strength::lax).ok);
}

TEST_CASE("naturality on edges extends to words") {
  Rng rng(41);
  for (int i = 0; i < 25; ++i) {
    const SpanAutomaton a = random_span_automaton(rng);
    const Simulation c = canonical_det_simulation(a);
    REQUIRE(check_span_simulation(c, Strength::lax).ok);
    for (std::size_t n = 0; n < a.fibers.size(); ++n)
      for (const Word& w : enumerate_words(a.base, n, 4)) {
        const std::size_t m = word_end(a.base, w);
        const NatMatrix left = matrix_compose(to_matrix(c.components[n]), run_word_span(c.source, w));
        const NatMatrix right = matrix_compose(run_word_span(c.target, w), to_matrix(c.components[m]));
        REQUIRE(support_le(left, right));
      }
  }
}

TEST_CASE("dagger of a pseudo simulation with bijective components is pseudo") {
  Rng rng(43);
  for (int i = 0; i < 40; ++i) {
    const SpanAutomaton f = random_span_automaton(rng, AutomatonLimits{});
    const Simulation alpha = relabeling(f, rng);
    REQUIRE(check_span_simulation(alpha, Strength::pseudo).ok);
    CHECK(check_span_simulation(dagger(alpha), Strength::pseudo).ok);
    CHECK(check_bisimulation(alpha));
  }
}

TEST_CASE("dagger of a pseudo simulation need not be a simulation") {
  // Example-1 into its reachable multiset states. In the dagger, F-state 2
  // has no a-successor while {(0,1)} steps to (0,0).
  const Simulation alpha = load_simulation(fixture("sim_example1_mdet.json"));
  REQUIRE(check_span_simulation(alpha, Strength::pseudo).ok);
  const CheckResult back = check_span_simulation(dagger(alpha), Strength::pseudo);
  CHECK_FALSE(back.ok);
  REQUIRE(back.failing_edge);
  CHECK(alpha.source.base.edges()[*back.failing_edge].id == "a");
  CHECK_FALSE(check_span_simulation(dagger(alpha), Strength::lax).ok);
  CHECK_FALSE(check_bisimulation(alpha));
}

TEST_CASE("bisimulation is symmetric under dagger") {
  Rng rng(44);
  AutomatonLimits limits;
  limits.max_nodes = 2;
  limits.max_states = 3;
  for (int i = 0; i < 15; ++i) {
    const FactorInstance inst = random_mdet_factor_instance(rng, limits);
    REQUIRE(check_span_simulation(inst.alpha, Strength::pseudo).ok);
    CHECK(check_bisimulation(inst.alpha) == check_bisimulation(dagger(inst.alpha)));
  }
}

TEST_CASE("canonical mdet simulation on Example-1") {
  const BoundedSimulation b = canonical_mdet_simulation(example1(), 4);
  CHECK(b.pseudo.ok);
  CHECK_FALSE(b.truncated);
  const NatMatrix alpha = to_matrix(b.simulation.components[0]);
  const FinSet& states = b.simulation.target.fibers[0];
  const std::size_t e1 = states.index_of("(1,0)"), both = states.index_of("(1,1)");
  CHECK(alpha.row(e1) == NatMatrix::Row{{0, 1}});
  CHECK(alpha.row(both) == NatMatrix::Row{{0, 1}, {1, 1}});
  CHECK(b.simulation.target.state_label(b.simulation.target.initial) == "(1,0)");
  // Edge a at e1: both composites have row (1,1).
  const NatMatrix left = matrix_compose(alpha, to_matrix(b.simulation.source.transitions[0]));
  const NatMatrix right = matrix_compose(to_matrix(b.simulation.target.transitions[0]), alpha);
  CHECK(left.row(e1) == NatMatrix::Row{{0, 1}, {1, 1}});
  CHECK(right.row(e1) == left.row(e1));
}

TEST_CASE("compose_simulations with identities") {
  const SpanAutomaton a = example1();
  const Simulation c = canonical_det_simulation(a);
  const Simulation left = compose_simulations(identity_simulation(a), c);
  const Simulation right = compose_simulations(c, identity_simulation(c.target));
  for (std::size_t n = 0; n < c.components.size(); ++n) {
    CHECK(span_iso_eq(left.components[n], c.components[n]));
    CHECK(span_iso_eq(right.components[n], c.components[n]));
  }
}

TEST_CASE("simulation validation and base mismatch") {
  Simulation sim = identity_simulation(example1());
  sim.components[0] = identity_span(FinSet("x", {"p"}));
  CHECK(validate(sim).size() == 2);
  Simulation mixed{example1(), example2(), {}, Strength::lax};
  try {
    check_span_simulation(mixed, Strength::lax);
    FAIL("expected mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::mismatch);
  }
}

TEST_CASE("factor_det through the canonical simulation itself") {
  const SpanAutomaton a = example1();
  const Simulation c = canonical_det_simulation(a);
  const FactorizationResult r = factor_det(c, det_span(a));
  CHECK(r.composite_ok);
  CHECK(r.bisim_ok);
  REQUIRE(r.unique_ok);
  CHECK(*r.unique_ok);
  // The mate is the identity graph on Det(F).
  const Relation mate = image(r.mate.components[0]);
  for (const auto& [x, s] : mate.pairs()) CHECK(mate.dom()[x] == mate.cod()[s]);
  CHECK(mate.pairs().size() == 4);
}

TEST_CASE("factor_det on a one-state target") {
  SpanAutomaton f;
  f.base = BaseGraph({"n"}, {{"e", "e", 0, 0}});
  const FinSet q("n", {"1", "2"});
  f.fibers = {q};
  f.transitions = {span_of(q, q, {{"1", "2"}, {"2", "1"}})};
  f.initial = {0, 0};
  f.finals = {{0, 1}};
  DetAutomaton g;
  g.base = f.base;
  g.fibers = {FinSet("n", {"x"})};
  g.transitions = {{0}};
  g.initial = {0, 0};
  g.finals = {{0, 0}};
  Simulation alpha{f, to_span(g), {span_of(g.fibers[0], q, {{"x", "1"}, {"x", "2"}})}, Strength::strict};
  const FactorizationResult r = factor_det(alpha, g);
  CHECK(r.composite_ok);
  CHECK(r.bisim_ok);
  REQUIRE(r.unique_ok);
  CHECK(*r.unique_ok);
  const Relation mate = image(r.mate.components[0]);
  REQUIRE(mate.pairs().size() == 1);
  CHECK(mate.cod()[mate.pairs()[0].second] == "{1,2}");

  alpha.components[0] = span_of(g.fibers[0], q, {{"x", "1"}});
  try {
    factor_det(alpha, g);
    FAIL("expected not_natural");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_natural);
  }
}

TEST_CASE("factor_mdet with identity on a deterministic automaton") {
  const DetAutomaton d = prune_reachable(det_span(example2()));
  const SpanAutomaton f = to_span(d);
  const Simulation alpha = identity_simulation(f, Strength::pseudo);
  const FactorizationResult r = factor_mdet(alpha, d);
  CHECK(r.composite_ok);
  CHECK(r.bisim_ok);
  for (std::size_t n = 0; n < d.fibers.size(); ++n) {
    const Relation mate = image(r.mate.components[n]);
    REQUIRE(mate.pairs().size() == d.fibers[n].size());
    for (const auto& [x, s] : mate.pairs()) {
      std::vector<Nat> unit(d.fibers[n].size(), 0);
      unit[x] = 1;
      const std::string label = Multiset(d.fibers[n], unit).tuple_label();
      CHECK(mate.cod()[s] == (d.base.nodes().size() > 1 ? d.base.nodes()[n] + ":" : "") + label);
    }
  }
}

TEST_CASE("factor_mdet needs a pseudo simulation") {
  const SpanAutomaton a = example1();
  const Simulation c = canonical_det_simulation(a);
  CHECK_THROWS_AS(factor_mdet(c, det_span(a)), Error);
  Simulation declared = c;
  declared.strength = Strength::pseudo;
  try {
    factor_mdet(declared, det_span(a));
    FAIL("expected not_natural");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_natural);
  }
  // The multiplicity readout of this alpha is the 0/1 membership table.
  const NatMatrix m = to_matrix(c.components[0]);
  CHECK(row_multiset(m, c.target.fibers[0].index_of("{1,2}")).counts() == std::vector<Nat>{1, 1});
  CHECK(row_multiset(m, c.target.fibers[0].index_of("{}")).counts() == std::vector<Nat>{0, 0});
}

TEST_CASE("factor_mdet records multiplicity two") {
  const Simulation alpha = load_simulation(fixture("sim_example1_mdet.json"));
  const FactorizationResult r = factor_mdet(alpha, as_det(alpha.target));
  CHECK(r.composite_ok);
  CHECK(r.bisim_ok);
  REQUIRE(r.unique_ok);
  CHECK(*r.unique_ok);
  const Relation mate = image(r.mate.components[0]);
  const std::size_t x = mate.dom().index_of("(0,2)");
  CHECK(mate.successors(x).size() == 1);
  CHECK(mate.cod()[mate.successors(x)[0]] == "(0,2)");
}

TEST_CASE("factorization on random constructed instances") {
  Rng rng(47);
  AutomatonLimits limits;
  limits.max_nodes = 2;
  limits.max_states = 3;
  for (int i = 0; i < 10; ++i) {
    const FactorInstance det_inst = random_det_factor_instance(rng, limits);
    const FactorizationResult rd = factor_det(det_inst.alpha, det_inst.g);
    CHECK(rd.composite_ok);
    CHECK(rd.bisim_ok);
    const FactorInstance m_inst = random_mdet_factor_instance(rng, limits);
    const FactorizationResult rm = factor_mdet(m_inst.alpha, m_inst.g);
    CHECK(rm.composite_ok);
    CHECK(rm.bisim_ok);
  }
}
