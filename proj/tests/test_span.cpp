#include <doctest.h>

#include "spanauto/laws.hpp"
#include "spanauto/multiset.hpp"
#include "spanauto/powerset.hpp"
#include "spanauto/random.hpp"
#include "support.hpp"

using namespace spanauto;
using namespace testing;

namespace {

using Dense = std::vector<std::vector<Nat>>;

// Plain triple loop, kept free of the library's sparse code.
Dense dense_product(const Dense& m, const Dense& n, std::size_t cols) {
  Dense out(m.size(), std::vector<Nat>(cols, 0));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t k = 0; k < n.size(); ++k)
      for (std::size_t j = 0; j < cols; ++j) out[i][j] += m[i][k] * n[k][j];
  return out;
}

FinSet numbered(const std::string& id, std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i + 1));
  return FinSet(id, labels);
}

// Every matrix over rows x cols with entries <= max, as dense tables.
std::vector<Dense> all_matrices(std::size_t rows, std::size_t cols, Nat max) {
  std::vector<Dense> out;
  const std::size_t cells = rows * cols;
  std::vector<Nat> digits(cells, 0);
  for (;;) {
    Dense d(rows, std::vector<Nat>(cols));
    for (std::size_t c = 0; c < cells; ++c) d[c / cols][c % cols] = digits[c];
    out.push_back(d);
    std::size_t c = 0;
    while (c < cells && ++digits[c] > max) digits[c++] = 0;
    if (c == cells) break;
  }
  return out;
}

}  // namespace

TEST_CASE("compose_spans counts matching pairs") {
  const FinSet a = numbered("A", 2), b = numbered("B", 3), c = numbered("C", 3);
  const Span s = span_of(a, b, {{"1", "2"}});
  const Span t = span_of(b, c, {{"2", "3"}});
  const Span st = compose_spans(s, t);
  REQUIRE(st.size() == 1);
  CHECK(st.tokens()[0].left == 0);
  CHECK(st.tokens()[0].right == 2);

  const Span doubled = span_of(a, b, {{"1", "2"}, {"1", "2"}});
  const Span d2 = compose_spans(doubled, t);
  CHECK(d2.size() == 2);
  CHECK(to_matrix(d2).at(0, 2) == 2);

  CHECK(span_iso_eq(compose_spans(identity_span(a), doubled), doubled));
}

TEST_CASE("compose_spans labels composite tokens by pairs") {
  const FinSet a = numbered("A", 1);
  const Span s = span_of(a, a, {{"1", "1"}});
  CHECK(compose_spans(s, s).tokens()[0].label == "(t0,t0)");
}

TEST_CASE("compose_spans rejects mismatched middles") {
  const FinSet a = numbered("A", 2), b = numbered("B", 3);
  CHECK_THROWS_AS(compose_spans(span_of(a, a, {}), span_of(b, b, {})), Error);
}

TEST_CASE("identity_span") {
  CHECK(identity_span(FinSet("E", {})).size() == 0);
  const Span x = identity_span(FinSet("X", {"x"}));
  REQUIRE(x.size() == 1);
  CHECK(x.tokens()[0].left == 0);
  CHECK(x.tokens()[0].right == 0);
  const FinSet a = numbered("A", 3);
  CHECK(to_matrix(identity_span(a)) == identity_matrix(a));
}

TEST_CASE("dagger_span") {
  const FinSet a = numbered("A", 2);
  CHECK(span_iso_eq(dagger_span(identity_span(a)), identity_span(a)));
  const Span s = span_of(a, a, {{"1", "2"}});
  const Span d = dagger_span(s);
  CHECK(d.tokens()[0].left == 1);
  CHECK(d.tokens()[0].right == 0);
  const Span dd = dagger_span(d);
  CHECK(dd.tokens()[0].label == s.tokens()[0].label);
  CHECK(span_iso_eq(dd, s));
}

TEST_CASE("span_iso_eq") {
  const FinSet a = numbered("A", 2);
  const Span s = span_of(a, a, {{"1", "2"}, {"2", "2"}});
  const Span relabeled(a, a, {{"other", 1, 1}, {"name", 0, 1}});
  CHECK(span_iso_eq(s, relabeled));
  CHECK_FALSE(span_iso_eq(span_of(a, a, {{"1", "2"}}), span_of(a, a, {{"1", "2"}, {"1", "2"}})));
  CHECK_THROWS_AS(span_iso_eq(s, span_of(a, numbered("B", 3), {})), Error);
}

TEST_CASE("image forgets multiplicity") {
  const FinSet a = numbered("A", 2);
  CHECK(image(span_of(a, a, {{"1", "2"}, {"1", "2"}})) == rel_of_pairs(a, a, {{"1", "2"}}));
  CHECK(image(span_of(a, a, {})).pairs().empty());
}

TEST_CASE("compose_relations and dagger_relation") {
  const FinSet a = numbered("A", 3);
  const Relation r = rel_of_pairs(a, a, {{"1", "2"}, {"3", "1"}});
  CHECK(compose_relations(r, identity_relation(a)) == r);
  CHECK(compose_relations(rel_of_pairs(a, a, {{"1", "2"}}), rel_of_pairs(a, a, {{"2", "3"}})) ==
        rel_of_pairs(a, a, {{"1", "3"}}));
  const Relation rr = compose_relations(r, dagger_relation(r));
  for (const auto& [x, y] : r.pairs()) CHECK(rr.contains(x, x));
  CHECK(dagger_relation(dagger_relation(r)) == r);
  CHECK(dagger_relation(identity_relation(a)) == identity_relation(a));
  CHECK(dagger_relation(rel_of_pairs(a, a, {{"1", "2"}})) == rel_of_pairs(a, a, {{"2", "1"}}));
}

TEST_CASE("powerset_map") {
  const FinSet a = numbered("A", 2);
  const PowersetMap r = powerset_map(rel_of_pairs(a, a, {{"1", "1"}, {"1", "2"}}));
  CHECK(r.apply(SubsetMask{0b01}) == 0b11);
  CHECK(r.apply(SubsetMask{0}) == 0);
  CHECK(r.apply(std::vector<std::size_t>{0}) == std::vector<std::size_t>{0, 1});
  const auto table = r.table();
  CHECK(table == std::vector<SubsetMask>{0, 0b11, 0, 0b11});
}

TEST_CASE("powerset_map is functorial, exhaustively up to three elements") {
  for (std::size_t na = 0; na <= 3; ++na)
    for (std::size_t nb = 0; nb <= 3; ++nb)
      for (std::size_t nc = 0; nc <= 3; ++nc) {
        const FinSet a = numbered("A", na), b = numbered("B", nb), c = numbered("C", nc);
        // Relations as successor masks; the oracle composes masks directly.
        const std::size_t rcount = std::size_t{1} << (na * nb), qcount = std::size_t{1} << (nb * nc);
        bool ok = true;
        for (std::size_t rbits = 0; rbits < rcount && ok; ++rbits)
          for (std::size_t qbits = 0; qbits < qcount && ok; ++qbits) {
            std::vector<Relation::Pair> rp, qp;
            for (std::size_t i = 0; i < na * nb; ++i)
              if (rbits >> i & 1) rp.emplace_back(i / nb, i % nb);
            for (std::size_t i = 0; i < nb * nc; ++i)
              if (qbits >> i & 1) qp.emplace_back(i / nc, i % nc);
            const Relation r(a, b, rp), q(b, c, qp);
            const PowersetMap pr = powerset_map(r), pq = powerset_map(q),
                              prq = powerset_map(compose_relations(r, q));
            for (SubsetMask s = 0; s < (SubsetMask{1} << na); ++s) {
              SubsetMask mid = 0, end = 0;
              for (const auto& [x, y] : rp)
                if (s >> x & 1) mid |= SubsetMask{1} << y;
              for (const auto& [x, y] : qp)
                if (mid >> x & 1) end |= SubsetMask{1} << y;
              ok = ok && pr.apply(s) == mid && prq.apply(s) == end && pq.apply(pr.apply(s)) == end;
            }
          }
        CHECK(ok);
        const PowersetMap id = powerset_map(identity_relation(a));
        for (SubsetMask s = 0; s < (SubsetMask{1} << na); ++s) CHECK(id.apply(s) == s);
      }
}

TEST_CASE("to_matrix and from_matrix") {
  const FinSet xy("S", {"x", "y"});
  CHECK(to_matrix(identity_span(xy)) == NatMatrix::from_dense(xy, xy, {{1, 0}, {0, 1}}));
  const FinSet a = numbered("A", 2);
  const NatMatrix m = to_matrix(span_of(a, a, {{"1", "2"}, {"1", "2"}, {"2", "2"}}));
  CHECK(m.at(0, 1) == 2);
  CHECK(m.at(1, 1) == 1);
  CHECK(m.at(0, 0) == 0);

  const NatMatrix n = NatMatrix::from_dense(a, xy, {{0, 3}, {1, 2}});
  CHECK(to_matrix(from_matrix(n)) == n);
  CHECK(from_matrix(n).size() == 6);
  CHECK(from_matrix(NatMatrix(a, xy)).size() == 0);
  const Span s = span_of(a, a, {{"2", "1"}, {"1", "1"}, {"2", "1"}});
  CHECK(span_iso_eq(from_matrix(to_matrix(s)), s));
}

TEST_CASE("matrix_compose") {
  const FinSet one = numbered("I", 1);
  CHECK(matrix_compose(NatMatrix::from_dense(one, one, {{2}}), NatMatrix::from_dense(one, one, {{3}})).at(0, 0) ==
        6);
  const FinSet a = numbered("A", 2), b = numbered("B", 3);
  const NatMatrix m = NatMatrix::from_dense(a, b, {{1, 0, 2}, {0, 4, 1}});
  CHECK(matrix_compose(identity_matrix(a), m) == m);
  CHECK(matrix_compose(m, identity_matrix(b)) == m);
  CHECK_THROWS_AS(matrix_compose(m, m), Error);
  const Nat big = Nat{1} << 40;
  try {
    matrix_compose(NatMatrix::from_dense(one, one, {{big}}), NatMatrix::from_dense(one, one, {{big}}));
    FAIL("expected overflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::overflow);
  }
}

TEST_CASE("matrix_compose agrees with span composition, exhaustively on 2x2 blocks") {
  const FinSet a = numbered("A", 2), b = numbered("B", 2), c = numbered("C", 2);
  const auto all = all_matrices(2, 2, 2);
  std::size_t checked = 0;
  for (const Dense& x : all)
    for (const Dense& y : all) {
      const NatMatrix mx = NatMatrix::from_dense(a, b, x), my = NatMatrix::from_dense(b, c, y);
      const Dense expected = dense_product(x, y, 2);
      const Span composite = compose_spans(from_matrix(mx), from_matrix(my));
      REQUIRE(to_matrix(composite).dense() == expected);
      REQUIRE(matrix_compose(mx, my).dense() == expected);
      REQUIRE(image(composite) == compose_relations(image(from_matrix(mx)), image(from_matrix(my))));
      ++checked;
    }
  CHECK(checked == 81 * 81);
}

TEST_CASE("image functoriality on random three-element spans") {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const FinSet a = numbered("A", 3), b = numbered("B", 3), c = numbered("C", 3);
    const Span s = random_span(rng, a, b), t = random_span(rng, b, c);
    REQUIRE(image(compose_spans(s, t)) == compose_relations(image(s), image(t)));
  }
  CHECK(image(identity_span(numbered("A", 3))) == identity_relation(numbered("A", 3)));
}

TEST_CASE("pullback composition is associative up to iso") {
  // Exhaustive over 1 -> 2 -> 2 -> 1 with multiplicities <= 2.
  const FinSet a = numbered("A", 1), b = numbered("B", 2), c = numbered("C", 2), d = numbered("D", 1);
  const auto ab = all_matrices(1, 2, 2), bc = all_matrices(2, 2, 2), cd = all_matrices(2, 1, 2);
  bool ok = true;
  for (const Dense& x : ab)
    for (const Dense& y : bc)
      for (const Dense& z : cd) {
        const Span s = from_matrix(NatMatrix::from_dense(a, b, x));
        const Span t = from_matrix(NatMatrix::from_dense(b, c, y));
        const Span u = from_matrix(NatMatrix::from_dense(c, d, z));
        ok = ok && span_iso_eq(compose_spans(compose_spans(s, t), u), compose_spans(s, compose_spans(t, u)));
      }
  CHECK(ok);

  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const FinSet p = random_finset(rng, "P", 4), q = random_finset(rng, "Q", 4),
                 r = random_finset(rng, "R", 4), w = random_finset(rng, "W", 4);
    const Span s = random_span(rng, p, q), t = random_span(rng, q, r), u = random_span(rng, r, w);
    REQUIRE(span_iso_eq(compose_spans(compose_spans(s, t), u), compose_spans(s, compose_spans(t, u))));
  }
}

TEST_CASE("multiset unit, extend and flatten") {
  const FinSet x("X", {"x"});
  CHECK(multiset_unit(x, "x").counts() == std::vector<Nat>{1});
  CHECK_THROWS_AS(multiset_unit(x, "nope"), Error);

  const FinSet a = numbered("A", 2), xy("XY", {"x", "y"});
  const NatMatrix m = NatMatrix::from_dense(a, xy, {{2, 0}, {1, 1}});
  CHECK(multiset_extend(m, Multiset(a, {1, 1})).counts() == std::vector<Nat>{3, 1});
  CHECK(multiset_extend(m, Multiset(a)).is_zero());
  CHECK(multiset_extend(m, multiset_unit(a, 1)) == row_multiset(m, 1));
  const Multiset v(a, {2, 5});
  CHECK(multiset_extend(identity_matrix(a), v) == v);
  const Multiset w(a, {1, 3});
  CHECK(multiset_extend(m, v + w) == multiset_extend(m, v) + multiset_extend(m, w));

  CHECK(multiset_flatten(nested_unit(multiset_unit(x, 0))) == multiset_unit(x, 0));
  CHECK(multiset_flatten(NestedMultiset(x, {{Multiset(x, {2}), 3}})).counts() == std::vector<Nat>{6});
  const Multiset fv = multiset_extend(m, v);
  CHECK(multiset_flatten(nested_unit(fv)) == fv);
  CHECK_THROWS_AS(multiset_extend(m, Multiset(xy)), Error);
}

TEST_CASE("rel_unit and rel_counit") {
  const FinSet one = numbered("A", 1);
  const Relation counit = rel_counit(one);
  REQUIRE(counit.pairs().size() == 1);
  CHECK(counit.dom()[counit.pairs()[0].first] == "{1}");
  CHECK(rel_unit(FinSet("E", {})).pairs().empty());
  CHECK(rel_unit(one).pairs().size() == 1);

  for (std::size_t n = 0; n <= 4; ++n) {
    const FinSet a = numbered("A", n);
    CHECK(compose_relations(rel_unit(a), rel_counit(a)) == identity_relation(a));
    const auto order = canonical_subsets(n);
    const PowersetMap lift = powerset_map(rel_counit(a));
    for (std::size_t s = 0; s < order.size(); ++s)
      CHECK(lift.apply(std::vector<std::size_t>{s}) == mask_members(order[s]));
  }
}

TEST_CASE("canonical subset order") {
  CHECK(canonical_subsets(3) == std::vector<SubsetMask>{0, 1, 2, 4, 3, 5, 6, 7});
  CHECK_THROWS_AS(canonical_subsets(21), Error);
  const FinSet a = numbered("A", 2);
  CHECK(powerset_finset(a, "P").elements() == std::vector<std::string>{"{}", "{1}", "{2}", "{1,2}"});
}

TEST_CASE("image_unit") {
  const FinSet a = numbered("A", 2);
  const Span simple = span_of(a, a, {{"1", "2"}, {"2", "1"}});
  CHECK(image_unit(simple).is_iso());
  const SpanMorphism parallel = image_unit(span_of(a, a, {{"1", "2"}, {"1", "2"}}));
  CHECK_FALSE(parallel.is_iso());
  CHECK(parallel.map()[0] == parallel.map()[1]);
  const Span s = span_of(a, a, {{"1", "1"}, {"2", "1"}, {"1", "1"}});
  const SpanMorphism eta = image_unit(s);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(eta.target().tokens()[eta.map()[i]].left == s.tokens()[i].left);
    CHECK(eta.target().tokens()[eta.map()[i]].right == s.tokens()[i].right);
  }
}

TEST_CASE("span_morphism_search") {
  const FinSet a = numbered("A", 2);
  const Span s = span_of(a, a, {{"1", "2"}, {"2", "2"}});
  auto id = span_morphism_search(s, s, true);
  REQUIRE(id);
  CHECK(id->map() == std::vector<std::size_t>{0, 1});
  CHECK_FALSE(span_morphism_search(span_of(a, a, {{"1", "2"}}), span_of(a, a, {}), false));
  const Span one = span_of(a, a, {{"1", "2"}}), two = span_of(a, a, {{"1", "2"}, {"1", "2"}});
  CHECK(span_morphism_search(one, two, false));
  CHECK_FALSE(span_morphism_search(one, two, true));
  CHECK(span_morphism_search(two, one, false));
}

TEST_CASE("SpanMorphism rejects maps that break a leg") {
  const FinSet a = numbered("A", 2);
  CHECK_THROWS_AS(SpanMorphism(span_of(a, a, {{"1", "2"}}), span_of(a, a, {{"2", "2"}}), {0}), Error);
}

TEST_CASE("law suites pass and are reproducible") {
  const auto first = run_all_laws(0, 200);
  const auto again = run_all_laws(0, 200);
  REQUIRE(first.size() == law_names().size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK_MESSAGE(first[i].ok, first[i].name << ": " << first[i].counterexample);
    CHECK(first[i].cases == 200);
    CHECK(again[i].ok == first[i].ok);
  }
  CHECK_THROWS_AS(run_law("no.such.law", 0, 1), Error);
}
