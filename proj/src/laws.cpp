#include "spanauto/laws.hpp"

#include <functional>
#include <optional>
#include <sstream>

#include "spanauto/powerset.hpp"
#include "spanauto/random.hpp"

namespace spanauto {

namespace {

std::string text(const FinSet& a) {
  std::string out = a.id() + "{";
  for (std::size_t i = 0; i < a.size(); ++i) out += (i ? "," : "") + a[i];
  return out + "}";
}

std::string text(const NatMatrix& m) {
  std::ostringstream os;
  os << text(m.dom()) << " -> " << text(m.cod()) << " [";
  const auto d = m.dense();
  for (std::size_t i = 0; i < d.size(); ++i) {
    os << (i ? "; " : "");
    for (std::size_t j = 0; j < d[i].size(); ++j) os << (j ? " " : "") << d[i][j];
  }
  os << "]";
  return os.str();
}

std::string text(const Span& s) { return "span " + text(to_matrix(s)); }

std::string text(const Relation& r) {
  std::string out = "rel " + text(r.dom()) + " -> " + text(r.cod()) + " {";
  for (std::size_t i = 0; i < r.pairs().size(); ++i)
    out += (i ? "," : "") + r.dom()[r.pairs()[i].first] + "~" + r.cod()[r.pairs()[i].second];
  return out + "}";
}

std::string text(const Multiset& v) { return "multiset over " + text(v.base()) + " " + v.tuple_label(); }

std::string lines(std::initializer_list<std::string> parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : "\n  ") + p;
  return out;
}

/// One randomized case: returns a description of the instance when it fails.
using Case = std::function<std::optional<std::string>(Rng&, std::size_t max_size)>;

struct Law {
  const char* name;
  Case check;
};

FinSet set(Rng& rng, const char* id, std::size_t max) { return random_finset(rng, id, max); }

const std::vector<Law>& laws() {
  static const std::vector<Law> table = {
      {"monad.unit-extension",
       [](Rng& rng, std::size_t k) -> std::optional<std::string> {
         const FinSet a = set(rng, "A", k), b = set(rng, "B", k);
         if (a.empty()) return std::nullopt;
         const NatMatrix m = random_matrix(rng, a, b);
         const std::size_t x = rng.between(0, a.size() - 1);
         if (multiset_extend(m, multiset_unit(a, x)) == row_multiset(m, x)) return std::nullopt;
         return lines({text(m), "element " + a[x]});
       }},
      {"monad.extend-unit-identity",
       [](Rng& rng, std::size_t k) -> std::optional<std::string> {
         const FinSet a = set(rng, "A", k);
         const Multiset v = random_multiset(rng, a);
         if (multiset_extend(identity_matrix(a), v) == v) return std::nullopt;
         return text(v);
       }},
      {"monad.associativity",
       [](Rng& rng, std::size_t k) -> std::optional<std::string> {
         const FinSet a = set(rng, "A", k), b = set(rng, "B", k), c = set(rng, "C", k);
         const NatMatrix m = random_matrix(rng, a, b), n = random_matrix(rng, b, c);
         const Multiset v = random_multiset(rng, a);
         if (multiset_extend(n, multiset_extend(m, v)) == multiset_extend(matrix_compose(m, n), v))
           return std::nullopt;
         return lines({text(m), text(n), text(v)});
       }},
      {"monad.flatten-square",
       [](Rng& rng, std::size_t k) -> std::optional<std::string> {
         const FinSet a = set(rng, "A", k), b = set(rng, "B", k);
         const NatMatrix f = random_matrix(rng, a, b);
         const Multiset v = random_multiset(rng, a);
         const Multiset fv = multiset_extend(f, v);
         if (multiset_flatten(nested_unit(fv)) == fv) return std::nullopt;
         return lines({text(f), text(v)});
       }},
      {"kleisli.counit-triangle",
       [](Rng& rng, std::size_t k) -> std::optional<std::string> {
         const FinSet a = set(rng, "A", std::min<std::size_t>(k, 4));
         const SubsetMask s = random_subset(rng, a.size());
         const auto rank = canonical_subset_rank(a.size());
         const PowersetMap r = powerset_map(rel_counit(a));
         if (r.apply(std::vector<std::size_t>{rank[s]}) == mask_members(s)) return std::nullopt;
         return lines({text(a), "subset " + subset_label(a, s)});
       }},
      {"kleisli.unit-triangle",
       [](Rng& rng, std::size_t k) -> std::optional<std::string> {
         const FinSet a = set(rng, "A", std::min<std::size_t>(k, 4));
         if (compose_relations(rel_unit(a), rel_counit(a)) == identity_relation(a))
           return std::nullopt;
         return text(a);
       }},
      {"local-equivalence.matrix-roundtrip",
       [](Rng& rng, std::size_t k) -> std::optional<std::string> {
         const FinSet a = set(rng, "A", k), b = set(rng, "B", k);
         const NatMatrix m = random_matrix(rng, a, b);
         if (to_matrix(from_matrix(m)) == m) return std::nullopt;
         return text(m);
       }},
      {"local-equivalence.span-roundtrip",
       [](Rng& rng, std::size_t k) -> std::optional<std::string> {
         const FinSet a = set(rng, "A", k), b = set(rng, "B", k);
         const Span s = random_span(rng, a, b);
         if (span_iso_eq(from_matrix(to_matrix(s)), s)) return std::nullopt;
         return text(s);
       }},
      {"functor.matrix",
       [](Rng& rng, std::size_t k) -> std::optional<std::string> {
         const FinSet a = set(rng, "A", k), b = set(rng, "B", k), c = set(rng, "C", k);
         const Span s = random_span(rng, a, b), t = random_span(rng, b, c);
         if (to_matrix(compose_spans(s, t)) == matrix_compose(to_matrix(s), to_matrix(t)) &&
             to_matrix(identity_span(a)) == identity_matrix(a))
           return std::nullopt;
         return lines({text(s), text(t)});
       }},
      {"functor.image",
       [](Rng& rng, std::size_t k) -> std::optional<std::string> {
         const FinSet a = set(rng, "A", k), b = set(rng, "B", k), c = set(rng, "C", k);
         const Span s = random_span(rng, a, b), t = random_span(rng, b, c);
         if (image(compose_spans(s, t)) == compose_relations(image(s), image(t)) &&
             image(identity_span(a)) == identity_relation(a))
           return std::nullopt;
         return lines({text(s), text(t)});
       }},
      {"functor.powerset",
       [](Rng& rng, std::size_t k) -> std::optional<std::string> {
         const FinSet a = set(rng, "A", k), b = set(rng, "B", k), c = set(rng, "C", k);
         const Relation r = random_relation(rng, a, b), q = random_relation(rng, b, c);
         const PowersetMap rq = powerset_map(compose_relations(r, q));
         const PowersetMap pr = powerset_map(r), pq = powerset_map(q);
         const PowersetMap id = powerset_map(identity_relation(a));
         for (SubsetMask s = 0; s < (SubsetMask{1} << a.size()); ++s)
           if (rq.apply(s) != pq.apply(pr.apply(s)) || id.apply(s) != s)
             return lines({text(r), text(q), "subset " + subset_label(a, s)});
         return std::nullopt;
       }},
      {"dagger.span",
       [](Rng& rng, std::size_t k) -> std::optional<std::string> {
         const FinSet a = set(rng, "A", k), b = set(rng, "B", k), c = set(rng, "C", k);
         const Span s = random_span(rng, a, b), t = random_span(rng, b, c);
         if (span_iso_eq(dagger_span(dagger_span(s)), s) &&
             span_iso_eq(dagger_span(compose_spans(s, t)),
                         compose_spans(dagger_span(t), dagger_span(s))))
           return std::nullopt;
         return lines({text(s), text(t)});
       }},
      {"dagger.relation",
       [](Rng& rng, std::size_t k) -> std::optional<std::string> {
         const FinSet a = set(rng, "A", k), b = set(rng, "B", k), c = set(rng, "C", k);
         const Relation r = random_relation(rng, a, b), q = random_relation(rng, b, c);
         if (dagger_relation(dagger_relation(r)) == r &&
             dagger_relation(compose_relations(r, q)) ==
                 compose_relations(dagger_relation(q), dagger_relation(r)))
           return std::nullopt;
         return lines({text(r), text(q)});
       }},
      {"pullback.associativity",
       [](Rng& rng, std::size_t k) -> std::optional<std::string> {
         const FinSet a = set(rng, "A", k), b = set(rng, "B", k), c = set(rng, "C", k),
                      d = set(rng, "D", k);
         const Span s = random_span(rng, a, b), t = random_span(rng, b, c), u = random_span(rng, c, d);
         if (span_iso_eq(compose_spans(compose_spans(s, t), u), compose_spans(s, compose_spans(t, u))))
           return std::nullopt;
         return lines({text(s), text(t), text(u)});
       }},
      {"image-unit.valid",
       [](Rng& rng, std::size_t k) -> std::optional<std::string> {
         const FinSet a = set(rng, "A", k), b = set(rng, "B", k);
         const Span s = random_span(rng, a, b);
         const SpanMorphism eta = image_unit(s);
         bool simple = true;
         const NatMatrix m = to_matrix(s);
         for (const auto& row : m.rows())
           for (const auto& [j, n] : row) simple = simple && n <= 1;
         if (eta.is_iso() == simple) return std::nullopt;
         return text(s);
       }},
  };
  return table;
}

std::uint64_t suite_seed(std::uint64_t seed, const std::string& name) {
  // FNV-1a over the name, mixed with the user seed.
  std::uint64_t h = 1469598103934665603ULL ^ seed;
  for (unsigned char c : name) h = (h ^ c) * 1099511628211ULL;
  return h;
}

}  // namespace

std::vector<std::string> law_names() {
  std::vector<std::string> out;
  for (const Law& l : laws()) out.push_back(l.name);
  return out;
}

LawReport run_law(const std::string& name, std::uint64_t seed, std::size_t cases,
                  std::size_t max_size) {
  for (const Law& law : laws()) {
    if (name != law.name) continue;
    LawReport report{name, 0, true, {}};
    Rng rng(suite_seed(seed, name));
    for (std::size_t i = 0; i < cases; ++i) {
      ++report.cases;
      auto failure = law.check(rng, max_size);
      if (!failure) continue;
      report.ok = false;
      report.counterexample = *failure;
      // Shrink by searching the same law at smaller size bounds.
      for (std::size_t k = 0; k < max_size; ++k) {
        Rng shrink(suite_seed(seed + k + 1, name));
        for (std::size_t j = 0; j < 200; ++j)
          if (auto smaller = law.check(shrink, k)) {
            report.counterexample = *smaller;
            return report;
          }
      }
      return report;
    }
    return report;
  }
  throw Error(ErrorCode::input, "unknown law suite '" + name + "'");
}

std::vector<LawReport> run_all_laws(std::uint64_t seed, std::size_t cases, std::size_t max_size) {
  std::vector<LawReport> out;
  for (const auto& name : law_names()) out.push_back(run_law(name, seed, cases, max_size));
  return out;
}

}  // namespace spanauto
