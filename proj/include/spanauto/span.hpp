#pragma once

// Morphism calculi over finite sets: spans (with multiplicity), relations,
// and natural-number matrices, plus the functors between them.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spanauto/error.hpp"
#include "spanauto/finset.hpp"

namespace spanauto {

/// One apex element of a span with its two feet (indices into dom/cod).
struct Token {
  std::string label;
  std::size_t left = 0;
  std::size_t right = 0;
};

/// A span dom <- apex -> cod. Token labels are pairwise distinct.
class Span {
 public:
  Span(FinSet dom, FinSet cod, std::vector<Token> tokens);

  const FinSet& dom() const { return dom_; }
  const FinSet& cod() const { return cod_; }
  const std::vector<Token>& tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }

 private:
  FinSet dom_;
  FinSet cod_;
  std::vector<Token> tokens_;
};

/// A subset of dom x cod, kept sorted and duplicate-free.
class Relation {
 public:
  using Pair = std::pair<std::size_t, std::size_t>;

  Relation(FinSet dom, FinSet cod, std::vector<Pair> pairs = {});

  const FinSet& dom() const { return dom_; }
  const FinSet& cod() const { return cod_; }
  const std::vector<Pair>& pairs() const { return pairs_; }
  bool contains(std::size_t a, std::size_t b) const;
  /// Elements of cod related to a, ascending.
  std::vector<std::size_t> successors(std::size_t a) const;

  friend bool operator==(const Relation& a, const Relation& b);

 private:
  FinSet dom_;
  FinSet cod_;
  std::vector<Pair> pairs_;
};

/// Sparse natural-number matrix dom x cod; a Kleisli morphism dom -> N^cod.
class NatMatrix {
 public:
  /// (column, count) entries, sorted by column, no zero counts.
  using Row = std::vector<std::pair<std::size_t, Nat>>;

  NatMatrix(FinSet dom, FinSet cod);
  /// Rows may be unsorted and contain repeated columns (summed) or zeros.
  NatMatrix(FinSet dom, FinSet cod, std::vector<Row> rows);

  static NatMatrix from_dense(FinSet dom, FinSet cod,
                              const std::vector<std::vector<Nat>>& entries);

  const FinSet& dom() const { return dom_; }
  const FinSet& cod() const { return cod_; }
  const Row& row(std::size_t i) const { return rows_[i]; }
  const std::vector<Row>& rows() const { return rows_; }
  Nat at(std::size_t i, std::size_t j) const;
  std::vector<std::vector<Nat>> dense() const;
  bool is_zero() const;

  friend bool operator==(const NatMatrix& a, const NatMatrix& b);

 private:
  FinSet dom_;
  FinSet cod_;
  std::vector<Row> rows_;
};

/// A map of apexes commuting with both legs (a 2-cell of Span).
class SpanMorphism {
 public:
  SpanMorphism(Span source, Span target, std::vector<std::size_t> map);

  const Span& source() const { return source_; }
  const Span& target() const { return target_; }
  const std::vector<std::size_t>& map() const { return map_; }
  bool is_iso() const;

 private:
  Span source_;
  Span target_;
  std::vector<std::size_t> map_;
};

Span identity_span(const FinSet& a);
/// Pullback composite, diagrammatic order: s : A -> B, then t : B -> C.
Span compose_spans(const Span& s, const Span& t);
Span dagger_span(const Span& s);
/// Equality up to apex isomorphism. Throws on foot-set mismatch.
bool span_iso_eq(const Span& s, const Span& t);

Relation identity_relation(const FinSet& a);
Relation compose_relations(const Relation& r, const Relation& q);
Relation dagger_relation(const Relation& r);
Relation function_graph(const FinSet& dom, const FinSet& cod,
                        const std::vector<std::size_t>& f);
/// True iff every dom element has exactly one successor.
bool is_total_function(const Relation& r);

/// The image functor: forget multiplicities.
Relation image(const Span& s);
/// The inclusion of relations into spans, one token per pair.
Span from_relation(const Relation& r);

NatMatrix identity_matrix(const FinSet& a);
NatMatrix to_matrix(const Span& s);
Span from_matrix(const NatMatrix& m);
/// Checked matrix product, diagrammatic order.
NatMatrix matrix_compose(const NatMatrix& m, const NatMatrix& n);
NatMatrix transpose(const NatMatrix& m);
/// Pairs with nonzero count.
Relation support(const NatMatrix& m);

/// Morphism from s to the span of its image; tokens go to their feet pair.
SpanMorphism image_unit(const Span& s);
/// Decides existence of a span morphism s -> t by block counting and builds
/// a witness. With iso_required the witness is a bijection.
std::optional<SpanMorphism> span_morphism_search(const Span& s, const Span& t,
                                                 bool iso_required);

namespace detail {
/// Index translation from one layout of a set to another (set-equal).
std::vector<std::size_t> reindex(const FinSet& from, const FinSet& to);
void require_equal_sets(const FinSet& a, const FinSet& b, const char* what);
}  // namespace detail

}  // namespace spanauto
