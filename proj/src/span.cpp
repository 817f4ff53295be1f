#include "spanauto/span.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

namespace spanauto {

namespace detail {

void require_equal_sets(const FinSet& a, const FinSet& b, const char* what) {
  if (!(a == b))
    throw Error(ErrorCode::mismatch, std::string(what) + ": sets '" + a.id() +
                                         "' and '" + b.id() + "' differ");
}

std::vector<std::size_t> reindex(const FinSet& from, const FinSet& to) {
  std::vector<std::size_t> out(from.size());
  if (from.same_layout(to)) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
    return out;
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = to.index_of(from[i]);
  return out;
}

}  // namespace detail

using detail::reindex;
using detail::require_equal_sets;

// ---------------------------------------------------------------- Span

Span::Span(FinSet dom, FinSet cod, std::vector<Token> tokens)
    : dom_(std::move(dom)), cod_(std::move(cod)), tokens_(std::move(tokens)) {
  std::unordered_set<std::string> seen;
  seen.reserve(tokens_.size());
  for (const auto& t : tokens_) {
    if (t.left >= dom_.size() || t.right >= cod_.size())
      throw Error(ErrorCode::input, "span token '" + t.label + "' has a foot outside its sets");
    if (!seen.insert(t.label).second)
      throw Error(ErrorCode::input, "duplicate span token label '" + t.label + "'");
  }
}

Span identity_span(const FinSet& a) {
  std::vector<Token> tokens;
  tokens.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) tokens.push_back({a[i], i, i});
  return Span(a, a, std::move(tokens));
}

Span compose_spans(const Span& s, const Span& t) {
  require_equal_sets(s.cod(), t.dom(), "compose_spans");
  const auto middle = reindex(t.dom(), s.cod());
  // Bucket t's tokens by their left foot in s.cod's layout.
  std::vector<std::vector<std::size_t>> by_left(s.cod().size());
  for (std::size_t j = 0; j < t.tokens().size(); ++j)
    by_left[middle[t.tokens()[j].left]].push_back(j);

  std::vector<Token> tokens;
  for (const auto& x : s.tokens()) {
    for (std::size_t j : by_left[x.right]) {
      const auto& y = t.tokens()[j];
      tokens.push_back({"(" + x.label + "," + y.label + ")", x.left, y.right});
    }
  }
  return Span(s.dom(), t.cod(), std::move(tokens));
}

Span dagger_span(const Span& s) {
  std::vector<Token> tokens;
  tokens.reserve(s.size());
  for (const auto& t : s.tokens()) tokens.push_back({t.label, t.right, t.left});
  return Span(s.cod(), s.dom(), std::move(tokens));
}

bool span_iso_eq(const Span& s, const Span& t) {
  require_equal_sets(s.dom(), t.dom(), "span_iso_eq");
  require_equal_sets(s.cod(), t.cod(), "span_iso_eq");
  return to_matrix(s) == to_matrix(t);
}

// ------------------------------------------------------------ Relation

Relation::Relation(FinSet dom, FinSet cod, std::vector<Pair> pairs)
    : dom_(std::move(dom)), cod_(std::move(cod)), pairs_(std::move(pairs)) {
  for (const auto& [a, b] : pairs_)
    if (a >= dom_.size() || b >= cod_.size())
      throw Error(ErrorCode::input, "relation pair outside its sets");
  std::sort(pairs_.begin(), pairs_.end());
  pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
}

bool Relation::contains(std::size_t a, std::size_t b) const {
  return std::binary_search(pairs_.begin(), pairs_.end(), Pair{a, b});
}

std::vector<std::size_t> Relation::successors(std::size_t a) const {
  std::vector<std::size_t> out;
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), Pair{a, 0});
  for (; it != pairs_.end() && it->first == a; ++it) out.push_back(it->second);
  return out;
}

bool operator==(const Relation& a, const Relation& b) {
  if (!(a.dom_ == b.dom_) || !(a.cod_ == b.cod_)) return false;
  if (a.pairs_.size() != b.pairs_.size()) return false;
  if (a.dom_.same_layout(b.dom_) && a.cod_.same_layout(b.cod_)) return a.pairs_ == b.pairs_;
  const auto rd = reindex(a.dom_, b.dom_);
  const auto rc = reindex(a.cod_, b.cod_);
  for (const auto& [x, y] : a.pairs_)
    if (!b.contains(rd[x], rc[y])) return false;
  return true;
}

Relation identity_relation(const FinSet& a) {
  std::vector<Relation::Pair> pairs;
  for (std::size_t i = 0; i < a.size(); ++i) pairs.emplace_back(i, i);
  return Relation(a, a, std::move(pairs));
}

Relation compose_relations(const Relation& r, const Relation& q) {
  require_equal_sets(r.cod(), q.dom(), "compose_relations");
  const auto middle = reindex(r.cod(), q.dom());
  std::vector<Relation::Pair> pairs;
  for (const auto& [a, b] : r.pairs())
    for (std::size_t c : q.successors(middle[b])) pairs.emplace_back(a, c);
  return Relation(r.dom(), q.cod(), std::move(pairs));
}

Relation dagger_relation(const Relation& r) {
  std::vector<Relation::Pair> pairs;
  pairs.reserve(r.pairs().size());
  for (const auto& [a, b] : r.pairs()) pairs.emplace_back(b, a);
  return Relation(r.cod(), r.dom(), std::move(pairs));
}

Relation function_graph(const FinSet& dom, const FinSet& cod,
                        const std::vector<std::size_t>& f) {
  if (f.size() != dom.size())
    throw Error(ErrorCode::input, "function table size differs from its domain");
  std::vector<Relation::Pair> pairs;
  for (std::size_t i = 0; i < f.size(); ++i) pairs.emplace_back(i, f[i]);
  return Relation(dom, cod, std::move(pairs));
}

bool is_total_function(const Relation& r) {
  std::vector<int> out_degree(r.dom().size(), 0);
  for (const auto& p : r.pairs()) ++out_degree[p.first];
  return std::all_of(out_degree.begin(), out_degree.end(), [](int d) { return d == 1; });
}

Relation image(const Span& s) {
  std::vector<Relation::Pair> pairs;
  pairs.reserve(s.size());
  for (const auto& t : s.tokens()) pairs.emplace_back(t.left, t.right);
  return Relation(s.dom(), s.cod(), std::move(pairs));
}

Span from_relation(const Relation& r) {
  std::vector<Token> tokens;
  tokens.reserve(r.pairs().size());
  for (const auto& [a, b] : r.pairs())
    tokens.push_back({r.dom()[a] + "->" + r.cod()[b], a, b});
  return Span(r.dom(), r.cod(), std::move(tokens));
}

// ----------------------------------------------------------- NatMatrix

NatMatrix::NatMatrix(FinSet dom, FinSet cod)
    : dom_(std::move(dom)), cod_(std::move(cod)), rows_(dom_.size()) {}

NatMatrix::NatMatrix(FinSet dom, FinSet cod, std::vector<Row> rows)
    : dom_(std::move(dom)), cod_(std::move(cod)), rows_(std::move(rows)) {
  if (rows_.size() != dom_.size())
    throw Error(ErrorCode::input, "matrix row count differs from its domain");
  for (auto& row : rows_) {
    std::sort(row.begin(), row.end());
    Row merged;
    merged.reserve(row.size());
    for (const auto& [col, n] : row) {
      if (col >= cod_.size()) throw Error(ErrorCode::input, "matrix column outside codomain");
      if (!merged.empty() && merged.back().first == col)
        merged.back().second = checked_add(merged.back().second, n);
      else
        merged.emplace_back(col, n);
    }
    std::erase_if(merged, [](const auto& e) { return e.second == 0; });
    row = std::move(merged);
  }
}

NatMatrix NatMatrix::from_dense(FinSet dom, FinSet cod,
                                const std::vector<std::vector<Nat>>& entries) {
  if (entries.size() != dom.size())
    throw Error(ErrorCode::input, "dense matrix row count differs from its domain");
  std::vector<Row> rows(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].size() != cod.size())
      throw Error(ErrorCode::input, "dense matrix row width differs from its codomain");
    for (std::size_t j = 0; j < entries[i].size(); ++j)
      if (entries[i][j] != 0) rows[i].emplace_back(j, entries[i][j]);
  }
  return NatMatrix(std::move(dom), std::move(cod), std::move(rows));
}

Nat NatMatrix::at(std::size_t i, std::size_t j) const {
  const auto& row = rows_.at(i);
  auto it = std::lower_bound(row.begin(), row.end(), std::pair<std::size_t, Nat>{j, 0});
  return (it != row.end() && it->first == j) ? it->second : 0;
}

std::vector<std::vector<Nat>> NatMatrix::dense() const {
  std::vector<std::vector<Nat>> out(dom_.size(), std::vector<Nat>(cod_.size(), 0));
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (const auto& [j, n] : rows_[i]) out[i][j] = n;
  return out;
}

bool NatMatrix::is_zero() const {
  return std::all_of(rows_.begin(), rows_.end(), [](const Row& r) { return r.empty(); });
}

bool operator==(const NatMatrix& a, const NatMatrix& b) {
  if (!(a.dom_ == b.dom_) || !(a.cod_ == b.cod_)) return false;
  if (a.dom_.same_layout(b.dom_) && a.cod_.same_layout(b.cod_)) return a.rows_ == b.rows_;
  const auto rd = reindex(a.dom_, b.dom_);
  const auto rc = reindex(a.cod_, b.cod_);
  for (std::size_t i = 0; i < a.rows_.size(); ++i) {
    if (a.rows_[i].size() != b.rows_[rd[i]].size()) return false;
    for (const auto& [j, n] : a.rows_[i])
      if (b.at(rd[i], rc[j]) != n) return false;
  }
  return true;
}

NatMatrix identity_matrix(const FinSet& a) {
  std::vector<NatMatrix::Row> rows(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) rows[i].emplace_back(i, 1);
  return NatMatrix(a, a, std::move(rows));
}

NatMatrix to_matrix(const Span& s) {
  std::vector<NatMatrix::Row> rows(s.dom().size());
  for (const auto& t : s.tokens()) rows[t.left].emplace_back(t.right, 1);
  return NatMatrix(s.dom(), s.cod(), std::move(rows));
}

Span from_matrix(const NatMatrix& m) {
  std::vector<Token> tokens;
  for (std::size_t i = 0; i < m.dom().size(); ++i) {
    for (const auto& [j, n] : m.row(i)) {
      const std::string base = m.dom()[i] + "->" + m.cod()[j] + "#";
      for (Nat k = 1; k <= n; ++k) tokens.push_back({base + std::to_string(k), i, j});
    }
  }
  return Span(m.dom(), m.cod(), std::move(tokens));
}

NatMatrix matrix_compose(const NatMatrix& m, const NatMatrix& n) {
  require_equal_sets(m.cod(), n.dom(), "matrix_compose");
  const auto middle = reindex(m.cod(), n.dom());
  std::vector<NatMatrix::Row> rows(m.dom().size());
  std::vector<Nat> acc(n.cod().size(), 0);
  std::vector<std::size_t> touched;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    touched.clear();
    for (const auto& [k, a] : m.row(i)) {
      for (const auto& [j, b] : n.row(middle[k])) {
        if (acc[j] == 0) touched.push_back(j);
        acc[j] = checked_add(acc[j], checked_mul(a, b));
      }
    }
    for (std::size_t j : touched) {
      rows[i].emplace_back(j, acc[j]);
      acc[j] = 0;
    }
  }
  return NatMatrix(m.dom(), n.cod(), std::move(rows));
}

NatMatrix transpose(const NatMatrix& m) {
  std::vector<NatMatrix::Row> rows(m.cod().size());
  for (std::size_t i = 0; i < m.dom().size(); ++i)
    for (const auto& [j, n] : m.row(i)) rows[j].emplace_back(i, n);
  return NatMatrix(m.cod(), m.dom(), std::move(rows));
}

Relation support(const NatMatrix& m) {
  std::vector<Relation::Pair> pairs;
  for (std::size_t i = 0; i < m.dom().size(); ++i)
    for (const auto& e : m.row(i)) pairs.emplace_back(i, e.first);
  return Relation(m.dom(), m.cod(), std::move(pairs));
}

// -------------------------------------------------------- SpanMorphism

SpanMorphism::SpanMorphism(Span source, Span target, std::vector<std::size_t> map)
    : source_(std::move(source)), target_(std::move(target)), map_(std::move(map)) {
  require_equal_sets(source_.dom(), target_.dom(), "SpanMorphism");
  require_equal_sets(source_.cod(), target_.cod(), "SpanMorphism");
  if (map_.size() != source_.size())
    throw Error(ErrorCode::input, "span morphism must map every source token");
  const auto rd = reindex(source_.dom(), target_.dom());
  const auto rc = reindex(source_.cod(), target_.cod());
  for (std::size_t i = 0; i < map_.size(); ++i) {
    if (map_[i] >= target_.size())
      throw Error(ErrorCode::input, "span morphism maps outside the target apex");
    const auto& s = source_.tokens()[i];
    const auto& t = target_.tokens()[map_[i]];
    if (rd[s.left] != t.left || rc[s.right] != t.right)
      throw Error(ErrorCode::input, "span morphism does not commute with the legs at token '" +
                                        s.label + "'");
  }
}

bool SpanMorphism::is_iso() const {
  if (source_.size() != target_.size()) return false;
  std::vector<bool> hit(target_.size(), false);
  for (std::size_t j : map_) {
    if (hit[j]) return false;
    hit[j] = true;
  }
  return true;
}

SpanMorphism image_unit(const Span& s) {
  Span img = from_relation(image(s));
  // from_relation emits tokens in sorted pair order, one per pair.
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> slot;
  for (std::size_t j = 0; j < img.size(); ++j)
    slot.emplace(std::pair{img.tokens()[j].left, img.tokens()[j].right}, j);
  std::vector<std::size_t> map;
  map.reserve(s.size());
  for (const auto& t : s.tokens()) map.push_back(slot.at({t.left, t.right}));
  return SpanMorphism(s, std::move(img), std::move(map));
}

std::optional<SpanMorphism> span_morphism_search(const Span& s, const Span& t,
                                                 bool iso_required) {
  require_equal_sets(s.dom(), t.dom(), "span_morphism_search");
  require_equal_sets(s.cod(), t.cod(), "span_morphism_search");
  const auto rd = reindex(s.dom(), t.dom());
  const auto rc = reindex(s.cod(), t.cod());

  // Tokens of t grouped by feet block.
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> blocks;
  for (std::size_t j = 0; j < t.size(); ++j)
    blocks[{t.tokens()[j].left, t.tokens()[j].right}].push_back(j);

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> used;
  std::vector<std::size_t> map;
  map.reserve(s.size());
  for (const auto& tok : s.tokens()) {
    const std::pair<std::size_t, std::size_t> key{rd[tok.left], rc[tok.right]};
    auto it = blocks.find(key);
    if (it == blocks.end()) return std::nullopt;
    std::size_t& k = used[key];
    if (iso_required) {
      if (k >= it->second.size()) return std::nullopt;
      map.push_back(it->second[k++]);
    } else {
      map.push_back(it->second.front());
    }
  }
  if (iso_required && s.size() != t.size()) return std::nullopt;
  return SpanMorphism(s, t, std::move(map));
}

}  // namespace spanauto
