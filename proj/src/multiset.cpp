#include "spanauto/multiset.hpp"

#include <algorithm>

namespace spanauto {

Multiset::Multiset(FinSet base) : base_(std::move(base)), counts_(base_.size(), 0) {}

Multiset::Multiset(FinSet base, std::vector<Nat> counts)
    : base_(std::move(base)), counts_(std::move(counts)) {
  if (counts_.size() != base_.size())
    throw Error(ErrorCode::input, "multiset count vector differs from its base size");
}

Nat Multiset::total() const {
  Nat t = 0;
  for (Nat c : counts_) t = checked_add(t, c);
  return t;
}

bool Multiset::is_zero() const {
  return std::all_of(counts_.begin(), counts_.end(), [](Nat c) { return c == 0; });
}

std::string Multiset::tuple_label() const {
  std::string out = "(";
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(counts_[i]);
  }
  return out + ")";
}

bool operator==(const Multiset& a, const Multiset& b) {
  if (!(a.base_ == b.base_)) return false;
  if (a.base_.same_layout(b.base_)) return a.counts_ == b.counts_;
  const auto r = detail::reindex(a.base_, b.base_);
  for (std::size_t i = 0; i < a.counts_.size(); ++i)
    if (a.counts_[i] != b.counts_[r[i]]) return false;
  return true;
}

Multiset operator+(const Multiset& a, const Multiset& b) {
  detail::require_equal_sets(a.base_, b.base_, "multiset sum");
  const auto r = detail::reindex(b.base_, a.base_);
  std::vector<Nat> counts = a.counts_;
  for (std::size_t i = 0; i < b.counts_.size(); ++i)
    counts[r[i]] = checked_add(counts[r[i]], b.counts_[i]);
  return Multiset(a.base_, std::move(counts));
}

Multiset multiset_unit(const FinSet& a, std::size_t element) {
  if (element >= a.size())
    throw Error(ErrorCode::unknown_element, "multiset_unit: element index out of range");
  std::vector<Nat> counts(a.size(), 0);
  counts[element] = 1;
  return Multiset(a, std::move(counts));
}

Multiset multiset_unit(const FinSet& a, const std::string& element) {
  return multiset_unit(a, a.index_of(element));
}

Multiset multiset_extend(const NatMatrix& phi, const Multiset& v) {
  detail::require_equal_sets(v.base(), phi.dom(), "multiset_extend");
  const auto r = detail::reindex(v.base(), phi.dom());
  std::vector<Nat> out(phi.cod().size(), 0);
  for (std::size_t a = 0; a < v.counts().size(); ++a) {
    const Nat va = v.counts()[a];
    if (va == 0) continue;
    for (const auto& [b, n] : phi.row(r[a])) out[b] = checked_add(out[b], checked_mul(va, n));
  }
  return Multiset(phi.cod(), std::move(out));
}

Multiset row_multiset(const NatMatrix& m, std::size_t i) {
  std::vector<Nat> counts(m.cod().size(), 0);
  for (const auto& [j, n] : m.row(i)) counts[j] = n;
  return Multiset(m.cod(), std::move(counts));
}

NestedMultiset::NestedMultiset(FinSet inner_base,
                               std::vector<std::pair<Multiset, Nat>> entries)
    : inner_base_(std::move(inner_base)) {
  for (auto& [w, n] : entries) {
    detail::require_equal_sets(w.base(), inner_base_, "NestedMultiset");
    if (n == 0) continue;
    std::vector<Nat> key(inner_base_.size(), 0);
    const auto r = detail::reindex(w.base(), inner_base_);
    for (std::size_t i = 0; i < key.size(); ++i) key[r[i]] = w.counts()[i];
    Nat& slot = entries_[std::move(key)];
    slot = checked_add(slot, n);
  }
}

NestedMultiset nested_unit(const Multiset& v) {
  return NestedMultiset(v.base(), {{v, 1}});
}

Multiset multiset_flatten(const NestedMultiset& g) {
  std::vector<Nat> out(g.inner_base().size(), 0);
  for (const auto& [w, n] : g.entries())
    for (std::size_t b = 0; b < w.size(); ++b)
      out[b] = checked_add(out[b], checked_mul(n, w[b]));
  return Multiset(g.inner_base(), std::move(out));
}

}  // namespace spanauto
