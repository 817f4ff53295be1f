#include "spanauto/powerset.hpp"

#include <algorithm>
#include <bit>

#include "spanauto/kernels.hpp"

namespace spanauto {

std::vector<SubsetMask> canonical_subsets(std::size_t n, std::size_t cap) {
  if (n > cap || n > 30)
    throw Error(ErrorCode::bound_exceeded,
                "powerset of a " + std::to_string(n) + "-element set exceeds the cap of " +
                    std::to_string(std::min<std::size_t>(cap, 30)));
  std::vector<SubsetMask> out(SubsetMask{1} << n);
  for (SubsetMask m = 0; m < out.size(); ++m) out[m] = m;
  // Lexicographic comparison of ascending member lists equals comparing the
  // lowest differing bit: the set holding it comes first.
  std::sort(out.begin(), out.end(), [](SubsetMask a, SubsetMask b) {
    const int pa = std::popcount(a), pb = std::popcount(b);
    if (pa != pb) return pa < pb;
    if (a == b) return false;
    const SubsetMask low = (a ^ b) & ~((a ^ b) - 1);
    return (a & low) != 0;
  });
  return out;
}

std::vector<std::size_t> canonical_subset_rank(std::size_t n, std::size_t cap) {
  const auto order = canonical_subsets(n, cap);
  std::vector<std::size_t> rank(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
  return rank;
}

std::vector<std::size_t> mask_members(SubsetMask mask) {
  std::vector<std::size_t> out;
  while (mask) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return out;
}

SubsetMask members_mask(const std::vector<std::size_t>& members) {
  SubsetMask m = 0;
  for (std::size_t i : members) {
    if (i >= 64) throw Error(ErrorCode::bound_exceeded, "subset member index exceeds 63");
    m |= SubsetMask{1} << i;
  }
  return m;
}

std::string subset_label(const FinSet& a, SubsetMask mask, const std::string& empty_label) {
  if (mask == 0) return empty_label;
  std::string out = "{";
  bool first = true;
  for (std::size_t i : mask_members(mask)) {
    if (!first) out += ",";
    out += a[i];
    first = false;
  }
  return out + "}";
}

FinSet powerset_finset(const FinSet& a, std::string id, const std::string& empty_label,
                       std::size_t cap) {
  std::vector<std::string> labels;
  for (SubsetMask m : canonical_subsets(a.size(), cap))
    labels.push_back(subset_label(a, m, empty_label));
  return FinSet(std::move(id), std::move(labels));
}

PowersetMap::PowersetMap(Relation r) : r_(std::move(r)) {
  if (r_.cod().size() <= 64) {
    row_masks_.assign(r_.dom().size(), 0);
    for (const auto& [a, b] : r_.pairs()) row_masks_[a] |= SubsetMask{1} << b;
  }
}

std::vector<std::size_t> PowersetMap::apply(const std::vector<std::size_t>& subset) const {
  std::vector<std::size_t> out;
  for (std::size_t a : subset) {
    if (a >= r_.dom().size()) throw Error(ErrorCode::unknown_element, "subset member out of range");
    const auto succ = r_.successors(a);
    out.insert(out.end(), succ.begin(), succ.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SubsetMask PowersetMap::apply(SubsetMask subset) const {
  if (r_.dom().size() > 64 || r_.cod().size() > 64)
    throw Error(ErrorCode::bound_exceeded, "bitmask powerset evaluation needs sets of size <= 64");
  SubsetMask out = 0;
  while (subset) {
    out |= row_masks_[static_cast<std::size_t>(std::countr_zero(subset))];
    subset &= subset - 1;
  }
  return out;
}

std::vector<SubsetMask> PowersetMap::table() const {
  if (r_.dom().size() > kPowersetTableLimit || r_.cod().size() > 64)
    throw Error(ErrorCode::bound_exceeded, "powerset table needs |dom| <= " +
                                               std::to_string(kPowersetTableLimit));
  return kernels::powerset_table_parallel(row_masks_);
}

PowersetMap powerset_map(const Relation& r) { return PowersetMap(r); }

Relation rel_unit(const FinSet& a) {
  const FinSet pa = powerset_finset(a, "P(" + a.id() + ")");
  const auto rank = canonical_subset_rank(a.size());
  std::vector<Relation::Pair> pairs;
  for (std::size_t i = 0; i < a.size(); ++i) pairs.emplace_back(i, rank[SubsetMask{1} << i]);
  return Relation(a, pa, std::move(pairs));
}

Relation rel_counit(const FinSet& a) {
  const FinSet pa = powerset_finset(a, "P(" + a.id() + ")");
  const auto order = canonical_subsets(a.size());
  std::vector<Relation::Pair> pairs;
  for (std::size_t s = 0; s < order.size(); ++s)
    for (std::size_t i : mask_members(order[s])) pairs.emplace_back(s, i);
  return Relation(pa, a, std::move(pairs));
}

}  // namespace spanauto
