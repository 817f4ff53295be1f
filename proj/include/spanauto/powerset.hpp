#pragma once

// The powerset functor on relations and the Set/Rel Kleisli unit and counit.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "spanauto/span.hpp"

namespace spanauto {

using SubsetMask = std::uint64_t;

/// Largest set whose full 2^n image table is materialized.
inline constexpr std::size_t kPowersetTableLimit = 20;

/// All subsets of an n-element set in canonical order: by size, then
/// lexicographically by member indices. Throws bound_exceeded past `cap`.
std::vector<SubsetMask> canonical_subsets(std::size_t n,
                                          std::size_t cap = kPowersetTableLimit);
/// Inverse of canonical_subsets: rank[mask] = position.
std::vector<std::size_t> canonical_subset_rank(std::size_t n,
                                               std::size_t cap = kPowersetTableLimit);

std::vector<std::size_t> mask_members(SubsetMask mask);
SubsetMask members_mask(const std::vector<std::size_t>& members);

/// "{a,b}" with members in set order; the empty subset uses `empty_label`.
std::string subset_label(const FinSet& a, SubsetMask mask,
                         const std::string& empty_label = "{}");

/// P(a) as a finite set, elements in canonical subset order.
FinSet powerset_finset(const FinSet& a, std::string id,
                       const std::string& empty_label = "{}",
                       std::size_t cap = kPowersetTableLimit);

/// R(r) : P(dom) -> P(cod), S |-> { b | exists a in S, (a,b) in r }.
class PowersetMap {
 public:
  explicit PowersetMap(Relation r);

  const Relation& relation() const { return r_; }

  /// On-demand evaluation for sets of any size; members ascending.
  std::vector<std::size_t> apply(const std::vector<std::size_t>& subset) const;
  /// Bitmask evaluation; both sets must have at most 64 elements.
  SubsetMask apply(SubsetMask subset) const;
  /// Full table indexed by mask; only for |dom| <= kPowersetTableLimit.
  std::vector<SubsetMask> table() const;

 private:
  Relation r_;
  std::vector<SubsetMask> row_masks_;  // successors of each dom element
};

PowersetMap powerset_map(const Relation& r);

/// Kleisli unit: a |-> {a}, as a relation A -> P(A).
Relation rel_unit(const FinSet& a);
/// Kleisli counit: membership relation P(A) -> A.
Relation rel_counit(const FinSet& a);

}  // namespace spanauto
