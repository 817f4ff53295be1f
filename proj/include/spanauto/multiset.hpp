#pragma once

// The multiset relative monad Fin -> Set, A |-> N^A.

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "spanauto/span.hpp"

namespace spanauto {

/// A finitely supported map base -> N, stored densely.
class Multiset {
 public:
  explicit Multiset(FinSet base);
  Multiset(FinSet base, std::vector<Nat> counts);

  const FinSet& base() const { return base_; }
  const std::vector<Nat>& counts() const { return counts_; }
  Nat at(std::size_t i) const { return counts_[i]; }
  Nat at(const std::string& label) const { return counts_[base_.index_of(label)]; }
  Nat total() const;
  bool is_zero() const;

  /// "(c1,c2,...)" in base order.
  std::string tuple_label() const;

  friend bool operator==(const Multiset& a, const Multiset& b);
  friend Multiset operator+(const Multiset& a, const Multiset& b);

 private:
  FinSet base_;
  std::vector<Nat> counts_;
};

/// eta: a |-> the multiset with a single copy of a.
Multiset multiset_unit(const FinSet& a, std::size_t element);
Multiset multiset_unit(const FinSet& a, const std::string& element);

/// phi* : N^A -> N^B, v |-> sum_a v(a) * phi(a)(-).
Multiset multiset_extend(const NatMatrix& phi, const Multiset& v);

/// Row i of a Kleisli morphism, read as a multiset over its codomain.
Multiset row_multiset(const NatMatrix& m, std::size_t i);

/// A finitely supported multiset of multisets over one base.
class NestedMultiset {
 public:
  NestedMultiset(FinSet inner_base, std::vector<std::pair<Multiset, Nat>> entries);

  const FinSet& inner_base() const { return inner_base_; }
  /// Canonical count-vector keys with their multiplicities.
  const std::map<std::vector<Nat>, Nat>& entries() const { return entries_; }

 private:
  FinSet inner_base_;
  std::map<std::vector<Nat>, Nat> entries_;
};

/// eta_{N^B}: v |-> { v : 1 }.
NestedMultiset nested_unit(const Multiset& v);

/// Id*_{N^B}: b |-> sum_w g(w) * w(b).
Multiset multiset_flatten(const NestedMultiset& g);

}  // namespace spanauto
