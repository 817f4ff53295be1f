#include "spanauto/kernels.hpp"

#include <algorithm>
#include <bit>
#include <exception>

#include "spanauto/multiset.hpp"
#include "omp_util.hpp"

namespace spanauto::kernels {

using detail::ExceptionSlot;

namespace {

void check_table_size(const std::vector<SubsetMask>& row_masks) {
  if (row_masks.size() > 30)
    throw Error(ErrorCode::bound_exceeded, "powerset table over more than 30 elements");
}

}  // namespace

std::vector<SubsetMask> powerset_table_serial(const std::vector<SubsetMask>& row_masks) {
  check_table_size(row_masks);
  std::vector<SubsetMask> table(SubsetMask{1} << row_masks.size(), 0);
  for (SubsetMask s = 1; s < table.size(); ++s)
    table[s] = table[s & (s - 1)] | row_masks[static_cast<std::size_t>(std::countr_zero(s))];
  return table;
}

std::vector<SubsetMask> powerset_table_parallel(const std::vector<SubsetMask>& row_masks) {
  check_table_size(row_masks);
  // Low bits come from a small serial table; each high prefix is one chunk.
  const std::size_t low_bits = std::min<std::size_t>(row_masks.size(), 10);
  const std::vector<SubsetMask> low = powerset_table_serial(
      std::vector<SubsetMask>(row_masks.begin(), row_masks.begin() + static_cast<std::ptrdiff_t>(low_bits)));
  const std::int64_t high = std::int64_t{1} << (row_masks.size() - low_bits);
  std::vector<SubsetMask> table(low.size() * static_cast<std::size_t>(high), 0);
#pragma omp parallel for schedule(static)
  for (std::int64_t h = 0; h < high; ++h) {
    SubsetMask rest = static_cast<SubsetMask>(h), prefix = 0;
    while (rest) {
      prefix |= row_masks[low_bits + static_cast<std::size_t>(std::countr_zero(rest))];
      rest &= rest - 1;
    }
    SubsetMask* out = table.data() + static_cast<std::size_t>(h) * low.size();
    for (std::size_t l = 0; l < low.size(); ++l) out[l] = prefix | low[l];
  }
  return table;
}

std::vector<Nat> count_paths_serial(const SpanAutomaton& a, const std::vector<Word>& words) {
  std::vector<Nat> out;
  out.reserve(words.size());
  for (const Word& w : words) out.push_back(count_paths(a, w));
  return out;
}

std::vector<Nat> count_paths_parallel(const SpanAutomaton& a, const std::vector<Word>& words) {
  std::vector<NatMatrix> matrices;
  matrices.reserve(a.transitions.size());
  for (const auto& s : a.transitions) matrices.push_back(to_matrix(s));

  const bool has_initial = a.initial.node < a.fibers.size() &&
                           a.initial.index < a.fibers[a.initial.node].size();
  std::vector<Nat> out(words.size(), 0);
  ExceptionSlot slot;
  const auto n = static_cast<std::int64_t>(words.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < n; ++i) {
    slot.run([&] {
      const Word& w = words[static_cast<std::size_t>(i)];
      if (!well_formed(a.base, w)) throw Error(ErrorCode::input, "ill-formed word");
      if (!has_initial || w.start != a.initial.node) return;
      Multiset v = multiset_unit(a.fibers[w.start], a.initial.index);
      for (std::size_t e : w.edges) v = multiset_extend(matrices[e], v);
      const std::size_t end = word_end(a.base, w);
      Nat total = 0;
      for (const StateRef& f : a.finals)
        if (f.node == end) total = checked_add(total, v.at(f.index));
      out[static_cast<std::size_t>(i)] = total;
    });
  }
  slot.rethrow();
  return out;
}

NatMatrix matrix_compose_parallel(const NatMatrix& m, const NatMatrix& n) {
  detail::require_equal_sets(m.cod(), n.dom(), "matrix_compose");
  const auto middle = detail::reindex(m.cod(), n.dom());
  std::vector<NatMatrix::Row> rows(m.dom().size());
  ExceptionSlot slot;
  const auto count = static_cast<std::int64_t>(rows.size());
#pragma omp parallel
  {
    std::vector<Nat> acc(n.cod().size(), 0);
    std::vector<std::size_t> touched;
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < count; ++i) {
      slot.run([&] {
        touched.clear();
        auto& row = rows[static_cast<std::size_t>(i)];
        for (const auto& [k, x] : m.row(static_cast<std::size_t>(i)))
          for (const auto& [j, y] : n.row(middle[k])) {
            if (acc[j] == 0) touched.push_back(j);
            acc[j] = checked_add(acc[j], checked_mul(x, y));
          }
        for (std::size_t j : touched) {
          row.emplace_back(j, acc[j]);
          acc[j] = 0;
        }
      });
    }
  }
  slot.rethrow();
  return NatMatrix(m.dom(), n.cod(), std::move(rows));
}

}  // namespace spanauto::kernels
