#pragma once

// Data-parallel kernels. Each OpenMP kernel has a serial reference that the
// tests compare against and bench_kernels times.

#include <cstdint>
#include <vector>

#include "spanauto/automata.hpp"

namespace spanauto {
using SubsetMask = std::uint64_t;
}

namespace spanauto::kernels {

/// Image table of a relation given as per-element successor masks:
/// table[S] = union of row_masks[a] for a in S, for every S < 2^|rows|.
std::vector<SubsetMask> powerset_table_serial(const std::vector<SubsetMask>& row_masks);
std::vector<SubsetMask> powerset_table_parallel(const std::vector<SubsetMask>& row_masks);

/// count_paths for a batch of words.
std::vector<Nat> count_paths_serial(const SpanAutomaton& a, const std::vector<Word>& words);
std::vector<Nat> count_paths_parallel(const SpanAutomaton& a, const std::vector<Word>& words);

/// Row-parallel sparse product; matrix_compose is the serial reference.
NatMatrix matrix_compose_parallel(const NatMatrix& m, const NatMatrix& n);

}  // namespace spanauto::kernels
