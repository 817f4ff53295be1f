#pragma once

// Randomized law suites for the morphism calculi. Each suite is seeded
// independently from (seed, suite name), so runs are reproducible.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace spanauto {

struct LawReport {
  std::string name;
  std::size_t cases = 0;
  bool ok = true;
  /// Smallest failing instance found, rendered as text.
  std::string counterexample;
};

std::vector<std::string> law_names();

/// Runs one suite; unknown names throw Error(input).
LawReport run_law(const std::string& name, std::uint64_t seed, std::size_t cases,
                  std::size_t max_size = 5);

std::vector<LawReport> run_all_laws(std::uint64_t seed, std::size_t cases,
                                    std::size_t max_size = 5);

}  // namespace spanauto
