// Serial reference vs OpenMP kernel timings.

#include <benchmark/benchmark.h>

#include "spanauto/kernels.hpp"
#include "spanauto/random.hpp"
#include "spanauto/span.hpp"

using namespace spanauto;

namespace {

std::vector<SubsetMask> masks(std::size_t n) {
  Rng rng(7);
  std::vector<SubsetMask> rows(n);
  for (auto& r : rows) r = rng.engine()() & ((SubsetMask{1} << n) - 1);
  return rows;
}

void BM_powerset_serial(benchmark::State& state) {
  const auto rows = masks(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::powerset_table_serial(rows));
}

void BM_powerset_parallel(benchmark::State& state) {
  const auto rows = masks(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::powerset_table_parallel(rows));
}

struct PathInput {
  SpanAutomaton a;
  std::vector<Word> words;
};

PathInput path_input(std::size_t max_len) {
  Rng rng(11);
  AutomatonLimits limits;
  limits.max_nodes = 2;
  limits.max_states = 6;
  limits.edge_density = 0.8;
  PathInput in{random_span_automaton(rng, limits), {}};
  in.words = enumerate_words(in.a.base, in.a.initial.node, max_len);
  return in;
}

void BM_count_paths_serial(benchmark::State& state) {
  const PathInput in = path_input(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::count_paths_serial(in.a, in.words));
  state.counters["words"] = static_cast<double>(in.words.size());
}

void BM_count_paths_parallel(benchmark::State& state) {
  const PathInput in = path_input(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::count_paths_parallel(in.a, in.words));
  state.counters["words"] = static_cast<double>(in.words.size());
}

std::pair<NatMatrix, NatMatrix> matrices(std::size_t n) {
  Rng rng(13);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
  const FinSet a("A", labels), b("B", labels), c("C", labels);
  return {random_matrix(rng, a, b), random_matrix(rng, b, c)};
}

void BM_compose_serial(benchmark::State& state) {
  const auto [m, n] = matrices(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(matrix_compose(m, n));
}

void BM_compose_parallel(benchmark::State& state) {
  const auto [m, n] = matrices(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::matrix_compose_parallel(m, n));
}

}  // namespace

BENCHMARK(BM_powerset_serial)->Arg(12)->Arg(16)->Arg(20);
BENCHMARK(BM_powerset_parallel)->Arg(12)->Arg(16)->Arg(20);
BENCHMARK(BM_count_paths_serial)->Arg(6)->Arg(9);
BENCHMARK(BM_count_paths_parallel)->Arg(6)->Arg(9);
BENCHMARK(BM_compose_serial)->Arg(64)->Arg(256);
BENCHMARK(BM_compose_parallel)->Arg(64)->Arg(256);

BENCHMARK_MAIN();
