#include <benchmark/benchmark.h>

#include "conezeta/conegen.hpp"
#include "conezeta/evaluator.hpp"
#include "conezeta/extension.hpp"
#include "conezeta/malcev.hpp"
#include "conezeta/oracle.hpp"

namespace {

using namespace conezeta;

void BM_conditions_heisenberg(benchmark::State& state) {
  MalcevPresentation N = make_catalog_group("heisenberg");
  for (auto _ : state) {
    ConeConditionSystem S = good_basis_conditions(N, Variant::Subgroup);
    benchmark::DoNotOptimize(S.conditions.size());
  }
}
BENCHMARK(BM_conditions_heisenberg);

void BM_conditions_relative_heisc2(benchmark::State& state) {
  VirtuallyTauGroup V = make_extension_catalog_group("heisc2");
  FiniteSubgroup K;
  K.elems = {0, 1};
  K.index = 1;
  K.normal = true;
  for (auto _ : state) {
    ConeConditionSystem S = relative_conditions(V, K, Variant::Subgroup);
    benchmark::DoNotOptimize(S.conditions.size());
  }
}
BENCHMARK(BM_conditions_relative_heisc2);

void BM_slice_measure_heisenberg(benchmark::State& state) {
  MalcevPresentation N = make_catalog_group("heisenberg");
  ConeConditionSystem S = good_basis_conditions(N, Variant::Subgroup);
  ConeIntegralData D = emit_cone_data(S);
  std::vector<int> m = {1, 1, 1};
  for (auto _ : state) {
    Rat mu = slice_measure(D, 2, m);
    benchmark::DoNotOptimize(mu);
  }
}
BENCHMARK(BM_slice_measure_heisenberg);

void BM_local_counts_heisenberg(benchmark::State& state) {
  MalcevPresentation N = make_catalog_group("heisenberg");
  ConeConditionSystem S = good_basis_conditions(N, Variant::Subgroup);
  for (auto _ : state) {
    LocalSeries L = local_counts(S, 3, 2);
    benchmark::DoNotOptimize(L.counts.back());
  }
}
BENCHMARK(BM_local_counts_heisenberg);

void BM_oracle_counts_heisenberg(benchmark::State& state) {
  MalcevPresentation N = make_catalog_group("heisenberg");
  OracleOptions opt;
  opt.check_stability = false;
  for (auto _ : state) {
    OracleReport R = oracle_counts(N, 2, 1, Variant::Subgroup, opt);
    benchmark::DoNotOptimize(R.counts.back());
  }
}
BENCHMARK(BM_oracle_counts_heisenberg);

}  // namespace

BENCHMARK_MAIN();
