// Microbenchmarks for the numerical kernels and the partitioner.

#include "edsolve/partition.hpp"
#include "edsolve/problems.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace eds;

static void BM_Spmv(benchmark::State& state) {
  GeneratedProblem gp =
      random_geometric_laplacian(static_cast<int>(state.range(0)), 2, 2.5, 77);
  Vec x(gp.A.n, 1.0);
  for (auto _ : state) {
    Vec y = gp.A.apply(x);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * gp.A.nnz());
}
BENCHMARK(BM_Spmv)->Arg(2000)->Arg(10000);

static void BM_DenseSymEig(benchmark::State& state) {
  int s = static_cast<int>(state.range(0));
  SplitMix64 g(5);
  DenseSymMatrix M(s);
  for (int i = 0; i < s; ++i)
    for (int j = i; j < s; ++j) M.at(i, j) = M.at(j, i) = g.uniform(-1, 1);
  for (int i = 0; i < s; ++i) M.at(i, i) += s;
  for (auto _ : state) {
    EigResult e = dense_sym_eig(M, s);
    benchmark::DoNotOptimize(e.values.data());
  }
}
BENCHMARK(BM_DenseSymEig)->Arg(16)->Arg(48);

static void BM_Pcg(benchmark::State& state) {
  GeneratedProblem gp =
      random_geometric_laplacian(static_cast<int>(state.range(0)), 2, 2.5, 78);
  Vec b(gp.A.n, 1.0);
  auto pre = DiagonalPreconditioner::from_matrix_diagonal(gp.A.diagonal());
  for (auto _ : state) {
    PCGResult r = pcg_solve([&](const Vec& v) { return gp.A.apply(v); }, b, &pre, 1e-8,
                            10 * gp.A.n);
    benchmark::DoNotOptimize(r.x.data());
  }
}
BENCHMARK(BM_Pcg)->Arg(2000);

static void BM_PairCluster(benchmark::State& state) {
  GeneratedProblem gp =
      random_geometric_laplacian(static_cast<int>(state.range(0)), 2, 2.5, 79);
  for (auto _ : state) {
    Partition p = pair_cluster(gp.dec, std::sqrt(1e-3), 50.0);
    benchmark::DoNotOptimize(p.patches.data());
  }
}
BENCHMARK(BM_PairCluster)->Arg(1000)->Arg(2000);

BENCHMARK_MAIN();
