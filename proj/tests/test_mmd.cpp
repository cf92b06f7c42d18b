#include "edsolve/mmd.hpp"

#include "edsolve/problems.hpp"
#include "fixtures.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>

using namespace eds;

TEST_CASE("reduced inherited decomposition assembles to Psi^T A Psi") {
  GeneratedProblem gp = random_geometric_laplacian(100, 2, 3.0, 17);
  Partition part = pair_cluster(gp.dec, std::sqrt(1e-2), 50.0);
  CoarseSpace cs = construct_phi(gp.dec, part, 1);
  CompressedOperator comp = exact_psi(gp.A, cs);
  EnergyDecomposition red = reduced_inherited(gp.dec, part, comp.psi, cs.N);
  SparseSymMatrix Ared = assemble(red);
  // reference: explicit triple product
  for (int i = 0; i < cs.N; ++i) {
    Vec ci(gp.dec.n, 0.0);
    for (const auto& [r, v] : comp.psi[i]) ci[r] = v;
    Vec Aci = gp.A.apply(ci);
    for (int k = i; k < cs.N; ++k) {
      double want = 0.0;
      for (const auto& [r, v] : comp.psi[k]) want += v * Aci[r];
      CHECK(Ared.at(i, k) == doctest::Approx(want).epsilon(1e-8).scale(1.0));
    }
  }
}

TEST_CASE("two-level decomposition and solve against the dense oracle") {
  GeneratedProblem gp = random_geometric_laplacian(240, 2, 3.0, 23);
  MMDConfig cfg;
  cfg.eps2_schedule = {3e-3, 3e-2};
  cfg.n_floor = 8;
  cfg.exact_levels = true;
  MMDHierarchy h = mmd_decompose(gp.dec, cfg);
  REQUIRE(h.depth() >= 1);
  for (const auto& L : h.levels) {
    CHECK(L.n_coarse < L.n_prev);
    CHECK(L.kappa_b >= 1.0);
    CHECK(L.b_dim == L.n_prev - L.n_coarse);
  }

  Vec b(gp.dec.n);
  SplitMix64 g = SplitMix64::stream(3, 0);
  for (double& v : b) v = g.uniform(-1, 1);
  SolveConfig sc;
  sc.final_tol = 1e-8;
  SolveStats st = mmd_solve(h, b, sc);
  CHECK(st.converged);
  Vec xd = dense_solve(to_dense(gp.A), b);
  axpy(-1.0, st.x, xd);
  CHECK(norm2(xd) / norm2(st.x) < 1e-6);
}

TEST_CASE("localized hierarchy solves with compensation") {
  GeneratedProblem gp = random_geometric_laplacian(300, 2, 3.0, 29);
  MMDConfig cfg;
  cfg.eps2_schedule = {3e-3, 3e-2};
  cfg.n_floor = 8;
  cfg.measure_condition = false;
  MMDHierarchy h = mmd_decompose(gp.dec, cfg);
  Vec b(gp.dec.n, 1.0);
  SolveConfig sc;
  sc.final_tol = 1e-8;
  SolveStats st = mmd_solve(h, b, sc);
  CHECK(st.converged);
  CHECK(st.rel_residual <= 1e-8);
}

TEST_CASE("accumulated compression errors stay within the cumulative budget") {
  GeneratedProblem gp = random_geometric_laplacian(180, 2, 3.0, 31);
  MMDConfig cfg;
  cfg.eps2_schedule = {3e-3, 3e-2};
  cfg.n_floor = 4;
  cfg.exact_levels = true;
  cfg.measure_condition = false;
  MMDHierarchy h = mmd_decompose(gp.dec, cfg);
  CompressionBudget cb = accumulated_compression_error(h);
  REQUIRE(cb.measured.size() == static_cast<size_t>(h.depth()));
  CHECK(cb.holds);
  for (size_t k = 0; k + 1 < cb.measured.size(); ++k)
    CHECK(cb.measured[k + 1] >= cb.measured[k] * (1 - 1e-8));  // errors accumulate
}

TEST_CASE("eigen recovery approximates the smallest eigenvalues") {
  GeneratedProblem gp = random_geometric_laplacian(150, 2, 3.0, 37);
  Partition part = pair_cluster(gp.dec, std::sqrt(1e-3), 50.0);
  CoarseSpace cs = construct_phi(gp.dec, part, 1);
  CompressedOperator comp = exact_psi(gp.A, cs);
  EigenRecovery rec = eigen_recovery(gp.A, comp, 3);
  EigResult truth = dense_sym_eig(to_dense(gp.A), 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(rec.approx[i] >= truth.values[i] * (1 - 1e-8));  // Rayleigh-Ritz from above
    CHECK(std::abs(1.0 / rec.approx[i] - 1.0 / truth.values[i]) < 10 * 1e-3);
    CHECK(norm2(rec.vectors[i]) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("hierarchy save and load round trip preserves the solve") {
  GeneratedProblem gp = random_geometric_laplacian(160, 2, 3.0, 41);
  MMDConfig cfg;
  cfg.eps2_schedule = {3e-3};
  cfg.n_floor = 8;
  cfg.measure_condition = false;
  MMDHierarchy h = mmd_decompose(gp.dec, cfg);
  std::string dir = "test_hierarchy_roundtrip";
  save_hierarchy(dir, h);
  MMDHierarchy back = load_hierarchy(dir);
  REQUIRE(back.depth() == h.depth());
  Vec b(gp.dec.n, 1.0);
  SolveConfig sc;
  sc.final_tol = 1e-9;
  Vec x1 = mmd_solve(h, b, sc).x;
  Vec x2 = mmd_solve(back, b, sc).x;
  axpy(-1.0, x1, x2);
  CHECK(norm2(x2) < 1e-8 * norm2(x1));
  std::filesystem::remove_all(dir);
}
