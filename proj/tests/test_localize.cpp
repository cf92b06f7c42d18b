#include "edsolve/localize.hpp"

#include "edsolve/partition.hpp"
#include "edsolve/problems.hpp"
#include "fixtures.hpp"

#include <doctest.h>

#include <cmath>

using namespace eds;

TEST_CASE("patch layers grow monotonically and cover the graph") {
  GeneratedProblem gp = random_geometric_laplacian(300, 2, 3.0, 30);
  Partition part = pair_cluster(gp.dec, std::sqrt(1e-2), 50.0);
  auto adj = patch_adjacency(gp.dec, part);
  size_t prev = 0;
  for (int r = 0; r < 20; ++r) {
    auto layer = patch_layers(adj, 0, r);
    CHECK(layer.size() >= prev);
    prev = layer.size();
  }
  // saturates at the connected component of patch 0 (independent BFS)
  std::vector<char> seen(part.size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  size_t comp = 1;
  while (!stack.empty()) {
    int j = stack.back();
    stack.pop_back();
    for (int nb : adj[j])
      if (!seen[nb]) {
        seen[nb] = 1;
        ++comp;
        stack.push_back(nb);
      }
  }
  CHECK(prev == comp);
}

TEST_CASE("localized columns at full radius match the exact basis") {
  GeneratedProblem gp = random_geometric_laplacian(90, 2, 3.0, 44);
  Partition part = pair_cluster(gp.dec, std::sqrt(1e-2), 50.0);
  CoarseSpace cs = construct_phi(gp.dec, part, 1);
  CompressedOperator exact = exact_psi(gp.A, cs);
  auto adj = patch_adjacency(gp.dec, cs.part);
  // a tiny eps_loc forces growth to the whole graph
  for (int col : {0, cs.N / 2, cs.N - 1}) {
    Vec tilde;
    LocalizedColumn info = localize_column(gp.A, cs, adj, col, 1e-9, tilde);
    Vec ex(gp.dec.n, 0.0);
    for (const auto& [r, v] : exact.psi[col]) ex[r] = v;
    axpy(-1.0, tilde, ex);
    double err = std::sqrt(dot(ex, gp.A.apply(ex)));
    CHECK(err < 1e-6);
  }
}

TEST_CASE("pythagoras identity holds along the radius expansion") {
  GeneratedProblem gp = random_geometric_laplacian(150, 2, 3.0, 52);
  Partition part = pair_cluster(gp.dec, std::sqrt(1e-2), 50.0);
  CoarseSpace cs = construct_phi(gp.dec, part, 1);
  auto adj = patch_adjacency(gp.dec, cs.part);
  Vec col;
  LocalizedColumn info = localize_column(gp.A, cs, adj, 0, 1e-8, col);
  REQUIRE(info.w_energy2.size() >= 1);
  for (size_t k = 0; k < info.w_energy2.size(); ++k) {
    double lhs = info.psi_energy2[k];
    double rhs = info.psi_energy2[k + 1] + info.w_energy2[k];
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8).scale(std::max(1.0, lhs)));
  }
  // energies decrease monotonically
  for (size_t k = 0; k + 1 < info.psi_energy2.size(); ++k)
    CHECK(info.psi_energy2[k + 1] <= info.psi_energy2[k] * (1 + 1e-12));
}

TEST_CASE("construct_tilde_psi truncates and reports radii") {
  GeneratedProblem gp = random_geometric_laplacian(200, 2, 3.0, 61);
  Partition part = pair_cluster(gp.dec, std::sqrt(1e-2), 50.0);
  CoarseSpace cs = construct_phi(gp.dec, part, 1);
  LocalizeResult lr = construct_tilde_psi(gp.A, gp.dec, cs, 1e-2);
  REQUIRE(static_cast<int>(lr.psi.size()) == cs.N);
  for (const auto& c : lr.columns) {
    // radius 0 only happens when the home patch is its own component
    CHECK((c.radius >= 1 || c.full_support));
    CHECK(c.index >= 0);
  }
  CHECK(lr.max_radius >= 2);
  // localized operator's A_st is symmetric PSD-ish and matches the triple product
  CompressedOperator comp = make_localized_operator(gp.A, cs, lr.psi, 1e-2);
  comp.a_st_sparse.check_symmetric(1e-10);
  for (int i = 0; i < std::min(5, comp.N); ++i) {
    Vec ci(gp.dec.n, 0.0);
    for (const auto& [r, v] : comp.psi[i]) ci[r] = v;
    Vec Aci = gp.A.apply(ci);
    double diag = 0.0;
    for (const auto& [r, v] : comp.psi[i]) diag += v * Aci[r];
    CHECK(comp.a_st_sparse.at(i, i) == doctest::Approx(diag).epsilon(1e-10));
  }
}

TEST_CASE("decay certificate holds with the measured alpha") {
  GeneratedProblem gp = random_geometric_laplacian(120, 2, 3.0, 77);
  Partition part = pair_cluster(gp.dec, std::sqrt(1e-2), 50.0);
  CoarseSpace cs = construct_phi(gp.dec, part, 1);
  CompressedOperator exact = exact_psi(gp.A, cs);
  auto adj = patch_adjacency(gp.dec, cs.part);
  PartitionMeasurements m = partition_measurements(gp.dec, part, 1, true);
  // pick a column whose home patch has neighbors, so the radius can grow
  int col = cs.N / 2;
  while (adj[cs.patch_of_column(col)].empty()) col = (col + 1) % cs.N;
  int home = cs.patch_of_column(col);
  DecayCertificate cert = decay_certificate(gp.A, cs, adj, exact, col,
                                            m.per_patch[home].alpha, m.per_patch[home].delta,
                                            1e-9);
  CHECK(cert.holds);
  CHECK(cert.error2.size() >= 2);
  // error decreases with radius
  CHECK(cert.error2.back() <= cert.error2.front() * (1 + 1e-10) + 1e-12);
}
