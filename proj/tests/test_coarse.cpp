#include "edsolve/coarse.hpp"

#include "edsolve/partition.hpp"
#include "edsolve/problems.hpp"
#include "fixtures.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>

using namespace eds;

namespace {
struct Setup {
  GeneratedProblem gp;
  Partition part;
  CoarseSpace cs;
};

Setup make_setup(int n, uint64_t seed, double eps2 = 1e-2) {
  Setup s;
  s.gp = random_geometric_laplacian(n, 2, 3.0, seed);
  s.part = pair_cluster(s.gp.dec, std::sqrt(eps2), 50.0);
  s.cs = construct_phi(s.gp.dec, s.part, 1);
  return s;
}
}  // namespace

TEST_CASE("construct_phi produces orthonormal sign-fixed interior eigenvectors") {
  Setup s = make_setup(120, 2);
  for (int j = 0; j < s.part.size(); ++j) {
    const auto& block = s.cs.phi_blocks[j];
    for (size_t a = 0; a < block.size(); ++a) {
      CHECK(norm2(block[a]) == doctest::Approx(1.0).epsilon(1e-10));
      // sign convention: first significant component positive
      double mx = 0.0;
      for (double x : block[a]) mx = std::max(mx, std::abs(x));
      for (double x : block[a]) {
        if (std::abs(x) > 1e-12 * mx) {
          CHECK(x > 0.0);
          break;
        }
      }
      for (size_t b = a + 1; b < block.size(); ++b)
        CHECK(std::abs(dot(block[a], block[b])) < 1e-10);
    }
    // residual against the interior energy
    if (s.part.patches[j].size() > 1) {
      DenseSymMatrix lo = interior_energy(s.gp.dec, s.part.patches[j]);
      EigResult e = dense_sym_eig(lo, 1);
      Vec r = lo.apply(block[0]);
      axpy(-e.values[0], block[0], r);
      CHECK(norm2(r) < 1e-8);
    }
  }
}

TEST_CASE("phi apply and transpose are adjoint") {
  Setup s = make_setup(80, 9);
  SplitMix64 g = SplitMix64::stream(1, 0);
  Vec x(s.cs.n), y(s.cs.N);
  for (double& v : x) v = g.uniform(-1, 1);
  for (double& v : y) v = g.uniform(-1, 1);
  CHECK(dot(s.cs.apply_phi(y), x) == doctest::Approx(dot(y, s.cs.apply_phi_t(x))).epsilon(1e-12));
}

TEST_CASE("exact psi is biorthogonal to phi and energy-optimal") {
  Setup s = make_setup(60, 4);
  CompressedOperator comp = exact_psi(s.gp.A, s.cs);
  // Phi^T Psi = I
  for (int i = 0; i < comp.N; ++i) {
    Vec col(s.cs.n, 0.0);
    for (const auto& [r, v] : comp.psi[i]) col[r] = v;
    Vec c = s.cs.apply_phi_t(col);
    for (int k = 0; k < comp.N; ++k)
      CHECK(c[k] == doctest::Approx(i == k ? 1.0 : 0.0).epsilon(1e-8));
  }
  // optimality: perturbing along feasible directions only increases energy
  SplitMix64 g = SplitMix64::stream(8, 0);
  Vec psi0(s.cs.n, 0.0);
  for (const auto& [r, v] : comp.psi[0]) psi0[r] = v;
  double base = dot(psi0, s.gp.A.apply(psi0));
  for (int t = 0; t < 100; ++t) {
    Vec z(s.cs.n);
    for (double& v : z) v = g.uniform(-1, 1);
    // project out the Phi constraints: z <- z - Phi (Phi^T z)
    Vec c = s.cs.apply_phi_t(z);
    axpy(-1.0, s.cs.apply_phi(c), z);
    Vec pert = psi0;
    axpy(0.05, z, pert);
    CHECK(dot(pert, s.gp.A.apply(pert)) >= base - 1e-10);
  }
  // A_st agrees with Psi^T A Psi
  for (int i = 0; i < comp.N; ++i) {
    Vec ci(s.cs.n, 0.0);
    for (const auto& [r, v] : comp.psi[i]) ci[r] = v;
    Vec Aci = s.gp.A.apply(ci);
    for (int k = i; k < comp.N; ++k) {
      double sum = 0.0;
      for (const auto& [r, v] : comp.psi[k]) sum += v * Aci[r];
      CHECK(sum == doctest::Approx(comp.a_st_dense.at(i, k)).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("compress_apply with Phi = identity returns the exact inverse") {
  GeneratedProblem gp = random_geometric_laplacian(40, 2, 3.0, 12);
  Partition part = singleton_partition(gp.dec.n);
  CoarseSpace cs = construct_phi(gp.dec, part, 1);  // q >= |P| everywhere
  CompressedOperator comp = exact_psi(gp.A, cs);
  Vec b(gp.dec.n);
  SplitMix64 g = SplitMix64::stream(2, 0);
  for (double& v : b) v = g.uniform(-1, 1);
  Vec x = compress_apply(comp, b);
  Vec xd = dense_solve(to_dense(gp.A), b);
  for (int i = 0; i < gp.dec.n; ++i) CHECK(x[i] == doctest::Approx(xd[i]).epsilon(1e-8));
}

TEST_CASE("compression error is bounded by eps^2") {
  Setup s = make_setup(200, 6, 1e-2);
  PartitionMeasurements m = partition_measurements(s.gp.dec, s.part, 1);
  CompressedOperator comp = exact_psi(s.gp.A, s.cs);
  double err = compression_error(s.gp.A, comp);
  CHECK(err >= 0.0);
  CHECK(err <= m.eps * m.eps * (1 + 1e-6));
}

TEST_CASE("stiffness condition report against the theorem bound") {
  Setup s = make_setup(150, 7, 1e-2);
  PartitionMeasurements m = partition_measurements(s.gp.dec, s.part, 1);
  CompressedOperator comp = exact_psi(s.gp.A, s.cs);
  StiffnessReport rep = stiffness_condition_report(s.gp.A, comp, m.delta);
  CHECK(rep.lambda_min > 0.0);
  CHECK(rep.kappa >= 1.0);
  CHECK_FALSE(rep.violated);
}

TEST_CASE("csx round trip") {
  Setup s = make_setup(70, 14);
  std::string path = "test_csx_roundtrip.csx";
  write_csx(path, s.cs);
  CoarseSpace back = read_csx(path);
  CHECK(back.n == s.cs.n);
  CHECK(back.N == s.cs.N);
  REQUIRE(back.part.patches == s.cs.part.patches);
  for (int j = 0; j < s.part.size(); ++j) {
    REQUIRE(back.phi_blocks[j].size() == s.cs.phi_blocks[j].size());
    for (size_t c = 0; c < back.phi_blocks[j].size(); ++c)
      for (size_t r = 0; r < back.phi_blocks[j][c].size(); ++r)
        CHECK(back.phi_blocks[j][c][r] == s.cs.phi_blocks[j][c][r]);
  }
  std::remove(path.c_str());
}
