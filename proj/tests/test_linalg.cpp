#include "edsolve/linalg.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace eds;

namespace {
DenseSymMatrix tridiag(int n) {
  DenseSymMatrix m(n);
  for (int i = 0; i < n; ++i) {
    m.at(i, i) = 2.0;
    if (i + 1 < n) m.at(i, i + 1) = m.at(i + 1, i) = -1.0;
  }
  return m;
}
}  // namespace

TEST_CASE("jacobi eigensolver matches the tridiagonal spectrum") {
  // eigenvalues of tridiag(-1,2,-1) of dim n are 2 - 2 cos(k pi/(n+1))
  for (int n : {3, 5, 8}) {
    EigResult e = dense_sym_eig(tridiag(n), n);
    for (int k = 1; k <= n; ++k)
      CHECK(e.values[k - 1] ==
            doctest::Approx(2.0 - 2.0 * std::cos(k * M_PI / (n + 1))).epsilon(1e-12));
    // eigenvectors: residual check
    DenseSymMatrix A = tridiag(n);
    for (int k = 0; k < n; ++k) {
      Vec r = A.apply(e.vectors[k]);
      axpy(-e.values[k], e.vectors[k], r);
      CHECK(norm2(r) < 1e-10);
    }
  }
}

TEST_CASE("sparse assembly, apply and round trip") {
  std::vector<Triplet> ts = {{0, 1, -1}, {1, 0, -1}, {0, 0, 2}, {1, 1, 2},
                             {2, 2, 2},  {1, 2, -1}, {2, 1, -1}, {2, 2, 0.0}};
  SparseSymMatrix A = SparseSymMatrix::from_triplets(3, ts);
  CHECK(A.nnz() == 7);
  CHECK(A.at(0, 1) == -1.0);
  CHECK(A.at(0, 2) == 0.0);
  Vec x = {1, 2, 3};
  Vec y = A.apply(x);
  CHECK(y[0] == doctest::Approx(0.0));
  CHECK(y[1] == doctest::Approx(0.0));
  CHECK(y[2] == doctest::Approx(4.0));
}

TEST_CASE("householder frames give an orthogonal [Q,U] with span(Q)=span(Phi)") {
  std::mt19937 rng(41);
  std::normal_distribution<double> dist;
  int s = 7, q = 2;
  // random orthonormal q columns by Gram-Schmidt
  std::vector<Vec> phi(q, Vec(s));
  for (auto& c : phi)
    for (double& x : c) x = dist(rng);
  for (int a = 0; a < q; ++a) {
    for (int b = 0; b < a; ++b) axpy(-dot(phi[a], phi[b]), phi[b], phi[a]);
    scal(1.0 / norm2(phi[a]), phi[a]);
  }
  HouseholderFrame f = householder_extend(phi);
  CHECK(f.complement_dim() == s - q);

  // Q^T phi_a = +-e_a (sign per column is free) and U^T phi_a = 0
  for (int a = 0; a < q; ++a) {
    Vec qc = apply_q_transpose(f, phi[a]);
    for (int b = 0; b < q; ++b)
      CHECK(std::abs(qc[b]) == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
    Vec uc = apply_complement(f, ComplementMode::UT_x, phi[a]);
    for (double v : uc) CHECK(std::abs(v) < 1e-12);
  }
  // U^T U = I
  for (int a = 0; a < s - q; ++a) {
    Vec e(s - q, 0.0);
    e[a] = 1.0;
    Vec col = apply_complement(f, ComplementMode::U_y, e);
    Vec back = apply_complement(f, ComplementMode::UT_x, col);
    for (int b = 0; b < s - q; ++b)
      CHECK(back[b] == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-12));
  }
  // round trip through Q
  Vec z(q);
  for (double& x : z) x = dist(rng);
  Vec lifted = apply_q(f, z);
  Vec zz = apply_q_transpose(f, lifted);
  for (int b = 0; b < q; ++b) CHECK(zz[b] == doctest::Approx(z[b]).epsilon(1e-12));
}

TEST_CASE("pcg matches the dense solve on the 5-dim chain matrix") {
  DenseSymMatrix A = tridiag(5);
  Vec b(5, 1.0);
  Vec xd = dense_solve(A, b);
  PCGResult r = pcg_solve([&A](const Vec& v) { return A.apply(v); }, b, nullptr, 1e-10, 200);
  CHECK(r.converged);
  for (int i = 0; i < 5; ++i) CHECK(r.x[i] == doctest::Approx(xd[i]).epsilon(1e-8));
}

TEST_CASE("pcg honors an initial guess and the plain residual stopping rule") {
  DenseSymMatrix A = tridiag(6);
  Vec b(6, 1.0);
  Vec x0 = dense_solve(A, b);
  PCGResult r = pcg_solve([&A](const Vec& v) { return A.apply(v); }, b, nullptr, 1e-10, 100, &x0);
  CHECK(r.converged);
  CHECK(r.iterations == 0);
}

TEST_CASE("cholesky and the dense inverse oracle agree") {
  DenseSymMatrix A = tridiag(6);
  Cholesky c = cholesky(A);
  REQUIRE(c.ok);
  DenseSymMatrix inv = dense_inverse_oracle(A);
  Vec b = {1, -2, 0, 3, 1, 1};
  Vec x1 = c.solve(b);
  Vec x2 = inv.apply(b);
  for (int i = 0; i < 6; ++i) CHECK(x1[i] == doctest::Approx(x2[i]).epsilon(1e-10));
}

TEST_CASE("cholesky reports indefinite input") {
  DenseSymMatrix M(2);
  M.at(0, 0) = 1;
  M.at(1, 1) = -1;
  CHECK_FALSE(cholesky(M).ok);
}

TEST_CASE("spectral norm by power iteration") {
  DenseSymMatrix A = tridiag(9);
  double expect = 2.0 - 2.0 * std::cos(9 * M_PI / 10.0);
  double got = spectral_norm([&A](const Vec& v) { return A.apply(v); }, 9, 1e-10, 50000);
  CHECK(got == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("matrix market round trip preserves values exactly") {
  std::vector<Triplet> ts = {{0, 0, 1.5}, {1, 1, 2.0}, {2, 2, 1.0 / 3.0},
                             {0, 2, -0.125}, {2, 0, -0.125}};
  SparseSymMatrix A = SparseSymMatrix::from_triplets(3, ts);
  std::string path = "test_mm_roundtrip.mtx";
  write_matrix_market(path, A);
  SparseSymMatrix B = read_matrix_market(path);
  REQUIRE(B.n == 3);
  REQUIRE(B.nnz() == A.nnz());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(B.at(i, j) == A.at(i, j));
  std::remove(path.c_str());
}

TEST_CASE("rectangular column file round trip") {
  std::vector<std::vector<std::pair<int, double>>> cols = {
      {{0, 1.25}, {3, -2.5}}, {{1, 0.001}, {2, 7.0}, {4, -1.0 / 7.0}}};
  std::string path = "test_cols_roundtrip.mtx";
  write_matrix_market_columns(path, 5, cols);
  int rows = 0;
  auto back = read_matrix_market_columns(path, &rows);
  CHECK(rows == 5);
  REQUIRE(back.size() == cols.size());
  for (size_t c = 0; c < cols.size(); ++c) {
    REQUIRE(back[c].size() == cols[c].size());
    for (size_t k = 0; k < cols[c].size(); ++k) {
      CHECK(back[c][k].first == cols[c][k].first);
      CHECK(back[c][k].second == cols[c][k].second);
    }
  }
  std::remove(path.c_str());
}
