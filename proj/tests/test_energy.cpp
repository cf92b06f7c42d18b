#include "edsolve/energy.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <cstdio>

using namespace eds;
using namespace fixtures;

TEST_CASE("chain fixture: restricted, interior and closed energies of the middle block") {
  EnergyDecomposition dec = chain(6);
  SparseSymMatrix A = assemble(dec);
  std::vector<int> S = {1, 2, 3, 4};

  DenseSymMatrix AS = restricted_energy(A, S);
  CHECK(max_abs_diff(AS, dense_of({{2, -1, 0, 0}, {-1, 2, -1, 0}, {0, -1, 2, -1}, {0, 0, -1, 2}})) <
        1e-12);
  DenseSymMatrix lo = interior_energy(dec, S);
  CHECK(max_abs_diff(lo, dense_of({{1, -1, 0, 0}, {-1, 2, -1, 0}, {0, -1, 2, -1}, {0, 0, -1, 1}})) <
        1e-12);
  DenseSymMatrix hi = closed_energy(dec, S);
  CHECK(max_abs_diff(hi, dense_of({{3, -1, 0, 0}, {-1, 2, -1, 0}, {0, -1, 2, -1}, {0, 0, -1, 3}})) <
        1e-12);

  // the closed energy is strictly PD; ones-solve has the known solution
  Vec x = dense_solve(hi, Vec(4, 1.0));
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(x[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(x[2] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(x[3] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("diagonal concentration of a unit edge element") {
  EnergyElement e = edge(0, 1, 1.0);
  Vec d = diagonal_concentration(e);
  CHECK(d[0] == doctest::Approx(2.0));
  CHECK(d[1] == doctest::Approx(2.0));
}

TEST_CASE("graph11 fixture reproduces the six reference patch energies") {
  EnergyDecomposition dec = graph11();
  std::vector<int> P1 = {0, 1, 2}, P2 = {3, 4, 5, 6}, P3 = {7, 8, 9, 10};

  CHECK(max_abs_diff(interior_energy(dec, P1),
                     dense_of({{4, -2, -2}, {-2, 4, -2}, {-2, -2, 4}})) < 1e-12);
  CHECK(max_abs_diff(interior_energy(dec, P2),
                     dense_of({{5, -2, -1, -2}, {-2, 4, -2, 0}, {-1, -2, 5, -2}, {-2, 0, -2, 4}})) <
        1e-12);
  CHECK(max_abs_diff(interior_energy(dec, P3),
                     dense_of({{4, -2, -2, 0}, {-2, 5, -1, -2}, {-2, -1, 5, -2}, {0, -2, -2, 4}})) <
        1e-12);
  CHECK(max_abs_diff(closed_energy(dec, P1),
                     dense_of({{6, -2, -2}, {-2, 6, -2}, {-2, -2, 8}})) < 1e-12);
  CHECK(max_abs_diff(closed_energy(dec, P2),
                     dense_of({{7, -2, -1, -2}, {-2, 4, -2, 0}, {-1, -2, 7, -2}, {-2, 0, -2, 8}})) <
        1e-12);
  CHECK(max_abs_diff(closed_energy(dec, P3),
                     dense_of({{6, -2, -2, 0}, {-2, 5, -1, -2}, {-2, -1, 9, -2}, {0, -2, -2, 6}})) <
        1e-12);

  // assembled row sums vanish (pure graph Laplacian)
  SparseSymMatrix L = assemble(dec);
  Vec ones(11, 1.0);
  Vec r = L.apply(ones);
  for (double v : r) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("energy sandwich on the graph fixture") {
  EnergyDecomposition dec = graph11();
  SparseSymMatrix A = assemble(dec);
  for (const auto& S :
       {std::vector<int>{0, 1, 2}, std::vector<int>{2, 3, 6, 9}, std::vector<int>{5}}) {
    DenseSymMatrix AS = restricted_energy(A, S);
    CHECK(min_eig_diff(AS, interior_energy(dec, S)) > -1e-10);
    CHECK(min_eig_diff(closed_energy(dec, S), AS) > -1e-10);
  }
}

TEST_CASE("vertex index uses the quadratic-form neighboring rule") {
  EnergyDecomposition dec;
  dec.n = 3;
  // element supported on {0,1,2} but with a zero row/column at vertex 2
  EnergyElement e;
  e.support = {0, 1, 2};
  e.local = DenseSymMatrix(3);
  e.local.at(0, 0) = 1;
  e.local.at(1, 1) = 1;
  e.local.at(0, 1) = e.local.at(1, 0) = -1;
  dec.elements.push_back(e);
  dec.build_vertex_index();
  CHECK(dec.vertex_index[0].size() == 1);
  CHECK(dec.vertex_index[1].size() == 1);
  CHECK(dec.vertex_index[2].empty());
  // hence {0,1} already contains the element as interior
  DenseSymMatrix lo = interior_energy(dec, {0, 1});
  CHECK(lo.at(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("edx round trip") {
  EnergyDecomposition dec = graph11();
  std::string path = "test_edx_roundtrip.edx";
  write_edx(path, dec);
  EnergyDecomposition back = read_edx(path);
  REQUIRE(back.n == dec.n);
  REQUIRE(back.elements.size() == dec.elements.size());
  for (size_t k = 0; k < dec.elements.size(); ++k) {
    CHECK(back.elements[k].support == dec.elements[k].support);
    CHECK(max_abs_diff(back.elements[k].local, dec.elements[k].local) == 0.0);
  }
  std::remove(path.c_str());
}

TEST_CASE("partition file round trip and validation") {
  Partition p;
  p.patches = {{0, 1, 2}, {3, 4, 5, 6}, {7, 8, 9, 10}};
  p.rebuild_patch_of(11);
  p.validate(11);
  std::string path = "test_partition_roundtrip.txt";
  write_partition(path, p);
  Partition back = read_partition(path, 11);
  CHECK(back.patches == p.patches);
  std::remove(path.c_str());
}

TEST_CASE("regular grid partition covers the grid with s x s blocks") {
  Partition p = regular_grid_partition(6, 4, 2);
  p.validate(24);
  CHECK(p.size() == 6);
  for (const auto& patch : p.patches) CHECK(patch.size() == 4);
}
