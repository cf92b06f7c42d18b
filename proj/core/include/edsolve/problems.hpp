#pragma once
// Reproducible test-problem generators: geometric graph Laplacians, KNN
// graphs, a rolled-surface point cloud, and finite-difference / P1 finite
// element discretizations with rough high-contrast coefficients.

#include "edsolve/energy.hpp"

#include <array>
#include <cstdint>
#include <map>

namespace eds {

// splitmix64; independent streams derived from one 64-bit seed.
struct SplitMix64 {
  uint64_t state = 0;

  explicit SplitMix64(uint64_t s = 0) : state(s) {}
  static SplitMix64 stream(uint64_t seed, uint64_t stream_id);

  uint64_t next();
  double uniform();                      // [0, 1)
  double uniform(double lo, double hi);
};

struct GeneratedProblem {
  EnergyDecomposition dec;
  SparseSymMatrix A;
  std::vector<std::array<double, 3>> coords;  // z = 0 for planar problems
  int dim = 0;
  std::string kind;
  std::map<std::string, double> meta;
};

// Uniform points in [0,1]^d, edges where r^2 <= eta / n^(2/d) with weight
// 1/r^2, unit self-loops on every vertex (so ||A^{-1}||_2 <= 1).
GeneratedProblem random_geometric_laplacian(int n, int d, double eta, uint64_t seed);

// Union-of-KNN graph in the unit square: k = 15 inside the ball of radius
// 0.25 around (0.5, 0.5), else k = 5; weights 1/r^2; self-loops c.
GeneratedProblem knn_graph_laplacian(int n, double c, uint64_t seed);

// Rolled spiral surface in 3d, arc-length parametrized in the radial
// coordinate; proximity edges as in the geometric case with the planar
// cutoff r^2 <= eta / n.
GeneratedProblem roll_surface_laplacian(int n, double a, double eta, uint64_t seed);

// 5-point finite differences on the interior of a regular (nx+2) x (ny+2)
// grid; per-edge elements scaled by the coefficient at the edge midpoint;
// edges into the Dirichlet boundary reduce to self-loops. The coefficient
// is 1 on the background and `contrast` on seeded channel cells.
GeneratedProblem fd5_highcontrast(int nx, int ny, double contrast, uint64_t seed);

// P1 elements on a regular triangulation of the unit square with
// a = R(theta) diag(mu e1, mu e2) R(theta)^T, theta = pi (x+y),
// e_i = 1 + U[-0.1, 0.1], mu in {1, contrast} on seeded channels.
// nx x ny interior vertices; homogeneous Dirichlet boundary.
GeneratedProblem fem_anisotropic(int nx, int ny, double contrast, uint64_t seed);

}  // namespace eds
