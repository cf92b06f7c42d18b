#pragma once
// Localized construction of the energy-minimizing basis: each column is
// computed on a growing union of patch layers, with an a-posteriori decay
// test deciding the final radius.

#include "edsolve/coarse.hpp"

namespace eds {

// Patches are adjacent when some energy element touches vertices of both.
std::vector<std::vector<int>> patch_adjacency(const EnergyDecomposition& dec,
                                              const Partition& part);

// Patch ids within graph distance <= r of patch j0 (sorted).
std::vector<int> patch_layers(const std::vector<std::vector<int>>& adj, int j0, int r);

struct LocalizedColumn {
  int index = -1;       // coarse column index
  int home_patch = -1;
  int radius = 0;       // final layer radius
  bool full_support = false;  // layer growth exhausted every patch
  std::vector<double> w_energy2;   // ||w_k||_A^2, k = 1..radius
  std::vector<double> psi_energy2; // ||psi^k||_A^2, k = 0..radius
  double final_eta = 0.0;
};

struct LocalizeResult {
  SparseColumns psi;  // n x N
  std::vector<LocalizedColumn> columns;
  int max_radius = 0;
  bool any_full_support = false;
};

// Per-radius callback (radius, current iterate as a full-length vector);
// used by the decay diagnostics. May be null.
using RadiusHook = std::function<void(int, const Vec&)>;

// One column, home patch j, local coarse coordinate c within the patch.
// Radii 0 and 1 are always taken; the eta test starts at radius 2.
LocalizedColumn localize_column(const SparseSymMatrix& A, const CoarseSpace& coarse,
                                const std::vector<std::vector<int>>& adj, int column,
                                double eps_loc, Vec& out_column,
                                const RadiusHook& hook = nullptr);

LocalizeResult construct_tilde_psi(const SparseSymMatrix& A, const EnergyDecomposition& dec,
                                   const CoarseSpace& coarse, double eps_loc);

struct DecayCertificate {
  std::vector<double> error2;  // ||psi^k - psi||_A^2 per radius k = 0..
  std::vector<double> bound;   // ((alpha-1)/alpha)^k * delta
  bool holds = true;
};

// Compares the localized iterates of one column against the exact column
// (desk scale: exact operator required).
DecayCertificate decay_certificate(const SparseSymMatrix& A, const CoarseSpace& coarse,
                                   const std::vector<std::vector<int>>& adj,
                                   const CompressedOperator& exact, int column,
                                   double alpha, double delta, double eps_loc);

}  // namespace eds
