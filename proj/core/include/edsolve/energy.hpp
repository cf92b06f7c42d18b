#pragma once
// Energy-decomposition data model: SPSD energy elements, neighboring
// relations, restricted/interior/closed energies, diagonal concentration,
// and partitions of the basis.

#include "edsolve/linalg.hpp"

#include <string>
#include <vector>

namespace eds {

struct EnergyElement {
  std::vector<int> support;  // sorted vertex indices
  DenseSymMatrix local;      // |support| x |support|, PSD
};

struct EnergyDecomposition {
  int n = 0;
  std::vector<EnergyElement> elements;
  // vertex_index[v] = ids of elements E with E ~ v (v^T E v > 0, thresholded
  // at 1e-14 * trace(E) for floating-point elements)
  std::vector<std::vector<int>> vertex_index;

  void build_vertex_index();
  void validate(bool check_psd = false) const;
};

// Does element e neighbor vertex local position? threshold rule shared here.
bool element_touches(const EnergyElement& e, int local_pos);

std::vector<int> element_neighbors(const EnergyDecomposition& dec, int e_id);
const std::vector<int>& vertex_elements(const EnergyDecomposition& dec, int v);
bool adjacent(const EnergyDecomposition& dec, int u, int v);

SparseSymMatrix assemble(const EnergyDecomposition& dec);

// A_S = P_S A P_S as the |S| x |S| principal submatrix; S sorted, no dups.
DenseSymMatrix restricted_energy(const SparseSymMatrix& A, const std::vector<int>& S);

// Sum of elements whose neighbor set lies inside S, in S-local coordinates.
DenseSymMatrix interior_energy(const EnergyDecomposition& dec, const std::vector<int>& S);

// (E^d)_vv = sum_u |v^T E u|, on the element support.
Vec diagonal_concentration(const EnergyElement& e);

// interior + sum over boundary elements of P_S E^d P_S.
DenseSymMatrix closed_energy(const EnergyDecomposition& dec, const std::vector<int>& S);

struct Partition {
  std::vector<std::vector<int>> patches;  // sorted, disjoint, covering [0,n)
  std::vector<int> patch_of;

  int size() const { return static_cast<int>(patches.size()); }
  void rebuild_patch_of(int n);
  void validate(int n) const;
};

Partition singleton_partition(int n);
Partition regular_grid_partition(int nx, int ny, int s);  // s x s blocks over a grid

// EDX1 text format: "EDX1 n m", then per element "k s i_1 ... i_s" followed by
// s(s+1)/2 upper-triangle reals; 17 significant digits.
void write_edx(const std::string& path, const EnergyDecomposition& dec);
EnergyDecomposition read_edx(const std::string& path);

// Partition text format: lines "patch_id: v_1 v_2 ...".
void write_partition(const std::string& path, const Partition& p);
Partition read_partition(const std::string& path, int n);

}  // namespace eds
