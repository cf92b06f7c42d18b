#pragma once
// Multiresolution decomposition: repeated pair-clustering, coarse-basis
// construction and operator reduction, with the companion multilevel solver
// and recovery diagnostics.

#include "edsolve/localize.hpp"
#include "edsolve/partition.hpp"

namespace eds {

struct LevelRecord {
  int level = 0;             // 1-based coarse level index
  Partition part;            // partition of the previous level's dofs
  CoarseSpace coarse;        // Phi blocks and complement frames
  SparseColumns psi;         // n_prev x n_coarse basis columns
  SparseSymMatrix a_reduced; // A^(k), assembled from the reduced decomposition
  SparseSymMatrix b_matrix;  // B^(k) = U^T A^(k-1) U
  double eps_target = 0.0;
  double eps_measured = 0.0;
  double delta_measured = 0.0;
  double kappa_b = 0.0;      // measured condition number of B^(k)
  int n_prev = 0;
  int n_coarse = 0;
  int b_dim = 0;
};

struct MMDHierarchy {
  SparseSymMatrix a0;
  std::vector<LevelRecord> levels;
  double kappa_bottom = 0.0;  // measured condition of A^(K)

  const SparseSymMatrix& level_matrix(int k) const {  // A^(k), k = 0..K
    return k == 0 ? a0 : levels[k - 1].a_reduced;
  }
  int depth() const { return static_cast<int>(levels.size()); }
};

struct MMDConfig {
  std::vector<double> eps2_schedule;  // per-level eps^2; last entry repeats
  double c = 50.0;
  int q = 1;
  bool relaxed_loc = true;   // eps_loc = eps (relaxed) instead of eps^2
  bool exact_levels = false; // dense exact Psi per level (verification only)
  int n_floor = 512;         // stop once the coarse size reaches this
  int max_levels = 16;
  bool measure_condition = true;
};

// B = U^T A U materialized per adjacent patch-pair block (complement
// coordinates ordered patch by patch).
SparseSymMatrix build_b_matrix(const SparseSymMatrix& A, const CoarseSpace& coarse);

// New decomposition on coarse dofs: one reduced element per patch interior
// plus one per boundary element, each congruence-transformed through Psi.
EnergyDecomposition reduced_inherited(const EnergyDecomposition& dec, const Partition& part,
                                      const SparseColumns& psi, int n_coarse);

MMDHierarchy mmd_decompose(const EnergyDecomposition& dec0, const MMDConfig& cfg);

struct SolveStats {
  Vec x;
  std::vector<int> level_iterations;  // PCG iterations on each B^(k)
  int bottom_iterations = 0;          // 0 when solved by dense factorization
  int compensation_iterations = 0;
  double rel_residual = 0.0;
  bool converged = false;
};

struct SolveConfig {
  double level_tol = 1e-8;        // PCG tolerance on the B systems
  double final_tol = 1e-5;        // compensation target on the full system
  int max_compensation = 500;
  bool compensate = true;
};

SolveStats mmd_solve(const MMDHierarchy& h, const Vec& b, const SolveConfig& cfg = {});

struct CompressionBudget {
  std::vector<double> measured;  // ||A^{-1} - composite projection||_2 per level
  std::vector<double> bound;     // cumulative sum of eps^(k)^2 targets
  bool holds = true;
};

// Desk scale: composite coarse spaces evaluated exactly against A^{-1}.
CompressionBudget accumulated_compression_error(const MMDHierarchy& h);

struct EigenRecovery {
  Vec approx;   // approximations to the smallest eigenvalues of A, ascending
  std::vector<Vec> vectors;  // lifted, unit 2-norm
};

EigenRecovery eigen_recovery(const SparseSymMatrix& A, const CompressedOperator& comp,
                             int count);

// Directory layout: A_0.mtx, level_k/{space.csx,psi.mtx,A.mtx,B.mtx},
// manifest.json with a Level/Size/#Nonzeros/Condition Number/Complexity table.
void save_hierarchy(const std::string& dir, const MMDHierarchy& h);
MMDHierarchy load_hierarchy(const std::string& dir);

}  // namespace eds
