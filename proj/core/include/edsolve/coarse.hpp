#pragma once
// Coarse space Phi (patch-local interior eigenvectors), complement frames U,
// the exact energy-minimizing basis Psi with stiffness A_st, and desk-scale
// compression-error evaluation.

#include "edsolve/measure.hpp"

#include <optional>

namespace eds {

struct CoarseSpace {
  Partition part;
  int q = 1;
  std::vector<std::vector<Vec>> phi_blocks;  // per patch, q_j columns of length s_j
  std::vector<HouseholderFrame> frames;
  std::vector<int> offset;  // coarse index offset per patch, size M+1
  int n = 0;
  int N = 0;

  int patch_of_column(int i) const;
  Vec apply_phi(const Vec& coarse) const;    // N -> n
  Vec apply_phi_t(const Vec& fine) const;    // n -> N
};

// Per-patch first-q interior eigenvectors (sign: first nonzero component
// positive); q_j = |P_j| when q >= |P_j|. Throws when the interior energy is
// degenerate (lambda_{q+1} <= 1e-12 with q < |P_j|), naming the patch.
CoarseSpace construct_phi(const EnergyDecomposition& dec, const Partition& part, int q);

using SparseColumns = std::vector<std::vector<std::pair<int, double>>>;

struct CompressedOperator {
  int n = 0;
  int N = 0;
  SparseColumns psi;                       // n x N columns
  DenseSymMatrix a_st_dense;               // exact path
  SparseSymMatrix a_st_sparse;             // localized path (Psi^T A Psi)
  bool localized = false;
  double eps_loc = 0.0;
  std::optional<Cholesky> a_st_factor;     // cached for compress_apply

  bool has_dense() const { return a_st_dense.n == N && N > 0; }
};

// Psi = A^{-1} Phi (Phi^T A^{-1} Phi)^{-1}, A_st = (Phi^T A^{-1} Phi)^{-1}.
// Dense solves; desk scale only.
CompressedOperator exact_psi(const SparseSymMatrix& A, const CoarseSpace& coarse);

// Localized-path constructor: A_st = Psi^T A Psi as a sparse triple product.
CompressedOperator make_localized_operator(const SparseSymMatrix& A, const CoarseSpace& coarse,
                                           SparseColumns psi, double eps_loc);

Vec compress_apply(CompressedOperator& comp, const Vec& b);  // Psi A_st^{-1} Psi^T b

// ||A^{-1} - Psi A_st^{-1} Psi^T||_2 by power iteration; desk scale.
double compression_error(const SparseSymMatrix& A, CompressedOperator& comp);

struct StiffnessReport {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double kappa = 0.0;
  double bound = 0.0;  // delta(P) * ||A^{-1}||_2
  bool violated = false;
};

StiffnessReport stiffness_condition_report(const SparseSymMatrix& A, CompressedOperator& comp,
                                           double delta_P);

// CSX1 text format: header "CSX1 n M q N", then per patch
// "j s q_j" vertex list, then q_j columns of s reals each.
void write_csx(const std::string& path, const CoarseSpace& coarse);
CoarseSpace read_csx(const std::string& path);

}  // namespace eds
