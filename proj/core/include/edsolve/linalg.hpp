#pragma once
// Self-contained numerical kernels: sparse symmetric matrices, a dense
// symmetric eigensolver (tridiagonalization + QL), Householder complement frames,
// preconditioned conjugate gradients, and dense oracles used by tests.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace eds {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);
void axpy(double a, const Vec& x, Vec& y);  // y += a*x
void scal(double a, Vec& x);

struct Triplet {
  int row, col;
  double value;
};

// Compressed-row symmetric sparse matrix, full storage (both triangles).
// Structurally symmetric by construction; column indices strictly
// increasing per row; no explicit zeros.
struct SparseSymMatrix {
  int n = 0;
  std::vector<int> row_ptr;  // size n+1
  std::vector<int> col;
  std::vector<double> val;

  static SparseSymMatrix from_triplets(int n, std::vector<Triplet> ts);

  int nnz() const { return static_cast<int>(col.size()); }
  Vec apply(const Vec& x) const;
  Vec diagonal() const;
  double at(int i, int j) const;  // stored entry or 0
  void check_symmetric(double rel_tol = 1e-12) const;
};

Vec spmv(const SparseSymMatrix& A, const Vec& x);

struct DenseSymMatrix {
  int n = 0;
  std::vector<double> a;  // row-major n*n

  DenseSymMatrix() = default;
  explicit DenseSymMatrix(int dim) : n(dim), a(static_cast<size_t>(dim) * dim, 0.0) {}

  double& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
  double at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
  Vec apply(const Vec& x) const;
  double frobenius() const;
  void check_symmetric(double rel_tol = 1e-12) const;
};

DenseSymMatrix to_dense(const SparseSymMatrix& A);
SparseSymMatrix to_sparse(const DenseSymMatrix& A, double drop_tol = 0.0);

struct EigResult {
  Vec values;                     // ascending, size k
  std::vector<Vec> vectors;       // orthonormal, vectors[i] pairs values[i]
};

// Householder tridiagonalization followed by implicit-shift QL. Returns the
// first k eigenpairs in ascending order; deterministic, ties keep the
// internal ordering (stable sort).
EigResult dense_sym_eig(const DenseSymMatrix& M, int k);

// q Householder reflectors whose product H_1*...*H_q is an orthogonal s x s
// matrix [Q, U] with span(Q) = span(Phi_j). Reflectors are unit-norm
// (H = I - 2 h h^T); a zero reflector stands for the identity.
struct HouseholderFrame {
  int s = 0;  // patch dimension
  int q = 0;  // rank of Phi block
  std::vector<Vec> h;

  int complement_dim() const { return s - q; }
};

// phi: s x q column-major blocks given as q columns of length s, orthonormal.
HouseholderFrame householder_extend(const std::vector<Vec>& phi_columns);

enum class ComplementMode { UT_x, U_y };

// UT_x: input length s, output length s-q (U^T x).
// U_y:  input length s-q, output length s (U y).
Vec apply_complement(const HouseholderFrame& frame, ComplementMode mode, const Vec& v);

// Q-side companions (columns 0..q-1 of the implied orthogonal factor).
// Columns of Q equal the phi columns up to a per-column sign, which the
// stable reflector choice leaves free.
Vec apply_q_transpose(const HouseholderFrame& frame, const Vec& x);  // length s -> q
Vec apply_q(const HouseholderFrame& frame, const Vec& y);            // length q -> s

struct DiagonalPreconditioner {
  Vec inv_diag;  // strictly positive

  static DiagonalPreconditioner from_matrix_diagonal(const Vec& diag);
  Vec apply(const Vec& r) const;
};

using LinOp = std::function<Vec(const Vec&)>;

struct PCGResult {
  Vec x;
  int iterations = 0;
  double rel_residual = 0.0;
  bool converged = false;
  bool indefinite = false;  // p^T A p <= 0 seen; aborted with best iterate
};

// Stops on the plain residual 2-norm: ||b - A x|| <= rel_tol * ||b||.
PCGResult pcg_solve(const LinOp& op, const Vec& b, const DiagonalPreconditioner* M,
                    double rel_tol, int max_iter, const Vec* x0 = nullptr);

// Operator-preconditioned variant; precond must act as a fixed SPD
// approximation of op^{-1}.
PCGResult pcg_solve(const LinOp& op, const Vec& b, const LinOp& precond, double rel_tol,
                    int max_iter, const Vec* x0 = nullptr);

struct Cholesky {
  int n = 0;
  std::vector<double> l;  // lower triangle, row-major
  bool ok = false;

  Vec solve(const Vec& b) const;
};

Cholesky cholesky(const DenseSymMatrix& M);
Vec dense_solve(const DenseSymMatrix& M, const Vec& b);
DenseSymMatrix dense_inverse_oracle(const DenseSymMatrix& M);

// Power iteration for the largest |eigenvalue| of a symmetric operator.
double spectral_norm(const LinOp& op, int dim, double tol = 1e-6, int max_iter = 20000);

// Matrix Market coordinate (real, symmetric) I/O; 17 significant digits.
void write_matrix_market(const std::string& path, const SparseSymMatrix& A);
SparseSymMatrix read_matrix_market(const std::string& path);

// General (rectangular, possibly unsymmetric) sparse columns I/O, used for
// localized basis matrices.
void write_matrix_market_columns(const std::string& path, int rows,
                                 const std::vector<std::vector<std::pair<int, double>>>& cols);
std::vector<std::vector<std::pair<int, double>>> read_matrix_market_columns(
    const std::string& path, int* rows_out = nullptr);

}  // namespace eds
