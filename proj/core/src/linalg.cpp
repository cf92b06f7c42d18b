#include "edsolve/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace eds {

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

void axpy(double a, const Vec& x, Vec& y) {
  for (size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void scal(double a, Vec& x) {
  for (double& v : x) v *= a;
}

SparseSymMatrix SparseSymMatrix::from_triplets(int n, std::vector<Triplet> ts) {
  for (const Triplet& t : ts) {
    if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n)
      throw std::invalid_argument("triplet index out of range");
  }
  // stable: duplicate (i,j) and its mirror (j,i) keep the same insertion
  // order, so symmetric inputs sum to bit-identical values on both sides
  std::stable_sort(ts.begin(), ts.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseSymMatrix A;
  A.n = n;
  A.row_ptr.assign(n + 1, 0);
  size_t i = 0;
  while (i < ts.size()) {
    size_t j = i;
    double v = 0.0;
    while (j < ts.size() && ts[j].row == ts[i].row && ts[j].col == ts[i].col) v += ts[j++].value;
    if (v != 0.0) {
      A.col.push_back(ts[i].col);
      A.val.push_back(v);
      A.row_ptr[ts[i].row + 1]++;
    }
    i = j;
  }
  for (int r = 0; r < n; ++r) A.row_ptr[r + 1] += A.row_ptr[r];
  A.check_symmetric();
  return A;
}

Vec SparseSymMatrix::apply(const Vec& x) const {
  if (static_cast<int>(x.size()) != n) throw std::invalid_argument("spmv dimension mismatch");
  Vec y(n, 0.0);
  for (int r = 0; r < n; ++r) {
    double s = 0.0;
    for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += val[k] * x[col[k]];
    y[r] = s;
  }
  return y;
}

Vec SparseSymMatrix::diagonal() const {
  Vec d(n, 0.0);
  for (int r = 0; r < n; ++r)
    for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
      if (col[k] == r) d[r] = val[k];
  return d;
}

double SparseSymMatrix::at(int i, int j) const {
  for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
    if (col[k] == j) return val[k];
  return 0.0;
}

void SparseSymMatrix::check_symmetric(double rel_tol) const {
  for (int r = 0; r < n; ++r) {
    for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
      double vt = at(col[k], r);
      double scale = std::max(std::abs(val[k]), std::abs(vt));
      if (std::abs(vt - val[k]) > rel_tol * std::max(scale, 1e-300))
        throw std::runtime_error("matrix not structurally symmetric");
    }
  }
}

Vec spmv(const SparseSymMatrix& A, const Vec& x) { return A.apply(x); }

Vec DenseSymMatrix::apply(const Vec& x) const {
  if (static_cast<int>(x.size()) != n) throw std::invalid_argument("dense apply dim mismatch");
  Vec y(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    const double* row = a.data() + static_cast<size_t>(i) * n;
    for (int j = 0; j < n; ++j) s += row[j] * x[j];
    y[i] = s;
  }
  return y;
}

double DenseSymMatrix::frobenius() const {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

void DenseSymMatrix::check_symmetric(double rel_tol) const {
  double f = std::max(frobenius(), 1e-300);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(at(i, j) - at(j, i)) > rel_tol * f)
        throw std::runtime_error("dense matrix not symmetric");
}

DenseSymMatrix to_dense(const SparseSymMatrix& A) {
  DenseSymMatrix D(A.n);
  for (int r = 0; r < A.n; ++r)
    for (int k = A.row_ptr[r]; k < A.row_ptr[r + 1]; ++k) D.at(r, A.col[k]) = A.val[k];
  return D;
}

SparseSymMatrix to_sparse(const DenseSymMatrix& A, double drop_tol) {
  std::vector<Triplet> ts;
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j)
      if (std::abs(A.at(i, j)) > drop_tol) ts.push_back({i, j, A.at(i, j)});
  return SparseSymMatrix::from_triplets(A.n, std::move(ts));
}

EigResult dense_sym_eig(const DenseSymMatrix& M, int k) {
  M.check_symmetric(1e-10);
  int n = M.n;
  if (k < 1 || k > n) throw std::invalid_argument("dense_sym_eig: bad k");

  // Householder tridiagonalization with accumulated transformations,
  // followed by implicit-shift QL on the tridiagonal form.
  std::vector<double> v = M.a;  // becomes the eigenvector matrix (columns)
  auto V = [&](int i, int j) -> double& { return v[static_cast<size_t>(i) * n + j]; };
  Vec d(n), e(n, 0.0);

  for (int j = 0; j < n; ++j) d[j] = V(n - 1, j);
  for (int i = n - 1; i > 0; --i) {
    double scale = 0.0, h = 0.0;
    for (int kk = 0; kk < i; ++kk) scale += std::abs(d[kk]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (int j = 0; j < i; ++j) {
        d[j] = V(i - 1, j);
        V(i, j) = 0.0;
        V(j, i) = 0.0;
      }
    } else {
      for (int kk = 0; kk < i; ++kk) {
        d[kk] /= scale;
        h += d[kk] * d[kk];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (int j = 0; j < i; ++j) e[j] = 0.0;
      for (int j = 0; j < i; ++j) {
        f = d[j];
        V(j, i) = f;
        g = e[j] + V(j, j) * f;
        for (int kk = j + 1; kk <= i - 1; ++kk) {
          g += V(kk, j) * d[kk];
          e[kk] += V(kk, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (int j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      double hh = f / (h + h);
      for (int j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (int j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (int kk = j; kk <= i - 1; ++kk) V(kk, j) -= f * e[kk] + g * d[kk];
        d[j] = V(i - 1, j);
        V(i, j) = 0.0;
      }
    }
    d[i] = h;
  }
  for (int i = 0; i < n - 1; ++i) {
    V(n - 1, i) = V(i, i);
    V(i, i) = 1.0;
    double h = d[i + 1];
    if (h != 0.0) {
      for (int kk = 0; kk <= i; ++kk) d[kk] = V(kk, i + 1) / h;
      for (int j = 0; j <= i; ++j) {
        double g = 0.0;
        for (int kk = 0; kk <= i; ++kk) g += V(kk, i + 1) * V(kk, j);
        for (int kk = 0; kk <= i; ++kk) V(kk, j) -= g * d[kk];
      }
    }
    for (int kk = 0; kk <= i; ++kk) V(kk, i + 1) = 0.0;
  }
  for (int j = 0; j < n; ++j) {
    d[j] = V(n - 1, j);
    V(n - 1, j) = 0.0;
  }
  V(n - 1, n - 1) = 1.0;
  e[0] = 0.0;

  // QL with implicit shifts
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  double f = 0.0, tst1 = 0.0;
  const double eps = std::ldexp(1.0, -52);
  for (int l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    int m = l;
    while (m < n && std::abs(e[m]) > eps * tst1) ++m;
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > 80) throw std::runtime_error("dense_sym_eig: QL did not converge");
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        double dl1 = d[l + 1];
        double h = g - d[l];
        for (int i = l + 2; i < n; ++i) d[i] -= h;
        f += h;
        p = d[m];
        double c = 1.0, c2 = c, c3 = c;
        double el1 = e[l + 1], s = 0.0, s2 = 0.0;
        for (int i = m - 1; i >= l; --i) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          for (int kk = 0; kk < n; ++kk) {
            h = V(kk, i + 1);
            V(kk, i + 1) = s * V(kk, i) + c * h;
            V(kk, i) = c * V(kk, i) - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return d[i] < d[j]; });
  EigResult res;
  res.values.resize(k);
  res.vectors.assign(k, Vec(n));
  for (int m = 0; m < k; ++m) {
    int c = order[m];
    res.values[m] = d[c];
    for (int i = 0; i < n; ++i) res.vectors[m][i] = V(i, c);
  }
  return res;
}

HouseholderFrame householder_extend(const std::vector<Vec>& phi_columns) {
  int q = static_cast<int>(phi_columns.size());
  if (q == 0) throw std::invalid_argument("householder_extend: empty block");
  int s = static_cast<int>(phi_columns[0].size());
  if (q > s) throw std::invalid_argument("householder_extend: q > s");

  // Working copy, column-major.
  std::vector<Vec> w = phi_columns;
  HouseholderFrame frame;
  frame.s = s;
  frame.q = q;
  frame.h.assign(q, Vec(s, 0.0));

  for (int j = 0; j < q; ++j) {
    // Reflector zeroing w[j][j+1..s-1].
    double nrm = 0.0;
    for (int i = j; i < s; ++i) nrm += w[j][i] * w[j][i];
    nrm = std::sqrt(nrm);
    if (nrm < 1e-12) throw std::runtime_error("householder_extend: rank-deficient block");
    double alpha = (w[j][j] >= 0.0) ? -nrm : nrm;  // sign avoids cancellation
    Vec h(s, 0.0);
    h[j] = w[j][j] - alpha;
    for (int i = j + 1; i < s; ++i) h[i] = w[j][i];
    double hn = norm2(h);
    if (hn > 1e-14 * nrm) {
      scal(1.0 / hn, h);
      frame.h[j] = h;
      for (int c = j; c < q; ++c) {
        double proj = 0.0;
        for (int i = j; i < s; ++i) proj += h[i] * w[c][i];
        for (int i = j; i < s; ++i) w[c][i] -= 2.0 * proj * h[i];
      }
    }
    // else: column already aligned with e_j; identity reflector (h stays 0).
  }
  return frame;
}

static void reflect(const Vec& h, Vec& x) {
  if (h.empty()) return;
  double s = 0.0;
  for (size_t i = 0; i < h.size(); ++i) s += h[i] * x[i];
  if (s == 0.0) return;
  for (size_t i = 0; i < h.size(); ++i) x[i] -= 2.0 * s * h[i];
}

static bool is_zero(const Vec& h) {
  for (double v : h)
    if (v != 0.0) return false;
  return true;
}

Vec apply_complement(const HouseholderFrame& frame, ComplementMode mode, const Vec& v) {
  int s = frame.s, q = frame.q;
  if (mode == ComplementMode::UT_x) {
    if (static_cast<int>(v.size()) != s) throw std::invalid_argument("apply_complement: length != s");
    // [Q,U]^T x = H_q ... H_1 x: leftmost factor of [Q,U] applied first
    Vec x = v;
    for (int j = 0; j < q; ++j)
      if (!is_zero(frame.h[j])) reflect(frame.h[j], x);
    return Vec(x.begin() + q, x.end());
  }
  if (static_cast<int>(v.size()) != s - q)
    throw std::invalid_argument("apply_complement: length != s-q");
  Vec x(s, 0.0);
  std::copy(v.begin(), v.end(), x.begin() + q);
  // [Q,U] = H_1 ... H_q applied to [0; y]: rightmost factor first
  for (int j = q - 1; j >= 0; --j)
    if (!is_zero(frame.h[j])) reflect(frame.h[j], x);
  return x;
}

Vec apply_q_transpose(const HouseholderFrame& frame, const Vec& x_in) {
  if (static_cast<int>(x_in.size()) != frame.s)
    throw std::invalid_argument("apply_q_transpose: length != s");
  Vec x = x_in;
  for (int j = 0; j < frame.q; ++j)
    if (!is_zero(frame.h[j])) reflect(frame.h[j], x);
  return Vec(x.begin(), x.begin() + frame.q);
}

Vec apply_q(const HouseholderFrame& frame, const Vec& y) {
  if (static_cast<int>(y.size()) != frame.q) throw std::invalid_argument("apply_q: length != q");
  Vec x(frame.s, 0.0);
  std::copy(y.begin(), y.end(), x.begin());
  for (int j = frame.q - 1; j >= 0; --j)
    if (!is_zero(frame.h[j])) reflect(frame.h[j], x);
  return x;
}

DiagonalPreconditioner DiagonalPreconditioner::from_matrix_diagonal(const Vec& diag) {
  DiagonalPreconditioner M;
  M.inv_diag.resize(diag.size());
  for (size_t i = 0; i < diag.size(); ++i) {
    if (diag[i] <= 0.0) throw std::invalid_argument("diagonal preconditioner needs positive diagonal");
    M.inv_diag[i] = 1.0 / diag[i];
  }
  return M;
}

Vec DiagonalPreconditioner::apply(const Vec& r) const {
  Vec z(r.size());
  for (size_t i = 0; i < r.size(); ++i) z[i] = inv_diag[i] * r[i];
  return z;
}

static PCGResult pcg_impl(const LinOp& op, const Vec& b, const LinOp* M, double rel_tol,
                          int max_iter, const Vec* x0) {
  if (rel_tol <= 0.0) throw std::invalid_argument("pcg_solve: rel_tol must be positive");
  size_t n = b.size();
  PCGResult res;
  res.x.assign(n, 0.0);
  double bnorm = norm2(b);
  if (bnorm == 0.0) {
    res.converged = true;
    return res;
  }
  Vec r = b;
  if (x0) {
    res.x = *x0;
    Vec ax = op(res.x);
    for (size_t i = 0; i < n; ++i) r[i] = b[i] - ax[i];
  }
  double rn = norm2(r);
  if (rn <= rel_tol * bnorm) {
    res.converged = true;
    res.rel_residual = rn / bnorm;
    return res;
  }
  Vec z = M ? (*M)(r) : r;
  Vec p = z;
  double rz = dot(r, z);
  for (int it = 1; it <= max_iter; ++it) {
    Vec ap = op(p);
    double pap = dot(p, ap);
    if (pap <= 0.0) {
      res.indefinite = true;
      res.iterations = it;
      res.rel_residual = norm2(r) / bnorm;
      return res;
    }
    double alpha = rz / pap;
    axpy(alpha, p, res.x);
    axpy(-alpha, ap, r);
    res.iterations = it;
    rn = norm2(r);
    res.rel_residual = rn / bnorm;
    if (rn <= rel_tol * bnorm) {
      res.converged = true;
      return res;
    }
    z = M ? (*M)(r) : r;
    double rz_new = dot(r, z);
    double beta = rz_new / rz;
    rz = rz_new;
    for (size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  return res;
}

PCGResult pcg_solve(const LinOp& op, const Vec& b, const DiagonalPreconditioner* M,
                    double rel_tol, int max_iter, const Vec* x0) {
  if (!M) return pcg_impl(op, b, nullptr, rel_tol, max_iter, x0);
  LinOp apply = [M](const Vec& r) { return M->apply(r); };
  return pcg_impl(op, b, &apply, rel_tol, max_iter, x0);
}

PCGResult pcg_solve(const LinOp& op, const Vec& b, const LinOp& precond, double rel_tol,
                    int max_iter, const Vec* x0) {
  return pcg_impl(op, b, &precond, rel_tol, max_iter, x0);
}

Cholesky cholesky(const DenseSymMatrix& M) {
  int n = M.n;
  Cholesky C;
  C.n = n;
  C.l.assign(static_cast<size_t>(n) * n, 0.0);
  auto L = [&](int i, int j) -> double& { return C.l[static_cast<size_t>(i) * n + j]; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = M.at(i, j);
      for (int k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
      if (i == j) {
        if (s <= 0.0) {
          C.ok = false;
          return C;
        }
        L(i, i) = std::sqrt(s);
      } else {
        L(i, j) = s / L(j, j);
      }
    }
  }
  C.ok = true;
  return C;
}

Vec Cholesky::solve(const Vec& b) const {
  if (!ok) throw std::runtime_error("cholesky solve on failed factorization");
  auto L = [&](int i, int j) { return l[static_cast<size_t>(i) * n + j]; };
  Vec y(n);
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= L(i, k) * y[k];
    y[i] = s / L(i, i);
  }
  Vec x(n);
  for (int i = n - 1; i >= 0; --i) {
    double s = y[i];
    for (int k = i + 1; k < n; ++k) s -= L(k, i) * x[k];
    x[i] = s / L(i, i);
  }
  return x;
}

Vec dense_solve(const DenseSymMatrix& M, const Vec& b) {
  Cholesky C = cholesky(M);
  if (!C.ok) throw std::runtime_error("dense_solve: matrix not positive definite");
  return C.solve(b);
}

DenseSymMatrix dense_inverse_oracle(const DenseSymMatrix& M) {
  Cholesky C = cholesky(M);
  if (!C.ok) throw std::runtime_error("dense_inverse_oracle: matrix not positive definite");
  int n = M.n;
  DenseSymMatrix inv(n);
  Vec e(n, 0.0);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    Vec x = C.solve(e);
    for (int i = 0; i < n; ++i) inv.at(i, j) = x[i];
    e[j] = 0.0;
  }
  // symmetrize round-off
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double v = 0.5 * (inv.at(i, j) + inv.at(j, i));
      inv.at(i, j) = v;
      inv.at(j, i) = v;
    }
  return inv;
}

double spectral_norm(const LinOp& op, int dim, double tol, int max_iter) {
  if (dim <= 0) return 0.0;
  // deterministic pseudo-random start
  Vec x(dim);
  uint64_t state = 0x9e3779b97f4a7c15ull;
  for (int i = 0; i < dim; ++i) {
    state += 0x9e3779b97f4a7c15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z ^= z >> 31;
    x[i] = (static_cast<double>(z >> 11) * (1.0 / 9007199254740992.0)) - 0.5;
  }
  double xn = norm2(x);
  scal(1.0 / xn, x);
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vec y = op(x);
    double yn = norm2(y);
    if (yn == 0.0) return 0.0;
    double lam = std::abs(dot(x, y));
    scal(1.0 / yn, y);
    x = y;
    if (it > 4 && std::abs(lam - lambda) <= tol * std::max(lam, 1e-300)) return lam;
    lambda = lam;
  }
  return lambda;
}

void write_matrix_market(const std::string& path, const SparseSymMatrix& A) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for write: " + path);
  int nnz_lower = 0;
  for (int r = 0; r < A.n; ++r)
    for (int k = A.row_ptr[r]; k < A.row_ptr[r + 1]; ++k)
      if (A.col[k] <= r) ++nnz_lower;
  f << "%%MatrixMarket matrix coordinate real symmetric\n";
  f << A.n << " " << A.n << " " << nnz_lower << "\n";
  char buf[64];
  for (int r = 0; r < A.n; ++r)
    for (int k = A.row_ptr[r]; k < A.row_ptr[r + 1]; ++k)
      if (A.col[k] <= r) {
        std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", r + 1, A.col[k] + 1, A.val[k]);
        f << buf;
      }
  if (!f) throw std::runtime_error("write failed: " + path);
}

SparseSymMatrix read_matrix_market(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open for read: " + path);
  std::string line;
  if (!std::getline(f, line) || line.rfind("%%MatrixMarket", 0) != 0)
    throw std::runtime_error("not a MatrixMarket file: " + path);
  bool symmetric = line.find("symmetric") != std::string::npos;
  while (std::getline(f, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  std::istringstream hdr(line);
  int rows, cols, nnz;
  hdr >> rows >> cols >> nnz;
  if (rows != cols) throw std::runtime_error("matrix not square: " + path);
  std::vector<Triplet> ts;
  ts.reserve(static_cast<size_t>(nnz) * 2);
  for (int k = 0; k < nnz; ++k) {
    int i, j;
    double v;
    f >> i >> j >> v;
    ts.push_back({i - 1, j - 1, v});
    if (symmetric && i != j) ts.push_back({j - 1, i - 1, v});
  }
  if (!f) throw std::runtime_error("truncated MatrixMarket file: " + path);
  return SparseSymMatrix::from_triplets(rows, std::move(ts));
}

void write_matrix_market_columns(const std::string& path, int rows,
                                 const std::vector<std::vector<std::pair<int, double>>>& cols) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for write: " + path);
  size_t nnz = 0;
  for (const auto& c : cols) nnz += c.size();
  f << "%%MatrixMarket matrix coordinate real general\n";
  f << rows << " " << cols.size() << " " << nnz << "\n";
  char buf[64];
  for (size_t j = 0; j < cols.size(); ++j)
    for (const auto& [i, v] : cols[j]) {
      std::snprintf(buf, sizeof(buf), "%d %zu %.17g\n", i + 1, j + 1, v);
      f << buf;
    }
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::vector<std::vector<std::pair<int, double>>> read_matrix_market_columns(
    const std::string& path, int* rows_out) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open for read: " + path);
  std::string line;
  std::getline(f, line);
  while (std::getline(f, line))
    if (!line.empty() && line[0] != '%') break;
  std::istringstream hdr(line);
  int rows, ncols;
  size_t nnz;
  hdr >> rows >> ncols >> nnz;
  if (rows_out) *rows_out = rows;
  std::vector<std::vector<std::pair<int, double>>> cols(ncols);
  for (size_t k = 0; k < nnz; ++k) {
    int i, j;
    double v;
    f >> i >> j >> v;
    cols[j - 1].emplace_back(i - 1, v);
  }
  for (auto& c : cols) std::sort(c.begin(), c.end());
  return cols;
}

}  // namespace eds
