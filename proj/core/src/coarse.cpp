#include "edsolve/coarse.hpp"

#include "edsolve/threads.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace eds {

int CoarseSpace::patch_of_column(int i) const {
  // offsets are sorted; upper_bound gives the owning patch
  auto it = std::upper_bound(offset.begin(), offset.end(), i);
  return static_cast<int>(it - offset.begin()) - 1;
}

Vec CoarseSpace::apply_phi(const Vec& coarse) const {
  Vec out(n, 0.0);
  for (int j = 0; j < part.size(); ++j) {
    const auto& P = part.patches[j];
    const auto& block = phi_blocks[j];
    for (size_t c = 0; c < block.size(); ++c) {
      double w = coarse[offset[j] + static_cast<int>(c)];
      if (w == 0.0) continue;
      for (size_t r = 0; r < P.size(); ++r) out[P[r]] += w * block[c][r];
    }
  }
  return out;
}

Vec CoarseSpace::apply_phi_t(const Vec& fine) const {
  Vec out(N, 0.0);
  for (int j = 0; j < part.size(); ++j) {
    const auto& P = part.patches[j];
    const auto& block = phi_blocks[j];
    for (size_t c = 0; c < block.size(); ++c) {
      double s = 0.0;
      for (size_t r = 0; r < P.size(); ++r) s += block[c][r] * fine[P[r]];
      out[offset[j] + static_cast<int>(c)] = s;
    }
  }
  return out;
}

static void fix_sign(Vec& v) {
  double mx = 0.0;
  for (double x : v) mx = std::max(mx, std::abs(x));
  if (mx == 0.0) return;
  for (double x : v) {
    if (std::abs(x) > 1e-12 * mx) {
      if (x < 0.0) scal(-1.0, v);
      return;
    }
  }
}

CoarseSpace construct_phi(const EnergyDecomposition& dec, const Partition& part, int q) {
  if (q < 1) throw std::invalid_argument("construct_phi: q must be >= 1");
  CoarseSpace cs;
  cs.part = part;
  cs.q = q;
  cs.n = dec.n;
  int M = part.size();
  cs.phi_blocks.resize(M);
  cs.frames.resize(M);
  std::vector<std::string> errors(M);

  parallel_for(0, M, [&](int j) {
    const auto& P = part.patches[j];
    int s = static_cast<int>(P.size());
    std::vector<Vec> cols;
    if (q >= s) {
      // whole patch kept: Phi is the identity on the patch
      cols.assign(s, Vec(s, 0.0));
      for (int i = 0; i < s; ++i) cols[i][i] = 1.0;
    } else {
      DenseSymMatrix in = interior_energy(dec, P);
      EigResult eig = dense_sym_eig(in, q + 1);
      if (eig.values[q] <= 1e-12) {
        std::ostringstream os;
        os << "construct_phi: degenerate interior energy on patch " << j
           << " (lambda_" << (q + 1) << " = " << eig.values[q] << ")";
        errors[j] = os.str();
        return;
      }
      cols.assign(eig.vectors.begin(), eig.vectors.begin() + q);
      for (auto& v : cols) fix_sign(v);
    }
    cs.frames[j] = householder_extend(cols);
    cs.phi_blocks[j] = std::move(cols);
  });
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error(e);

  cs.offset.assign(M + 1, 0);
  for (int j = 0; j < M; ++j)
    cs.offset[j + 1] = cs.offset[j] + static_cast<int>(cs.phi_blocks[j].size());
  cs.N = cs.offset[M];
  return cs;
}

static Vec scatter_column(const CoarseSpace& cs, int j, int c) {
  Vec out(cs.n, 0.0);
  const auto& P = cs.part.patches[j];
  const auto& col = cs.phi_blocks[j][c];
  for (size_t r = 0; r < P.size(); ++r) out[P[r]] = col[r];
  return out;
}

static std::vector<std::pair<int, double>> sparsify(const Vec& v, double drop = 0.0) {
  std::vector<std::pair<int, double>> out;
  for (int i = 0; i < static_cast<int>(v.size()); ++i)
    if (std::abs(v[i]) > drop) out.emplace_back(i, v[i]);
  return out;
}

CompressedOperator exact_psi(const SparseSymMatrix& A, const CoarseSpace& coarse) {
  int n = A.n, N = coarse.N;
  Cholesky chol = cholesky(to_dense(A));
  if (!chol.ok) throw std::runtime_error("exact_psi: operator is not positive definite");

  // X = A^{-1} Phi, one column per coarse function
  std::vector<Vec> X(N);
  parallel_for(0, N, [&](int i) {
    int j = coarse.patch_of_column(i);
    X[i] = chol.solve(scatter_column(coarse, j, i - coarse.offset[j]));
  });

  DenseSymMatrix gram(N);  // Phi^T A^{-1} Phi
  for (int j = 0; j < coarse.part.size(); ++j) {
    const auto& P = coarse.part.patches[j];
    for (size_t c = 0; c < coarse.phi_blocks[j].size(); ++c) {
      int row = coarse.offset[j] + static_cast<int>(c);
      const Vec& phi = coarse.phi_blocks[j][c];
      for (int i = row; i < N; ++i) {
        double s = 0.0;
        for (size_t r = 0; r < P.size(); ++r) s += phi[r] * X[i][P[r]];
        gram.at(row, i) = s;
        gram.at(i, row) = s;
      }
    }
  }

  CompressedOperator comp;
  comp.n = n;
  comp.N = N;
  comp.a_st_dense = dense_inverse_oracle(gram);  // A_st = (Phi^T A^{-1} Phi)^{-1}
  comp.psi.resize(N);
  parallel_for(0, N, [&](int i) {
    Vec col(n, 0.0);
    for (int k = 0; k < N; ++k) {
      double t = comp.a_st_dense.at(k, i);
      if (t != 0.0) axpy(t, X[k], col);
    }
    comp.psi[i] = sparsify(col);
  });
  return comp;
}

CompressedOperator make_localized_operator(const SparseSymMatrix& A, const CoarseSpace& coarse,
                                           SparseColumns psi, double eps_loc) {
  CompressedOperator comp;
  comp.n = A.n;
  comp.N = coarse.N;
  comp.psi = std::move(psi);
  comp.localized = true;
  comp.eps_loc = eps_loc;

  // A_st = Psi^T A Psi, column by column through the sparse product
  std::vector<std::vector<Triplet>> partial(comp.N);
  parallel_for(0, comp.N, [&](int i) {
    Vec dense_col(comp.n, 0.0);
    for (const auto& [r, v] : comp.psi[i]) dense_col[r] = v;
    Vec Ap = A.apply(dense_col);
    for (int k = i; k < comp.N; ++k) {
      double s = 0.0;
      for (const auto& [r, v] : comp.psi[k]) s += v * Ap[r];
      if (s != 0.0) partial[i].push_back({i, k, s});
    }
  });
  std::vector<Triplet> ts;
  for (auto& p : partial)
    for (const auto& t : p) {
      ts.push_back(t);
      if (t.row != t.col) ts.push_back({t.col, t.row, t.value});
    }
  comp.a_st_sparse = SparseSymMatrix::from_triplets(comp.N, std::move(ts));
  return comp;
}

Vec compress_apply(CompressedOperator& comp, const Vec& b) {
  Vec y(comp.N, 0.0);
  for (int i = 0; i < comp.N; ++i) {
    double s = 0.0;
    for (const auto& [r, v] : comp.psi[i]) s += v * b[r];
    y[i] = s;
  }
  Vec z;
  if (comp.has_dense()) {
    if (!comp.a_st_factor) {
      comp.a_st_factor = cholesky(comp.a_st_dense);
      if (!comp.a_st_factor->ok)
        throw std::runtime_error("compress_apply: A_st is not positive definite");
    }
    z = comp.a_st_factor->solve(y);
  } else {
    auto precond = DiagonalPreconditioner::from_matrix_diagonal(comp.a_st_sparse.diagonal());
    const auto& S = comp.a_st_sparse;
    PCGResult r =
        pcg_solve([&S](const Vec& v) { return S.apply(v); }, y, &precond, 1e-12, 20000);
    z = std::move(r.x);
  }
  Vec x(comp.n, 0.0);
  for (int i = 0; i < comp.N; ++i)
    for (const auto& [r, v] : comp.psi[i]) x[r] += v * z[i];
  return x;
}

double compression_error(const SparseSymMatrix& A, CompressedOperator& comp) {
  Cholesky chol = cholesky(to_dense(A));
  if (!chol.ok) throw std::runtime_error("compression_error: operator is not positive definite");
  LinOp op = [&](const Vec& v) {
    Vec exact = chol.solve(v);
    Vec approx = compress_apply(comp, v);
    axpy(-1.0, approx, exact);
    return exact;
  };
  return spectral_norm(op, A.n, 1e-9, 50000);
}

StiffnessReport stiffness_condition_report(const SparseSymMatrix& A, CompressedOperator& comp,
                                           double delta_P) {
  StiffnessReport rep;
  LinOp fwd, inv;
  Cholesky dense_factor;
  DiagonalPreconditioner precond;
  if (comp.has_dense()) {
    dense_factor = cholesky(comp.a_st_dense);
    if (!dense_factor.ok)
      throw std::runtime_error("stiffness_condition_report: A_st not positive definite");
    fwd = [&](const Vec& v) { return comp.a_st_dense.apply(v); };
    inv = [&](const Vec& v) { return dense_factor.solve(v); };
  } else {
    precond = DiagonalPreconditioner::from_matrix_diagonal(comp.a_st_sparse.diagonal());
    fwd = [&](const Vec& v) { return comp.a_st_sparse.apply(v); };
    inv = [&](const Vec& v) {
      return pcg_solve(fwd, v, &precond, 1e-12, 20000).x;
    };
  }
  rep.lambda_max = spectral_norm(fwd, comp.N, 1e-9, 50000);
  rep.lambda_min = 1.0 / spectral_norm(inv, comp.N, 1e-9, 50000);
  rep.kappa = rep.lambda_max / rep.lambda_min;

  Cholesky achol = cholesky(to_dense(A));
  double inv_norm = spectral_norm([&](const Vec& v) { return achol.solve(v); }, A.n, 1e-9, 50000);
  rep.bound = delta_P * inv_norm;
  rep.violated = rep.kappa > rep.bound * (1.0 + 1e-8);
  return rep;
}

void write_csx(const std::string& path, const CoarseSpace& cs) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csx: cannot open " + path);
  out << "CSX1 " << cs.n << ' ' << cs.part.size() << ' ' << cs.q << ' ' << cs.N << '\n';
  char buf[32];
  for (int j = 0; j < cs.part.size(); ++j) {
    const auto& P = cs.part.patches[j];
    out << j << ' ' << P.size() << ' ' << cs.phi_blocks[j].size();
    for (int v : P) out << ' ' << v;
    out << '\n';
    for (const auto& col : cs.phi_blocks[j]) {
      for (size_t r = 0; r < col.size(); ++r) {
        std::snprintf(buf, sizeof buf, "%.17g", col[r]);
        out << (r ? " " : "") << buf;
      }
      out << '\n';
    }
  }
  if (!out) throw std::runtime_error("write_csx: write failed for " + path);
}

CoarseSpace read_csx(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_csx: cannot open " + path);
  std::string magic;
  int n = 0, M = 0, q = 0, N = 0;
  in >> magic >> n >> M >> q >> N;
  if (magic != "CSX1" || !in) throw std::runtime_error("read_csx: bad header in " + path);
  CoarseSpace cs;
  cs.n = n;
  cs.q = q;
  cs.phi_blocks.resize(M);
  cs.frames.resize(M);
  cs.part.patches.resize(M);
  for (int jj = 0; jj < M; ++jj) {
    int j = 0, s = 0, qj = 0;
    in >> j >> s >> qj;
    if (!in || j < 0 || j >= M || s <= 0 || qj <= 0 || qj > s)
      throw std::runtime_error("read_csx: bad patch record in " + path);
    auto& P = cs.part.patches[j];
    P.resize(s);
    for (int& v : P) in >> v;
    auto& block = cs.phi_blocks[j];
    block.assign(qj, Vec(s));
    for (auto& col : block)
      for (double& x : col) in >> x;
    if (!in) throw std::runtime_error("read_csx: truncated patch data in " + path);
    cs.frames[j] = householder_extend(block);
  }
  cs.part.rebuild_patch_of(n);
  cs.part.validate(n);
  cs.offset.assign(M + 1, 0);
  for (int j = 0; j < M; ++j)
    cs.offset[j + 1] = cs.offset[j] + static_cast<int>(cs.phi_blocks[j].size());
  cs.N = cs.offset[M];
  if (cs.N != N) throw std::runtime_error("read_csx: column count mismatch in " + path);
  return cs;
}

}  // namespace eds
