#include "edsolve/localize.hpp"

#include "edsolve/threads.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace eds {

std::vector<std::vector<int>> patch_adjacency(const EnergyDecomposition& dec,
                                              const Partition& part) {
  std::vector<std::vector<int>> adj(part.size());
  for (size_t e = 0; e < dec.elements.size(); ++e) {
    std::vector<int> touched = element_neighbors(dec, static_cast<int>(e));
    std::vector<int> ps;
    for (int v : touched) ps.push_back(part.patch_of[v]);
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    for (size_t a = 0; a < ps.size(); ++a)
      for (size_t b = a + 1; b < ps.size(); ++b) {
        adj[ps[a]].push_back(ps[b]);
        adj[ps[b]].push_back(ps[a]);
      }
  }
  for (auto& row : adj) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return adj;
}

std::vector<int> patch_layers(const std::vector<std::vector<int>>& adj, int j0, int r) {
  std::vector<char> seen(adj.size(), 0);
  std::vector<int> out{j0}, frontier{j0};
  seen[j0] = 1;
  for (int k = 0; k < r && !frontier.empty(); ++k) {
    std::vector<int> next;
    for (int j : frontier)
      for (int nb : adj[j])
        if (!seen[nb]) {
          seen[nb] = 1;
          next.push_back(nb);
          out.push_back(nb);
        }
    frontier.swap(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Restriction of A to the sorted vertex set S, in S-local indices.
SparseSymMatrix restrict_csr(const SparseSymMatrix& A, const std::vector<int>& S,
                             std::vector<int>& g2l) {
  int m = static_cast<int>(S.size());
  for (int i = 0; i < m; ++i) g2l[S[i]] = i;
  SparseSymMatrix sub;
  sub.n = m;
  sub.row_ptr.assign(m + 1, 0);
  for (int i = 0; i < m; ++i) {
    int g = S[i];
    for (int idx = A.row_ptr[g]; idx < A.row_ptr[g + 1]; ++idx) {
      int l = g2l[A.col[idx]];
      if (l >= 0) {
        sub.col.push_back(l);
        sub.val.push_back(A.val[idx]);
      }
    }
    sub.row_ptr[i + 1] = static_cast<int>(sub.col.size());
  }
  for (int v : S) g2l[v] = -1;
  return sub;
}

struct ComplementLayout {
  std::vector<int> patch_ids;        // patches in S, sorted
  std::vector<int> coord_offset;     // per patch, size +1
  std::vector<std::vector<int>> local_pos;  // vertex positions inside S
  int dim = 0;
};

// y = Y u (block-diagonal complement frames scattered into S coordinates)
Vec complement_scatter(const CoarseSpace& cs, const ComplementLayout& lay, const Vec& u,
                       int m) {
  Vec y(m, 0.0);
  for (size_t p = 0; p < lay.patch_ids.size(); ++p) {
    int j = lay.patch_ids[p];
    int cd = lay.coord_offset[p + 1] - lay.coord_offset[p];
    if (cd == 0) continue;
    Vec ub(u.begin() + lay.coord_offset[p], u.begin() + lay.coord_offset[p + 1]);
    Vec yp = apply_complement(cs.frames[j], ComplementMode::U_y, ub);
    const auto& pos = lay.local_pos[p];
    for (size_t r = 0; r < pos.size(); ++r) y[pos[r]] += yp[r];
  }
  return y;
}

Vec complement_gather(const CoarseSpace& cs, const ComplementLayout& lay, const Vec& x) {
  Vec u(lay.dim, 0.0);
  for (size_t p = 0; p < lay.patch_ids.size(); ++p) {
    int j = lay.patch_ids[p];
    if (lay.coord_offset[p + 1] == lay.coord_offset[p]) continue;
    const auto& pos = lay.local_pos[p];
    Vec xp(pos.size());
    for (size_t r = 0; r < pos.size(); ++r) xp[r] = x[pos[r]];
    Vec up = apply_complement(cs.frames[j], ComplementMode::UT_x, xp);
    std::copy(up.begin(), up.end(), u.begin() + lay.coord_offset[p]);
  }
  return u;
}

}  // namespace

LocalizedColumn localize_column(const SparseSymMatrix& A, const CoarseSpace& cs,
                                const std::vector<std::vector<int>>& adj, int column,
                                double eps_loc, Vec& out_column, const RadiusHook& hook) {
  LocalizedColumn info;
  info.index = column;
  int j0 = cs.patch_of_column(column);
  info.home_patch = j0;
  int c = column - cs.offset[j0];
  const auto& P0 = cs.part.patches[j0];
  int s0 = static_cast<int>(P0.size());

  // psi^0: constrained minimizer over the home patch alone
  DenseSymMatrix AP = restricted_energy(A, P0);
  Cholesky chol = cholesky(AP);
  if (!chol.ok) throw std::runtime_error("localize_column: restricted matrix not PD");
  const auto& block = cs.phi_blocks[j0];
  int qj = static_cast<int>(block.size());
  std::vector<Vec> X(qj);
  for (int k = 0; k < qj; ++k) X[k] = chol.solve(block[k]);
  DenseSymMatrix G(qj);
  for (int a = 0; a < qj; ++a)
    for (int b = a; b < qj; ++b) {
      double t = dot(block[a], X[b]);
      G.at(a, b) = t;
      G.at(b, a) = t;
    }
  DenseSymMatrix T = dense_inverse_oracle(G);
  Vec psi(A.n, 0.0);
  for (int k = 0; k < qj; ++k) {
    double w = T.at(k, c);
    for (int r = 0; r < s0; ++r) psi[P0[r]] += w * X[k][r];
  }
  info.psi_energy2.push_back(dot(psi, A.apply(psi)));
  if (hook) hook(0, psi);

  std::vector<int> g2l(A.n, -1);
  std::vector<char> in_set(cs.part.size(), 0);
  std::vector<int> patch_set{j0}, frontier{j0};
  in_set[j0] = 1;
  double w2_prev = 0.0;
  int M = cs.part.size();

  for (int k = 1; k <= M; ++k) {
    std::vector<int> next;
    for (int j : frontier)
      for (int nb : adj[j])
        if (!in_set[nb]) {
          in_set[nb] = 1;
          next.push_back(nb);
          patch_set.push_back(nb);
        }
    bool grew = !next.empty();
    frontier.swap(next);
    if (!grew) {
      info.full_support = true;
      break;
    }
    std::sort(patch_set.begin(), patch_set.end());

    std::vector<int> S;
    for (int j : patch_set)
      S.insert(S.end(), cs.part.patches[j].begin(), cs.part.patches[j].end());
    std::sort(S.begin(), S.end());
    int m = static_cast<int>(S.size());
    SparseSymMatrix Asub = restrict_csr(A, S, g2l);

    ComplementLayout lay;
    lay.patch_ids = patch_set;
    lay.coord_offset.assign(patch_set.size() + 1, 0);
    lay.local_pos.resize(patch_set.size());
    for (size_t p = 0; p < patch_set.size(); ++p) {
      int j = patch_set[p];
      lay.coord_offset[p + 1] = lay.coord_offset[p] + cs.frames[j].complement_dim();
      auto& pos = lay.local_pos[p];
      for (int v : cs.part.patches[j])
        pos.push_back(static_cast<int>(std::lower_bound(S.begin(), S.end(), v) - S.begin()));
    }
    lay.dim = lay.coord_offset.back();

    if (lay.dim == 0) {
      info.radius = k;
      info.w_energy2.push_back(0.0);
      info.psi_energy2.push_back(info.psi_energy2.back());
      info.final_eta = 0.0;
      if (hook) hook(k, psi);
      break;
    }

    Vec psi_local(m);
    for (int i = 0; i < m; ++i) psi_local[i] = psi[S[i]];
    Vec rhs = complement_gather(cs, lay, Asub.apply(psi_local));

    // Jacobi preconditioner from the per-patch blocks of Y^T A Y
    Vec diag(lay.dim, 0.0);
    for (size_t p = 0; p < patch_set.size(); ++p) {
      int j = patch_set[p];
      int cd = lay.coord_offset[p + 1] - lay.coord_offset[p];
      if (cd == 0) continue;
      DenseSymMatrix APj = restricted_energy(A, cs.part.patches[j]);
      for (int t = 0; t < cd; ++t) {
        Vec e(cd, 0.0);
        e[t] = 1.0;
        Vec y = apply_complement(cs.frames[j], ComplementMode::U_y, e);
        diag[lay.coord_offset[p] + t] = dot(y, APj.apply(y));
      }
    }
    auto precond = DiagonalPreconditioner::from_matrix_diagonal(diag);
    LinOp op = [&](const Vec& u) {
      return complement_gather(cs, lay, Asub.apply(complement_scatter(cs, lay, u, m)));
    };
    PCGResult sol = pcg_solve(op, rhs, &precond, eps_loc / 10.0, 10 * lay.dim + 1000);

    Vec w_local = complement_scatter(cs, lay, sol.x, m);
    double w2 = dot(w_local, Asub.apply(w_local));
    for (int i = 0; i < m; ++i) psi[S[i]] -= w_local[i];
    info.radius = k;
    info.w_energy2.push_back(w2);
    info.psi_energy2.push_back(dot(psi, A.apply(psi)));
    if (hook) hook(k, psi);

    if (k >= 2) {
      if (w2 <= 0.0 || w2_prev <= 0.0) {
        info.final_eta = 0.0;
        break;
      }
      double eta = std::sqrt(w2 / w2_prev);
      info.final_eta = eta;
      if (eta < 1.0 && (eta * eta / (1.0 - eta * eta)) * w2 < eps_loc * eps_loc) break;
    }
    w2_prev = w2;
  }

  out_column = std::move(psi);
  return info;
}

LocalizeResult construct_tilde_psi(const SparseSymMatrix& A, const EnergyDecomposition& dec,
                                   const CoarseSpace& cs, double eps_loc) {
  LocalizeResult res;
  res.psi.resize(cs.N);
  res.columns.resize(cs.N);
  auto adj = patch_adjacency(dec, cs.part);
  parallel_for(0, cs.N, [&](int i) {
    Vec col;
    res.columns[i] = localize_column(A, cs, adj, i, eps_loc, col);
    double mx = 0.0;
    for (double x : col) mx = std::max(mx, std::abs(x));
    double drop = 1e-14 * mx;
    auto& sp = res.psi[i];
    for (int r = 0; r < A.n; ++r)
      if (std::abs(col[r]) > drop) sp.emplace_back(r, col[r]);
  });
  for (const auto& c : res.columns) {
    res.max_radius = std::max(res.max_radius, c.radius);
    res.any_full_support = res.any_full_support || c.full_support;
  }
  return res;
}

DecayCertificate decay_certificate(const SparseSymMatrix& A, const CoarseSpace& cs,
                                   const std::vector<std::vector<int>>& adj,
                                   const CompressedOperator& exact, int column,
                                   double alpha, double delta, double eps_loc) {
  Vec target(A.n, 0.0);
  for (const auto& [r, v] : exact.psi[column]) target[r] = v;
  DecayCertificate cert;
  RadiusHook hook = [&](int, const Vec& iterate) {
    Vec err = iterate;
    axpy(-1.0, target, err);
    cert.error2.push_back(dot(err, A.apply(err)));
  };
  Vec col;
  localize_column(A, cs, adj, column, eps_loc, col, hook);
  double ratio = alpha > 1.0 ? (alpha - 1.0) / alpha : 0.0;
  double b = delta;
  for (size_t k = 0; k < cert.error2.size(); ++k) {
    cert.bound.push_back(b);
    if (cert.error2[k] > b * (1.0 + 1e-8) + 1e-12) cert.holds = false;
    b *= ratio;
  }
  return cert;
}

}  // namespace eds
