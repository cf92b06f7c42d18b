#include "edsolve/mmd.hpp"

#include "edsolve/threads.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

namespace eds {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------- reduction

EnergyDecomposition reduced_inherited(const EnergyDecomposition& dec, const Partition& part,
                                      const SparseColumns& psi, int n_coarse) {
  // row -> (column, value) index of Psi
  std::vector<std::vector<std::pair<int, double>>> row_of(dec.n);
  for (int i = 0; i < static_cast<int>(psi.size()); ++i)
    for (const auto& [r, v] : psi[i]) row_of[r].emplace_back(i, v);

  auto reduce = [&](const std::vector<int>& T, const DenseSymMatrix& L) {
    std::vector<int> I;
    for (int r : T)
      for (const auto& [i, v] : row_of[r]) {
        (void)v;
        I.push_back(i);
      }
    std::sort(I.begin(), I.end());
    I.erase(std::unique(I.begin(), I.end()), I.end());
    int t = static_cast<int>(I.size());
    int s = static_cast<int>(T.size());
    EnergyElement out;
    if (t == 0) return out;
    // B[r][c] = Psi[T[r], I[c]]
    std::vector<Vec> B(s, Vec(t, 0.0));
    for (int r = 0; r < s; ++r)
      for (const auto& [i, v] : row_of[T[r]]) {
        int c = static_cast<int>(std::lower_bound(I.begin(), I.end(), i) - I.begin());
        B[r][c] = v;
      }
    // C = B^T L B
    std::vector<Vec> LB(s, Vec(t, 0.0));
    for (int r = 0; r < s; ++r)
      for (int r2 = 0; r2 < s; ++r2) {
        double w = L.at(r, r2);
        if (w == 0.0) continue;
        for (int c = 0; c < t; ++c) LB[r][c] += w * B[r2][c];
      }
    DenseSymMatrix C(t);
    for (int a = 0; a < t; ++a)
      for (int b = a; b < t; ++b) {
        double sum = 0.0;
        for (int r = 0; r < s; ++r) sum += B[r][a] * LB[r][b];
        C.at(a, b) = sum;
        C.at(b, a) = sum;
      }
    double mx = 0.0;
    for (double x : C.a) mx = std::max(mx, std::abs(x));
    if (mx == 0.0) return out;
    out.support = std::move(I);
    out.local = std::move(C);
    return out;
  };

  EnergyDecomposition next;
  next.n = n_coarse;
  // one aggregate per patch interior
  std::vector<EnergyElement> staged(part.size());
  parallel_for(0, part.size(), [&](int j) {
    staged[j] = reduce(part.patches[j], interior_energy(dec, part.patches[j]));
  });
  for (auto& e : staged)
    if (!e.support.empty()) next.elements.push_back(std::move(e));
  // plus every boundary element individually
  std::vector<int> boundary;
  for (size_t e = 0; e < dec.elements.size(); ++e) {
    std::vector<int> touched = element_neighbors(dec, static_cast<int>(e));
    if (touched.empty()) continue;
    int p0 = part.patch_of[touched[0]];
    bool interior = true;
    for (int v : touched)
      if (part.patch_of[v] != p0) {
        interior = false;
        break;
      }
    if (!interior) boundary.push_back(static_cast<int>(e));
  }
  std::vector<EnergyElement> staged_b(boundary.size());
  parallel_for(0, static_cast<int>(boundary.size()), [&](int i) {
    const auto& el = dec.elements[boundary[i]];
    staged_b[i] = reduce(el.support, el.local);
  });
  for (auto& e : staged_b)
    if (!e.support.empty()) next.elements.push_back(std::move(e));
  next.build_vertex_index();
  return next;
}

// ------------------------------------------------------------- B = U^T A U

static std::vector<int> complement_offsets(const CoarseSpace& cs) {
  std::vector<int> off(cs.part.size() + 1, 0);
  for (int j = 0; j < cs.part.size(); ++j)
    off[j + 1] = off[j] + cs.frames[j].complement_dim();
  return off;
}

SparseSymMatrix build_b_matrix(const SparseSymMatrix& A, const CoarseSpace& cs) {
  auto off = complement_offsets(cs);
  int dim = off.back();
  std::vector<Triplet> ts;
  int M = cs.part.size();
  std::vector<std::vector<Triplet>> partial(M);

  parallel_for(0, M, [&](int j) {
    if (cs.frames[j].complement_dim() == 0) return;
    const auto& Pj = cs.part.patches[j];
    int sj = static_cast<int>(Pj.size());
    // neighbors j2 >= j reachable through A's sparsity
    std::vector<int> nbrs;
    for (int v : Pj)
      for (int idx = A.row_ptr[v]; idx < A.row_ptr[v + 1]; ++idx) {
        int j2 = cs.part.patch_of[A.col[idx]];
        if (j2 >= j) nbrs.push_back(j2);
      }
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());

    for (int j2 : nbrs) {
      if (cs.frames[j2].complement_dim() == 0) continue;
      const auto& P2 = cs.part.patches[j2];
      int s2 = static_cast<int>(P2.size());
      // dense block A[Pj, P2]
      std::vector<Vec> Mblk(sj, Vec(s2, 0.0));
      bool any = false;
      for (int r = 0; r < sj; ++r) {
        int v = Pj[r];
        for (int idx = A.row_ptr[v]; idx < A.row_ptr[v + 1]; ++idx) {
          int u = A.col[idx];
          if (cs.part.patch_of[u] != j2) continue;
          int cpos = static_cast<int>(std::lower_bound(P2.begin(), P2.end(), u) - P2.begin());
          Mblk[r][cpos] = A.val[idx];
          any = true;
        }
      }
      if (!any) continue;
      int cd = cs.frames[j].complement_dim();
      int cd2 = cs.frames[j2].complement_dim();
      // rows: U_j^T applied to each column of the block
      std::vector<Vec> half(cd, Vec(s2, 0.0));
      for (int cpos = 0; cpos < s2; ++cpos) {
        Vec colv(sj);
        for (int r = 0; r < sj; ++r) colv[r] = Mblk[r][cpos];
        Vec u = apply_complement(cs.frames[j], ComplementMode::UT_x, colv);
        for (int a = 0; a < cd; ++a) half[a][cpos] = u[a];
      }
      for (int a = 0; a < cd; ++a) {
        Vec u = apply_complement(cs.frames[j2], ComplementMode::UT_x, half[a]);
        for (int b = 0; b < cd2; ++b) {
          double v = u[b];
          if (v == 0.0) continue;
          int gr = off[j] + a, gc = off[j2] + b;
          if (j2 == j && gc < gr) continue;  // keep the upper triangle once
          partial[j].push_back({gr, gc, v});
          if (gr != gc) partial[j].push_back({gc, gr, v});
        }
      }
    }
  });
  for (auto& p : partial) ts.insert(ts.end(), p.begin(), p.end());
  SparseSymMatrix B = SparseSymMatrix::from_triplets(dim, std::move(ts));
  // diagonal blocks come out numerically symmetric; enforce it exactly
  return B;
}

// --------------------------------------------------------------- measuring

static double measured_condition(const SparseSymMatrix& S) {
  if (S.n == 0) return 0.0;
  auto fwd = [&S](const Vec& v) { return S.apply(v); };
  double lmax = spectral_norm(fwd, S.n, 1e-8, 50000);
  auto pre = DiagonalPreconditioner::from_matrix_diagonal(S.diagonal());
  auto inv = [&](const Vec& v) { return pcg_solve(fwd, v, &pre, 1e-12, 50000).x; };
  double inv_norm = spectral_norm(inv, S.n, 1e-8, 50000);
  return lmax * inv_norm;
}

// -------------------------------------------------------------- decompose

MMDHierarchy mmd_decompose(const EnergyDecomposition& dec0, const MMDConfig& cfg) {
  if (cfg.eps2_schedule.empty())
    throw std::invalid_argument("mmd_decompose: empty eps^2 schedule");
  MMDHierarchy h;
  h.a0 = assemble(dec0);
  EnergyDecomposition cur = dec0;

  int K = std::min<int>(static_cast<int>(cfg.eps2_schedule.size()), cfg.max_levels);
  for (int k = 1; k <= K; ++k) {
    const SparseSymMatrix& A = h.level_matrix(k - 1);
    if (A.n <= cfg.n_floor) break;
    double eps2 = cfg.eps2_schedule[k - 1];
    double eps = std::sqrt(eps2);

    ClusterOptions copts;
    copts.q = cfg.q;
    ClusterReport crep;
    Partition part = pair_cluster(cur, eps, cfg.c, copts, &crep);
    if (part.size() >= A.n) {
      if (k == 1)
        throw std::runtime_error("mmd_decompose: clustering produced no compression");
      break;
    }

    LevelRecord rec;
    rec.level = k;
    rec.eps_target = eps;
    rec.eps_measured = crep.measurements.eps;
    rec.delta_measured = crep.measurements.delta;
    rec.coarse = construct_phi(cur, part, cfg.q);
    rec.part = rec.coarse.part;
    rec.n_prev = A.n;
    rec.n_coarse = rec.coarse.N;

    if (cfg.exact_levels) {
      rec.psi = exact_psi(A, rec.coarse).psi;
    } else {
      double eps_loc = cfg.relaxed_loc ? eps : eps2;
      rec.psi = construct_tilde_psi(A, cur, rec.coarse, eps_loc).psi;
    }
    rec.b_matrix = build_b_matrix(A, rec.coarse);
    rec.b_dim = rec.b_matrix.n;
    if (cfg.measure_condition) rec.kappa_b = measured_condition(rec.b_matrix);

    cur = reduced_inherited(cur, part, rec.psi, rec.n_coarse);
    rec.a_reduced = assemble(cur);
    h.levels.push_back(std::move(rec));
  }
  if (h.levels.empty()) throw std::runtime_error("mmd_decompose: no levels built");
  if (cfg.measure_condition) h.kappa_bottom = measured_condition(h.levels.back().a_reduced);
  return h;
}

// ------------------------------------------------------------------ solver

static Vec u_transpose_apply(const CoarseSpace& cs, const std::vector<int>& off,
                             const Vec& x) {
  Vec out(off.back(), 0.0);
  for (int j = 0; j < cs.part.size(); ++j) {
    int cd = cs.frames[j].complement_dim();
    if (cd == 0) continue;
    const auto& P = cs.part.patches[j];
    Vec xp(P.size());
    for (size_t r = 0; r < P.size(); ++r) xp[r] = x[P[r]];
    Vec u = apply_complement(cs.frames[j], ComplementMode::UT_x, xp);
    std::copy(u.begin(), u.end(), out.begin() + off[j]);
  }
  return out;
}

static void u_apply_add(const CoarseSpace& cs, const std::vector<int>& off, const Vec& y,
                        Vec& out) {
  for (int j = 0; j < cs.part.size(); ++j) {
    int cd = cs.frames[j].complement_dim();
    if (cd == 0) continue;
    Vec yb(y.begin() + off[j], y.begin() + off[j] + cd);
    Vec xp = apply_complement(cs.frames[j], ComplementMode::U_y, yb);
    const auto& P = cs.part.patches[j];
    for (size_t r = 0; r < P.size(); ++r) out[P[r]] += xp[r];
  }
}

static Vec psi_t_apply(const SparseColumns& psi, const Vec& x) {
  Vec out(psi.size(), 0.0);
  for (size_t i = 0; i < psi.size(); ++i) {
    double s = 0.0;
    for (const auto& [r, v] : psi[i]) s += v * x[r];
    out[i] = s;
  }
  return out;
}

static void psi_apply_add(const SparseColumns& psi, const Vec& z, Vec& out) {
  for (size_t i = 0; i < psi.size(); ++i)
    for (const auto& [r, v] : psi[i]) out[r] += v * z[i];
}

// One full downward/upward sweep through the hierarchy: an approximate
// application of A^{-1} whose accuracy is set by the compression and
// localization errors plus the per-level PCG tolerance.
static Vec hierarchy_sweep(const MMDHierarchy& h, const Vec& b, const SolveConfig& cfg,
                           SolveStats* st) {
  int K = h.depth();
  std::vector<Vec> rhs(K + 1), yb(K);
  rhs[0] = b;

  for (int k = 0; k < K; ++k) {
    const LevelRecord& L = h.levels[k];
    auto off = complement_offsets(L.coarse);
    Vec z = u_transpose_apply(L.coarse, off, rhs[k]);
    if (!z.empty() && L.b_matrix.n > 0) {
      auto pre = DiagonalPreconditioner::from_matrix_diagonal(L.b_matrix.diagonal());
      const auto& B = L.b_matrix;
      PCGResult r = pcg_solve([&B](const Vec& v) { return B.apply(v); }, z, &pre,
                              cfg.level_tol, 10 * B.n + 1000);
      yb[k] = std::move(r.x);
      if (st) st->level_iterations[k] += r.iterations;
    } else {
      yb[k] = Vec(off.back(), 0.0);
    }
    rhs[k + 1] = psi_t_apply(L.psi, rhs[k]);
  }

  const SparseSymMatrix& Ab = h.level_matrix(K);
  Vec xk;
  if (Ab.n <= 512) {
    Cholesky chol = cholesky(to_dense(Ab));
    if (!chol.ok) throw std::runtime_error("mmd_solve: bottom matrix not positive definite");
    xk = chol.solve(rhs[K]);
  } else {
    auto pre = DiagonalPreconditioner::from_matrix_diagonal(Ab.diagonal());
    PCGResult r = pcg_solve([&Ab](const Vec& v) { return Ab.apply(v); }, rhs[K], &pre,
                            cfg.level_tol, 10 * Ab.n + 1000);
    xk = std::move(r.x);
    if (st) st->bottom_iterations += r.iterations;
  }

  for (int k = K - 1; k >= 0; --k) {
    const LevelRecord& L = h.levels[k];
    auto off = complement_offsets(L.coarse);
    Vec x(L.n_prev, 0.0);
    u_apply_add(L.coarse, off, yb[k], x);
    psi_apply_add(L.psi, xk, x);
    xk = std::move(x);
  }
  return xk;
}

SolveStats mmd_solve(const MMDHierarchy& h, const Vec& b, const SolveConfig& cfg) {
  SolveStats st;
  st.level_iterations.resize(h.depth(), 0);

  Vec xk = hierarchy_sweep(h, b, cfg, &st);

  double nb = norm2(b);
  auto residual = [&](const Vec& x) {
    Vec r = h.a0.apply(x);
    scal(-1.0, r);
    axpy(1.0, b, r);
    return r;
  };
  Vec res = residual(xk);
  st.rel_residual = nb > 0 ? norm2(res) / nb : 0.0;
  st.converged = st.rel_residual <= cfg.final_tol;

  // compensation: CG on the full system, preconditioned by the hierarchy
  // sweep (the sweep is a fixed SPD approximation of A^{-1} up to the inner
  // tolerances), started from the sweep solution
  if (cfg.compensate && !st.converged) {
    const SparseSymMatrix& A = h.a0;
    LinOp sweep = [&](const Vec& r) { return hierarchy_sweep(h, r, cfg, nullptr); };
    PCGResult r = pcg_solve([&A](const Vec& v) { return A.apply(v); }, b, sweep,
                            cfg.final_tol, cfg.max_compensation, &xk);
    st.compensation_iterations = r.iterations;
    st.rel_residual = r.rel_residual;
    st.converged = r.converged;
    xk = std::move(r.x);
  }
  st.x = std::move(xk);
  return st;
}

// ------------------------------------------------------------- diagnostics

CompressionBudget accumulated_compression_error(const MMDHierarchy& h) {
  CompressionBudget out;
  Cholesky chol = cholesky(to_dense(h.a0));
  if (!chol.ok)
    throw std::runtime_error("accumulated_compression_error: A not positive definite");
  int n = h.a0.n;

  // composite coarse columns at the current level, in fine coordinates
  std::vector<Vec> composite;
  double cum = 0.0;
  for (int k = 0; k < h.depth(); ++k) {
    const LevelRecord& L = h.levels[k];
    std::vector<Vec> next(L.n_coarse);
    for (int i = 0; i < L.n_coarse; ++i) {
      Vec e(L.n_coarse, 0.0);
      e[i] = 1.0;
      Vec prev = L.coarse.apply_phi(e);  // length n_prev
      if (k == 0) {
        next[i] = std::move(prev);
      } else {
        Vec acc(n, 0.0);
        for (int r = 0; r < static_cast<int>(prev.size()); ++r)
          if (prev[r] != 0.0) axpy(prev[r], composite[r], acc);
        next[i] = std::move(acc);
      }
    }
    composite = std::move(next);
    int N = static_cast<int>(composite.size());

    std::vector<Vec> X(N);
    parallel_for(0, N, [&](int i) { X[i] = chol.solve(composite[i]); });
    DenseSymMatrix G(N);
    for (int a = 0; a < N; ++a)
      for (int b = a; b < N; ++b) {
        double s = dot(composite[a], X[b]);
        G.at(a, b) = s;
        G.at(b, a) = s;
      }
    DenseSymMatrix T = dense_inverse_oracle(G);
    LinOp op = [&](const Vec& v) {
      Vec exact = chol.solve(v);
      Vec coeff(N, 0.0);
      for (int i = 0; i < N; ++i) coeff[i] = dot(X[i], v);
      Vec tc = T.apply(coeff);
      for (int i = 0; i < N; ++i) axpy(-tc[i], X[i], exact);
      return exact;
    };
    double measured = spectral_norm(op, n, 1e-8, 50000);
    double eps_k = L.eps_measured > 0 ? L.eps_measured : L.eps_target;
    cum += eps_k * eps_k;
    out.measured.push_back(measured);
    out.bound.push_back(cum);
    if (measured > cum * (1.0 + 1e-6) + 1e-14) out.holds = false;
  }
  return out;
}

static Vec forward_sub(const Cholesky& c, const Vec& b) {  // L y = b
  Vec y(c.n);
  for (int i = 0; i < c.n; ++i) {
    double s = b[i];
    for (int j = 0; j < i; ++j) s -= c.l[static_cast<size_t>(i) * c.n + j] * y[j];
    y[i] = s / c.l[static_cast<size_t>(i) * c.n + i];
  }
  return y;
}

static Vec back_sub(const Cholesky& c, const Vec& b) {  // L^T x = b
  Vec x(c.n);
  for (int i = c.n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < c.n; ++j) s -= c.l[static_cast<size_t>(j) * c.n + i] * x[j];
    x[i] = s / c.l[static_cast<size_t>(i) * c.n + i];
  }
  return x;
}

EigenRecovery eigen_recovery(const SparseSymMatrix& A, const CompressedOperator& comp,
                             int count) {
  int N = comp.N;
  DenseSymMatrix Ast = comp.has_dense() ? comp.a_st_dense : to_dense(comp.a_st_sparse);
  DenseSymMatrix G(N);  // Psi^T Psi
  for (int a = 0; a < N; ++a) {
    Vec da(A.n, 0.0);
    for (const auto& [r, v] : comp.psi[a]) da[r] = v;
    for (int b = a; b < N; ++b) {
      double s = 0.0;
      for (const auto& [r, v] : comp.psi[b]) s += v * da[r];
      G.at(a, b) = s;
      G.at(b, a) = s;
    }
  }
  Cholesky gc = cholesky(G);
  if (!gc.ok) throw std::runtime_error("eigen_recovery: Psi^T Psi not positive definite");
  // whiten: W = L^{-1} Ast L^{-T}
  DenseSymMatrix W(N);
  for (int j = 0; j < N; ++j) {
    Vec e(N, 0.0);
    e[j] = 1.0;
    Vec v = back_sub(gc, e);
    Vec t = Ast.apply(v);
    Vec w = forward_sub(gc, t);
    for (int i = 0; i < N; ++i) W.at(i, j) = w[i];
  }
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j) {
      double s = 0.5 * (W.at(i, j) + W.at(j, i));
      W.at(i, j) = s;
      W.at(j, i) = s;
    }
  int k = std::min(count, N);
  EigResult eig = dense_sym_eig(W, k);
  EigenRecovery out;
  for (int i = 0; i < k; ++i) {
    out.approx.push_back(eig.values[i]);
    Vec xi = back_sub(gc, eig.vectors[i]);
    Vec lifted(A.n, 0.0);
    for (int a = 0; a < N; ++a)
      for (const auto& [r, v] : comp.psi[a]) lifted[r] += v * xi[a];
    double nrm = norm2(lifted);
    if (nrm > 0) scal(1.0 / nrm, lifted);
    out.vectors.push_back(std::move(lifted));
  }
  return out;
}

// --------------------------------------------------------------------- IO

void save_hierarchy(const std::string& dir, const MMDHierarchy& h) {
  fs::create_directories(dir);
  write_matrix_market(dir + "/A_0.mtx", h.a0);
  json manifest;
  manifest["format"] = "EDH1";
  manifest["n"] = h.a0.n;
  manifest["depth"] = h.depth();
  manifest["kappa_bottom"] = h.kappa_bottom;
  json levels = json::array();
  json table = json::array();
  for (const auto& L : h.levels) {
    std::string sub = dir + "/level_" + std::to_string(L.level);
    fs::create_directories(sub);
    write_csx(sub + "/space.csx", L.coarse);
    write_matrix_market_columns(sub + "/psi.mtx", L.n_prev, L.psi);
    write_matrix_market(sub + "/A.mtx", L.a_reduced);
    write_matrix_market(sub + "/B.mtx", L.b_matrix);
    levels.push_back({{"level", L.level},
                      {"n_prev", L.n_prev},
                      {"n_coarse", L.n_coarse},
                      {"b_dim", L.b_dim},
                      {"eps_target", L.eps_target},
                      {"eps_measured", L.eps_measured},
                      {"delta_measured", L.delta_measured},
                      {"kappa_b", L.kappa_b}});
    table.push_back({{"Level", L.level},
                     {"Matrix", "B"},
                     {"Size", L.b_dim},
                     {"#Nonzeros", L.b_matrix.nnz()},
                     {"Condition Number", L.kappa_b},
                     {"Complexity", static_cast<double>(L.b_matrix.nnz()) * L.kappa_b}});
  }
  if (!h.levels.empty()) {
    const auto& bot = h.levels.back().a_reduced;
    table.push_back({{"Level", h.depth()},
                     {"Matrix", "A_bottom"},
                     {"Size", bot.n},
                     {"#Nonzeros", bot.nnz()},
                     {"Condition Number", h.kappa_bottom},
                     {"Complexity", static_cast<double>(bot.nnz()) * h.kappa_bottom}});
  }
  manifest["levels"] = levels;
  manifest["table"] = table;
  std::ofstream out(dir + "/manifest.json");
  out << manifest.dump(2) << '\n';
  if (!out) throw std::runtime_error("save_hierarchy: write failed in " + dir);
}

MMDHierarchy load_hierarchy(const std::string& dir) {
  std::ifstream in(dir + "/manifest.json");
  if (!in) throw std::runtime_error("load_hierarchy: missing manifest in " + dir);
  json manifest = json::parse(in);
  if (manifest.value("format", "") != "EDH1")
    throw std::runtime_error("load_hierarchy: unexpected manifest format");
  MMDHierarchy h;
  h.a0 = read_matrix_market(dir + "/A_0.mtx");
  h.kappa_bottom = manifest.value("kappa_bottom", 0.0);
  for (const auto& jl : manifest["levels"]) {
    LevelRecord L;
    L.level = jl["level"];
    L.n_prev = jl["n_prev"];
    L.n_coarse = jl["n_coarse"];
    L.b_dim = jl["b_dim"];
    L.eps_target = jl["eps_target"];
    L.eps_measured = jl["eps_measured"];
    L.delta_measured = jl["delta_measured"];
    L.kappa_b = jl["kappa_b"];
    std::string sub = dir + "/level_" + std::to_string(L.level);
    L.coarse = read_csx(sub + "/space.csx");
    L.part = L.coarse.part;
    int rows = 0;
    L.psi = read_matrix_market_columns(sub + "/psi.mtx", &rows);
    if (rows != L.n_prev) throw std::runtime_error("load_hierarchy: psi row mismatch");
    L.a_reduced = read_matrix_market(sub + "/A.mtx");
    L.b_matrix = read_matrix_market(sub + "/B.mtx");
    h.levels.push_back(std::move(L));
  }
  return h;
}

}  // namespace eds
