#include "edsolve/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace eds {

Vec interior_spectrum(const EnergyDecomposition& dec, const std::vector<int>& P, int count) {
  if (P.empty()) throw std::invalid_argument("interior_spectrum: empty patch");
  if (count > static_cast<int>(P.size())) throw std::invalid_argument("interior_spectrum: count > |P|");
  DenseSymMatrix D = interior_energy(dec, P);
  return dense_sym_eig(D, count).values;
}

double error_factor(const EnergyDecomposition& dec, const std::vector<int>& P, int q) {
  if (q < 1) throw std::invalid_argument("error_factor: q >= 1 required");
  int s = static_cast<int>(P.size());
  if (q >= s) return 0.0;
  Vec lam = interior_spectrum(dec, P, q + 1);
  if (lam[q] <= 1e-12) return kInfFactor;
  return 1.0 / std::sqrt(lam[q]);
}

double condition_factor(const EnergyDecomposition& dec, const std::vector<int>& P,
                        const std::vector<Vec>& phi_columns) {
  DenseSymMatrix closed = closed_energy(dec, P);
  Cholesky C = cholesky(closed);
  if (!C.ok) throw std::runtime_error("condition_factor: closed energy singular on patch");
  int q = static_cast<int>(phi_columns.size());
  DenseSymMatrix gram(q);
  std::vector<Vec> sol(q);
  for (int c = 0; c < q; ++c) sol[c] = C.solve(phi_columns[c]);
  for (int i = 0; i < q; ++i)
    for (int j = i; j < q; ++j) {
      double v = dot(phi_columns[i], sol[j]);
      gram.at(i, j) = v;
      gram.at(j, i) = v;
    }
  double lam_min = dense_sym_eig(gram, 1).values[0];
  if (lam_min <= 0.0) throw std::runtime_error("condition_factor: Gram matrix not PD");
  return 1.0 / lam_min;
}

double alpha_factor(const EnergyDecomposition& dec, const std::vector<int>& P,
                    const HouseholderFrame& frame) {
  int s = frame.s, u = frame.complement_dim();
  if (u == 0) return 1.0;
  DenseSymMatrix interior = interior_energy(dec, P);
  DenseSymMatrix closed = closed_energy(dec, P);
  // U columns materialized at patch scale
  std::vector<Vec> U(u);
  for (int c = 0; c < u; ++c) {
    Vec e(u, 0.0);
    e[c] = 1.0;
    U[c] = apply_complement(frame, ComplementMode::U_y, e);
  }
  DenseSymMatrix g_int(u), g_cl(u);
  for (int i = 0; i < u; ++i) {
    Vec ai = interior.apply(U[i]);
    Vec ci = closed.apply(U[i]);
    for (int j = i; j < u; ++j) {
      g_int.at(i, j) = g_int.at(j, i) = dot(U[j], ai);
      g_cl.at(i, j) = g_cl.at(j, i) = dot(U[j], ci);
    }
  }
  double scale = std::max(g_int.frobenius(), 1e-300);
  Cholesky L = cholesky(g_int);
  if (!L.ok) return kInfFactor;  // singular pencil, degenerate patch
  // pencil singularity threshold relative to the interior Gram
  for (int i = 0; i < u; ++i)
    if (L.l[static_cast<size_t>(i) * u + i] * L.l[static_cast<size_t>(i) * u + i] < 1e-12 * scale)
      return kInfFactor;
  // C = L^{-1} g_cl L^{-T}, whitened pencil
  auto lower_solve = [&](Vec b) {
    Vec y(u);
    for (int i = 0; i < u; ++i) {
      double sum = b[i];
      for (int k = 0; k < i; ++k) sum -= L.l[static_cast<size_t>(i) * u + k] * y[k];
      y[i] = sum / L.l[static_cast<size_t>(i) * u + i];
    }
    return y;
  };
  std::vector<Vec> X(u);  // X = L^{-1} g_cl (columns)
  for (int c = 0; c < u; ++c) {
    Vec col(u);
    for (int r = 0; r < u; ++r) col[r] = g_cl.at(r, c);
    X[c] = lower_solve(col);
  }
  DenseSymMatrix W(u);  // W = X L^{-T} = (L^{-1} X^T)^T
  for (int r = 0; r < u; ++r) {
    Vec row(u);
    for (int c = 0; c < u; ++c) row[c] = X[c][r];
    Vec t = lower_solve(row);
    for (int c = 0; c < u; ++c) W.at(r, c) = t[c];
  }
  for (int i = 0; i < u; ++i)
    for (int j = i + 1; j < u; ++j) {
      double v = 0.5 * (W.at(i, j) + W.at(j, i));
      W.at(i, j) = W.at(j, i) = v;
    }
  double lam_max = dense_sym_eig(W, u).values[u - 1];
  return std::max(lam_max, 1.0);
}

PartitionMeasurements partition_measurements(const EnergyDecomposition& dec,
                                             const Partition& part, int q, bool with_alpha) {
  PartitionMeasurements out;
  out.per_patch.reserve(part.patches.size());
  for (size_t j = 0; j < part.patches.size(); ++j) {
    const std::vector<int>& P = part.patches[j];
    int s = static_cast<int>(P.size());
    PatchMeasurement m;
    m.patch_id = static_cast<int>(j);
    m.size = s;
    m.q = q;
    int count = std::min(q + 1, s);
    DenseSymMatrix interior = interior_energy(dec, P);
    EigResult eig = dense_sym_eig(interior, count);
    m.lambda_interior = eig.values;
    std::vector<Vec> phi;
    if (q >= s) {
      m.eps = 0.0;
      for (int c = 0; c < s; ++c) {
        Vec e(s, 0.0);
        e[c] = 1.0;
        phi.push_back(e);
      }
    } else {
      m.eps = (eig.values[q] <= 1e-12) ? kInfFactor : 1.0 / std::sqrt(eig.values[q]);
      for (int c = 0; c < q; ++c) phi.push_back(eig.vectors[c]);
    }
    m.delta = condition_factor(dec, P, phi);
    if (with_alpha) {
      if (q >= s) {
        m.alpha = 1.0;
      } else {
        HouseholderFrame frame = householder_extend(phi);
        m.alpha = alpha_factor(dec, P, frame);
      }
    }
    out.eps = std::max(out.eps, m.eps);
    out.delta = std::max(out.delta, m.delta);
    out.alpha = std::max(out.alpha, m.alpha);
    out.per_patch.push_back(std::move(m));
  }
  return out;
}

void write_measurement_csv(const std::string& path, const PartitionMeasurements& m, int q) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for write: " + path);
  f << "patch_id,size";
  for (int i = 1; i <= q + 1; ++i) f << ",lambda_" << i;
  f << ",eps,delta,alpha\n";
  char buf[64];
  for (const PatchMeasurement& p : m.per_patch) {
    f << p.patch_id << "," << p.size;
    for (int i = 0; i < q + 1; ++i) {
      double v = i < static_cast<int>(p.lambda_interior.size()) ? p.lambda_interior[i] : 0.0;
      std::snprintf(buf, sizeof(buf), ",%.17g", v);
      f << buf;
    }
    std::snprintf(buf, sizeof(buf), ",%.17g,%.17g,%.17g\n", p.eps, p.delta, p.alpha);
    f << buf;
  }
}

}  // namespace eds
