#include "edsolve/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace eds {

uint64_t SplitMix64::next() {
  uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double SplitMix64::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

SplitMix64 SplitMix64::stream(uint64_t seed, uint64_t stream_id) {
  SplitMix64 base(seed);
  uint64_t derived = base.next();
  for (uint64_t i = 0; i < stream_id; ++i) derived = base.next();
  return SplitMix64(derived);
}

namespace {

EnergyElement edge_element(int u, int v, double w) {
  EnergyElement e;
  e.support = {std::min(u, v), std::max(u, v)};
  e.local = DenseSymMatrix(2);
  e.local.at(0, 0) = w;
  e.local.at(1, 1) = w;
  e.local.at(0, 1) = -w;
  e.local.at(1, 0) = -w;
  return e;
}

EnergyElement loop_element(int v, double c) {
  EnergyElement e;
  e.support = {v};
  e.local = DenseSymMatrix(1);
  e.local.at(0, 0) = c;
  return e;
}

double dist2(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}

// Cell-bucketed proximity search over 3d points (planar points carry z = 0).
template <class F>
void proximity_pairs(const std::vector<std::array<double, 3>>& pts, double cutoff2, F&& emit) {
  double r = std::sqrt(cutoff2);
  auto key = [&](const std::array<double, 3>& p) {
    auto c = [&](double x) { return static_cast<int64_t>(std::floor(x / r)); };
    return (c(p[0]) & 0x1FFFFF) | ((c(p[1]) & 0x1FFFFF) << 21) | ((c(p[2]) & 0x1FFFFF) << 42);
  };
  std::unordered_map<int64_t, std::vector<int>> cells;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) cells[key(pts[i])].push_back(i);
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    const auto& p = pts[i];
    auto c = [&](double x) { return static_cast<int64_t>(std::floor(x / r)); };
    int64_t cx = c(p[0]), cy = c(p[1]), cz = c(p[2]);
    for (int64_t dx = -1; dx <= 1; ++dx)
      for (int64_t dy = -1; dy <= 1; ++dy)
        for (int64_t dz = -1; dz <= 1; ++dz) {
          int64_t k = ((cx + dx) & 0x1FFFFF) | (((cy + dy) & 0x1FFFFF) << 21) |
                      (((cz + dz) & 0x1FFFFF) << 42);
          auto it = cells.find(k);
          if (it == cells.end()) continue;
          for (int j : it->second) {
            if (j <= i) continue;
            double d2 = dist2(p, pts[j]);
            if (d2 > 0.0 && d2 <= cutoff2) emit(i, j, d2);
          }
        }
  }
}

void finalize(GeneratedProblem& gp) {
  gp.dec.build_vertex_index();
  gp.A = assemble(gp.dec);
}

// seeded coarse overlay of high-permeability cells over the unit square
struct ChannelMask {
  int cells = 16;
  std::vector<char> high;

  ChannelMask(uint64_t seed, double prob) : high(cells * cells, 0) {
    SplitMix64 g = SplitMix64::stream(seed, 7);
    for (auto& h : high) h = g.uniform() < prob ? 1 : 0;
  }
  bool operator()(double x, double y) const {
    int cx = std::min(cells - 1, std::max(0, static_cast<int>(x * cells)));
    int cy = std::min(cells - 1, std::max(0, static_cast<int>(y * cells)));
    return high[cy * cells + cx] != 0;
  }
};

}  // namespace

GeneratedProblem random_geometric_laplacian(int n, int d, double eta, uint64_t seed) {
  if (d != 2 && d != 3) throw std::invalid_argument("random_geometric_laplacian: d must be 2 or 3");
  GeneratedProblem gp;
  gp.kind = "geometric";
  gp.dim = d;
  gp.dec.n = n;
  SplitMix64 g = SplitMix64::stream(seed, 1);
  gp.coords.resize(n);
  for (auto& p : gp.coords) {
    p = {g.uniform(), g.uniform(), 0.0};
    if (d == 3) p[2] = g.uniform();
  }
  double cutoff2 = eta / std::pow(static_cast<double>(n), 2.0 / d);
  proximity_pairs(gp.coords, cutoff2, [&](int i, int j, double d2) {
    gp.dec.elements.push_back(edge_element(i, j, 1.0 / d2));
  });
  for (int i = 0; i < n; ++i) gp.dec.elements.push_back(loop_element(i, 1.0));
  finalize(gp);
  gp.meta["eta"] = eta;
  gp.meta["cutoff2"] = cutoff2;
  return gp;
}

GeneratedProblem knn_graph_laplacian(int n, double c, uint64_t seed) {
  GeneratedProblem gp;
  gp.kind = "knn";
  gp.dim = 2;
  gp.dec.n = n;
  SplitMix64 g = SplitMix64::stream(seed, 1);
  gp.coords.resize(n);
  for (auto& p : gp.coords) p = {g.uniform(), g.uniform(), 0.0};

  std::unordered_map<int64_t, double> edges;  // key u*n+v with u<v -> d2
  std::vector<int> idx(n);
  std::vector<double> d2s(n);
  for (int i = 0; i < n; ++i) {
    double dx = gp.coords[i][0] - 0.5, dy = gp.coords[i][1] - 0.5;
    int k = (dx * dx + dy * dy <= 0.25 * 0.25) ? 15 : 5;
    for (int j = 0; j < n; ++j) d2s[j] = dist2(gp.coords[i], gp.coords[j]);
    std::iota(idx.begin(), idx.end(), 0);
    std::nth_element(idx.begin(), idx.begin() + k, idx.end(),
                     [&](int a, int b) { return d2s[a] < d2s[b]; });
    // k nearest excluding the point itself (its own distance 0 sorts first)
    std::sort(idx.begin(), idx.begin() + k + 1,
              [&](int a, int b) { return d2s[a] < d2s[b]; });
    for (int t = 0, taken = 0; t <= k && taken < k; ++t) {
      int j = idx[t];
      if (j == i || d2s[j] == 0.0) continue;
      int u = std::min(i, j), v = std::max(i, j);
      edges.emplace(static_cast<int64_t>(u) * n + v, d2s[j]);
      ++taken;
    }
  }
  for (const auto& [key, d2] : edges) {
    int u = static_cast<int>(key / n), v = static_cast<int>(key % n);
    gp.dec.elements.push_back(edge_element(u, v, 1.0 / d2));
  }
  for (int i = 0; i < n; ++i) gp.dec.elements.push_back(loop_element(i, c));
  finalize(gp);
  gp.meta["c"] = c;
  return gp;
}

GeneratedProblem roll_surface_laplacian(int n, double a, double eta, uint64_t seed) {
  GeneratedProblem gp;
  gp.kind = "roll";
  gp.dim = 3;
  gp.dec.n = n;
  SplitMix64 g = SplitMix64::stream(seed, 1);
  double ea = std::expm1(4.0 * M_PI * a);  // e^{4 pi a} - 1
  double scale = a / std::sqrt(1.0 + a * a);
  gp.coords.resize(n);
  for (auto& p : gp.coords) {
    double t = g.uniform();
    double z = g.uniform();
    double etai = g.uniform(0.9, 1.1);
    double theta = std::log1p(t * ea) / a;
    double rho = scale * (t + 1.0 / ea);
    p = {etai * rho * std::cos(theta), etai * rho * std::sin(theta), z};
  }
  // the surface is 2-dimensional: planar density rule for the cutoff
  double cutoff2 = eta / static_cast<double>(n);
  proximity_pairs(gp.coords, cutoff2, [&](int i, int j, double d2) {
    gp.dec.elements.push_back(edge_element(i, j, 1.0 / d2));
  });
  for (int i = 0; i < n; ++i) gp.dec.elements.push_back(loop_element(i, 1.0));
  finalize(gp);
  gp.meta["a"] = a;
  gp.meta["eta"] = eta;
  return gp;
}

GeneratedProblem fd5_highcontrast(int nx, int ny, double contrast, uint64_t seed) {
  GeneratedProblem gp;
  gp.kind = "fd5";
  gp.dim = 2;
  int n = nx * ny;
  gp.dec.n = n;
  double hx = 1.0 / (nx + 1), hy = 1.0 / (ny + 1);
  ChannelMask mask(seed, 0.15);
  auto kappa = [&](double x, double y) { return mask(x, y) ? contrast : 1.0; };
  auto vx = [&](int ix) { return (ix + 1) * hx; };
  auto vy = [&](int iy) { return (iy + 1) * hy; };
  gp.coords.resize(n);
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      int v = iy * nx + ix;
      gp.coords[v] = {vx(ix), vy(iy), 0.0};
      // horizontal neighbor / right boundary
      double wx = kappa(vx(ix) + 0.5 * hx, vy(iy)) / (hx * hx);
      if (ix + 1 < nx)
        gp.dec.elements.push_back(edge_element(v, v + 1, wx));
      else
        gp.dec.elements.push_back(loop_element(v, wx));
      if (ix == 0)
        gp.dec.elements.push_back(loop_element(v, kappa(0.5 * hx, vy(iy)) / (hx * hx)));
      // vertical neighbor / top boundary
      double wy = kappa(vx(ix), vy(iy) + 0.5 * hy) / (hy * hy);
      if (iy + 1 < ny)
        gp.dec.elements.push_back(edge_element(v, v + nx, wy));
      else
        gp.dec.elements.push_back(loop_element(v, wy));
      if (iy == 0)
        gp.dec.elements.push_back(loop_element(v, kappa(vx(ix), 0.5 * hy) / (hy * hy)));
    }
  finalize(gp);
  gp.meta["contrast"] = contrast;
  return gp;
}

GeneratedProblem fem_anisotropic(int nx, int ny, double contrast, uint64_t seed) {
  GeneratedProblem gp;
  gp.kind = "fem";
  gp.dim = 2;
  int n = nx * ny;
  gp.dec.n = n;
  double hx = 1.0 / (nx + 1), hy = 1.0 / (ny + 1);
  ChannelMask mask(seed, 0.15);
  SplitMix64 g = SplitMix64::stream(seed, 2);
  gp.coords.resize(n);
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix)
      gp.coords[iy * nx + ix] = {(ix + 1) * hx, (iy + 1) * hy, 0.0};

  // grid vertex -> interior unknown (or -1 on the Dirichlet boundary)
  auto unknown = [&](int gx, int gy) {
    if (gx <= 0 || gy <= 0 || gx > nx || gy > ny) return -1;
    return (gy - 1) * nx + (gx - 1);
  };
  auto px = [&](int gx) { return gx * hx; };
  auto py = [&](int gy) { return gy * hy; };

  auto add_triangle = [&](std::array<int, 3> gxs, std::array<int, 3> gys) {
    double x[3], y[3];
    int id[3];
    for (int t = 0; t < 3; ++t) {
      x[t] = px(gxs[t]);
      y[t] = py(gys[t]);
      id[t] = unknown(gxs[t], gys[t]);
    }
    double cx = (x[0] + x[1] + x[2]) / 3.0, cy = (y[0] + y[1] + y[2]) / 3.0;
    double theta = M_PI * (cx + cy);
    double mu = mask(cx, cy) ? contrast : 1.0;
    double e1 = mu * (1.0 + g.uniform(-0.1, 0.1));
    double e2 = mu * (1.0 + g.uniform(-0.1, 0.1));
    double ct = std::cos(theta), st = std::sin(theta);
    // a = R diag(e1, e2) R^T with R = [[c, s], [-s, c]]
    double a11 = ct * ct * e1 + st * st * e2;
    double a22 = st * st * e1 + ct * ct * e2;
    double a12 = ct * st * (e1 - e2);

    double det = (x[1] - x[0]) * (y[2] - y[0]) - (x[2] - x[0]) * (y[1] - y[0]);
    double area = 0.5 * std::abs(det);
    double bx[3], by[3];
    for (int t = 0; t < 3; ++t) {
      int u = (t + 1) % 3, v = (t + 2) % 3;
      bx[t] = (y[u] - y[v]) / det;
      by[t] = (x[v] - x[u]) / det;
    }
    std::vector<int> keep;
    for (int t = 0; t < 3; ++t)
      if (id[t] >= 0) keep.push_back(t);
    if (keep.empty()) return;
    std::sort(keep.begin(), keep.end(), [&](int p, int q) { return id[p] < id[q]; });
    EnergyElement e;
    e.local = DenseSymMatrix(static_cast<int>(keep.size()));
    for (size_t p = 0; p < keep.size(); ++p) {
      e.support.push_back(id[keep[p]]);
      for (size_t q = p; q < keep.size(); ++q) {
        int tp = keep[p], tq = keep[q];
        double w = area * (bx[tp] * (a11 * bx[tq] + a12 * by[tq]) +
                           by[tp] * (a12 * bx[tq] + a22 * by[tq]));
        e.local.at(static_cast<int>(p), static_cast<int>(q)) = w;
        e.local.at(static_cast<int>(q), static_cast<int>(p)) = w;
      }
    }
    gp.dec.elements.push_back(std::move(e));
  };

  for (int gy = 0; gy <= ny; ++gy)
    for (int gx = 0; gx <= nx; ++gx) {
      add_triangle({gx, gx + 1, gx}, {gy, gy, gy + 1});
      add_triangle({gx + 1, gx + 1, gx}, {gy, gy + 1, gy + 1});
    }
  finalize(gp);
  gp.meta["contrast"] = contrast;
  return gp;
}

}  // namespace eds
