#include "edsolve/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <unordered_set>

namespace eds {

double connection(const EnergyDecomposition& dec, const std::vector<int>& Pj,
                  const std::vector<int>& Pj2) {
  std::unordered_set<int> in_a(Pj.begin(), Pj.end());
  std::unordered_set<int> in_b(Pj2.begin(), Pj2.end());
  std::unordered_set<int> seen;
  double total = 0.0;
  for (int v : Pj) {
    for (int k : dec.vertex_index[v]) {
      if (!seen.insert(k).second) continue;
      const EnergyElement& e = dec.elements[k];
      bool touches_b = false;
      for (size_t p = 0; p < e.support.size(); ++p)
        if (in_b.count(e.support[p]) && element_touches(e, static_cast<int>(p))) {
          touches_b = true;
          break;
        }
      if (!touches_b) continue;
      int m = e.local.n;
      for (int i = 0; i < m; ++i) {
        if (!in_a.count(e.support[i])) continue;
        for (int jj = 0; jj < m; ++jj)
          if (in_b.count(e.support[jj])) total += std::abs(e.local.at(i, jj));
      }
    }
  }
  return total;
}

ClusterState ClusterState::init(const EnergyDecomposition& dec, int q) {
  ClusterState st;
  st.dec = &dec;
  st.q = q;
  int n = dec.n;
  st.patch_vertices.resize(n);
  st.active.assign(n, 1);
  st.operated.assign(n, 0);
  st.delta.assign(n, 0.0);
  st.eps.assign(n, 0.0);
  st.phi.resize(n);
  st.con.resize(n);
  for (int v = 0; v < n; ++v) {
    st.patch_vertices[v] = {v};
    // delta of a singleton is the closed-energy scalar
    st.delta[v] = closed_energy(dec, {v}).at(0, 0);
    st.eps[v] = 0.0;  // q >= |P|
    st.phi[v] = {Vec{1.0}};
  }
  // initial connections from element couplings
  for (const EnergyElement& e : dec.elements) {
    int m = e.local.n;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        double w = std::abs(e.local.at(i, j));
        if (w == 0.0) continue;
        int u = e.support[i], v = e.support[j];
        st.con[u][v] += w;
        st.con[v][u] += w;
      }
  }
  return st;
}

bool find_match(ClusterState& state, int j, double eps, double c) {
  const EnergyDecomposition& dec = *state.dec;
  // best-connected candidate: active, unoperated, alive
  int best = -1;
  double best_con = 0.0;
  for (const auto& [t, w] : state.con[j]) {
    if (!state.alive(t) || !state.active[t] || state.operated[t]) continue;
    if (w > best_con || (w == best_con && best >= 0 && t < best)) {
      best = t;
      best_con = w;
    }
  }
  if (best < 0 || best_con <= 0.0) return false;

  std::vector<int> uni;
  uni.reserve(state.patch_vertices[j].size() + state.patch_vertices[best].size());
  std::merge(state.patch_vertices[j].begin(), state.patch_vertices[j].end(),
             state.patch_vertices[best].begin(), state.patch_vertices[best].end(),
             std::back_inserter(uni));

  int s = static_cast<int>(uni.size());
  int q = state.q;
  double eps_u;
  std::vector<Vec> phi_u;
  if (q >= s) {
    eps_u = 0.0;
    for (int cidx = 0; cidx < s; ++cidx) {
      Vec e(s, 0.0);
      e[cidx] = 1.0;
      phi_u.push_back(e);
    }
  } else {
    DenseSymMatrix interior = interior_energy(dec, uni);
    EigResult eig = dense_sym_eig(interior, q + 1);
    eps_u = (eig.values[q] <= 1e-12) ? kInfFactor : 1.0 / std::sqrt(eig.values[q]);
    for (int cidx = 0; cidx < q; ++cidx) phi_u.push_back(eig.vectors[cidx]);
  }
  if (!(eps_u <= eps)) return false;
  double delta_u = condition_factor(dec, uni, phi_u);
  if (!(delta_u * eps_u * eps_u <= c)) return false;

  // merge: union kept at slot j, slot best dies
  state.patch_vertices[j] = std::move(uni);
  state.patch_vertices[best].clear();
  state.delta[j] = delta_u;
  state.eps[j] = eps_u;
  state.phi[j] = std::move(phi_u);
  state.operated[j] = 1;
  state.active[j] = 1;
  for (const auto& [t, w] : state.con[best]) {
    if (t == j) continue;
    state.con[j][t] += w;
    auto& ct = state.con[t];
    ct[j] += w;
    ct.erase(best);
  }
  state.con[j].erase(best);
  state.con[best].clear();
  return true;
}

Partition pair_cluster(const EnergyDecomposition& dec, double eps, double c,
                       const ClusterOptions& opts, ClusterReport* report) {
  if (eps <= 0.0) throw std::invalid_argument("pair_cluster: eps must be positive");
  if (c < 1.0) throw std::invalid_argument("pair_cluster: c must be >= 1");
  ClusterState st = ClusterState::init(dec, opts.q);
  int sweeps = 0, merges = 0;

  auto any_active = [&]() {
    for (size_t j = 0; j < st.patch_vertices.size(); ++j)
      if (st.alive(static_cast<int>(j)) && st.active[j]) return true;
    return false;
  };

  while (any_active()) {
    ++sweeps;
    std::vector<int> order;
    for (size_t j = 0; j < st.patch_vertices.size(); ++j)
      if (st.alive(static_cast<int>(j)) && st.active[j]) order.push_back(static_cast<int>(j));
    auto key = [&](int j) {
      double d = st.delta[j];
      if (opts.size_weighted_sort) d *= static_cast<double>(st.patch_vertices[j].size());
      return d;
    };
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      double ka = key(a), kb = key(b);
      if (ka != kb) return ka > kb;  // delta descending
      size_t sa = st.patch_vertices[a].size(), sb = st.patch_vertices[b].size();
      if (sa != sb) return sa > sb;  // larger patch first
      return a < b;                  // smaller id first
    });
    for (size_t j = 0; j < st.patch_vertices.size(); ++j) st.operated[j] = 0;

    bool progress = false;
    for (int j : order) {
      if (!st.alive(j) || !st.active[j] || st.operated[j]) continue;
      if (find_match(st, j, eps, c)) {
        progress = true;
        ++merges;
      } else {
        bool all_unoperated = true;
        for (const auto& [t, w] : st.con[j]) {
          (void)w;
          if (st.alive(t) && st.operated[t]) {
            all_unoperated = false;
            break;
          }
        }
        if (all_unoperated) {
          st.active[j] = 0;
          progress = true;
        }
      }
    }
    if (!progress) {
      // safety: should be unreachable (a merge-free sweep always freezes the
      // first processed patch); freeze the remainder rather than loop
      for (size_t j = 0; j < st.patch_vertices.size(); ++j) st.active[j] = 0;
    }
  }

  Partition part;
  for (size_t j = 0; j < st.patch_vertices.size(); ++j)
    if (st.alive(static_cast<int>(j))) part.patches.push_back(st.patch_vertices[j]);
  std::sort(part.patches.begin(), part.patches.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) { return a[0] < b[0]; });
  part.rebuild_patch_of(dec.n);
  part.validate(dec.n);

  if (report) {
    report->sweeps = sweeps;
    report->merges = merges;
    report->measurements = partition_measurements(dec, part, opts.q);
    report->frozen_mergeable = 0;
    if (opts.report_frozen) {
      // map final slots back: every surviving slot is inactive at termination,
      // so test each patch against each neighbor once
      for (size_t a = 0; a < part.patches.size(); ++a) {
        bool mergeable = false;
        for (size_t b = 0; b < part.patches.size() && !mergeable; ++b) {
          if (a == b) continue;
          if (connection(dec, part.patches[a], part.patches[b]) <= 0.0) continue;
          std::vector<int> uni;
          std::merge(part.patches[a].begin(), part.patches[a].end(), part.patches[b].begin(),
                     part.patches[b].end(), std::back_inserter(uni));
          double e = error_factor(dec, uni, opts.q);
          if (!(e <= eps)) continue;
          DenseSymMatrix interior = interior_energy(dec, uni);
          EigResult eig = dense_sym_eig(interior, opts.q);
          std::vector<Vec> phi;
          for (int cc = 0; cc < opts.q && cc < static_cast<int>(eig.vectors.size()); ++cc)
            phi.push_back(eig.vectors[cc]);
          double d = condition_factor(dec, uni, phi);
          if (d * e * e <= c) mergeable = true;
        }
        if (mergeable) ++report->frozen_mergeable;
      }
    }
  }
  return part;
}

LocalityProfile locality_profile(const EnergyDecomposition& dec, int k_max, int sample_count) {
  int n = dec.n;
  // vertex adjacency from element couplings
  std::vector<std::vector<int>> adj(n);
  for (const EnergyElement& e : dec.elements) {
    int m = e.local.n;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        if (e.local.at(i, j) != 0.0) {
          adj[e.support[i]].push_back(e.support[j]);
          adj[e.support[j]].push_back(e.support[i]);
        }
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  LocalityProfile prof;
  prof.mean_ball_size.assign(k_max, 0.0);
  int samples = std::min(sample_count, n);
  std::vector<int> dist(n);
  for (int s = 0; s < samples; ++s) {
    int src = static_cast<int>((static_cast<long long>(s) * n) / samples);
    std::fill(dist.begin(), dist.end(), -1);
    std::queue<int> bfs;
    bfs.push(src);
    dist[src] = 0;
    std::vector<int> ball_size(k_max + 1, 0);
    ball_size[0] = 1;
    while (!bfs.empty()) {
      int v = bfs.front();
      bfs.pop();
      if (dist[v] >= k_max) continue;
      for (int w : adj[v])
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          ball_size[dist[w]]++;
          bfs.push(w);
        }
    }
    int cum = 1;
    for (int k = 1; k <= k_max; ++k) {
      cum += ball_size[k];
      prof.mean_ball_size[k - 1] += cum;
    }
  }
  for (double& v : prof.mean_ball_size) v /= samples;
  prof.non_local = prof.mean_ball_size[0] >= 0.9 * n;
  // doubling estimate on the largest unsaturated ball; low-order terms make a
  // small-k log-log fit underestimate the dimension
  int k2 = 0;
  for (int k = 1; k <= k_max; ++k)
    if (prof.mean_ball_size[k - 1] < 0.45 * n) k2 = k;
  int k1 = k2 / 2;
  if (k1 >= 1 && prof.mean_ball_size[k1 - 1] > 0.0) {
    prof.dimension_estimate = std::log(prof.mean_ball_size[k2 - 1] / prof.mean_ball_size[k1 - 1]) /
                              std::log(static_cast<double>(k2) / k1);
  } else {
    prof.dimension_estimate = prof.non_local ? static_cast<double>(n) : 0.0;
  }
  return prof;
}

}  // namespace eds
