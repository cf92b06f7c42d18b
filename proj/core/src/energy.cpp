#include "edsolve/energy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace eds {

bool element_touches(const EnergyElement& e, int local_pos) {
  double tr = 0.0;
  for (int i = 0; i < e.local.n; ++i) tr += e.local.at(i, i);
  return e.local.at(local_pos, local_pos) > 1e-14 * tr;
}

void EnergyDecomposition::build_vertex_index() {
  vertex_index.assign(n, {});
  for (size_t k = 0; k < elements.size(); ++k) {
    const EnergyElement& e = elements[k];
    for (size_t p = 0; p < e.support.size(); ++p)
      if (element_touches(e, static_cast<int>(p)))
        vertex_index[e.support[p]].push_back(static_cast<int>(k));
  }
}

void EnergyDecomposition::validate(bool check_psd) const {
  for (const EnergyElement& e : elements) {
    if (e.local.n != static_cast<int>(e.support.size()))
      throw std::runtime_error("element support/matrix size mismatch");
    if (!std::is_sorted(e.support.begin(), e.support.end()))
      throw std::runtime_error("element support not sorted");
    for (int v : e.support)
      if (v < 0 || v >= n) throw std::runtime_error("element support out of range");
    if (check_psd && e.local.n > 0) {
      EigResult eg = dense_sym_eig(e.local, 1);
      if (eg.values[0] < -1e-10 * std::max(e.local.frobenius(), 1e-300))
        throw std::runtime_error("energy element not PSD");
    }
  }
  if (static_cast<int>(vertex_index.size()) == n) {
    for (int v = 0; v < n; ++v)
      for (int k : vertex_index[v]) {
        const EnergyElement& e = elements[k];
        auto it = std::lower_bound(e.support.begin(), e.support.end(), v);
        if (it == e.support.end() || *it != v)
          throw std::runtime_error("vertex_index inconsistent with element supports");
      }
  }
}

std::vector<int> element_neighbors(const EnergyDecomposition& dec, int e_id) {
  if (e_id < 0 || e_id >= static_cast<int>(dec.elements.size()))
    throw std::out_of_range("element id out of range");
  const EnergyElement& e = dec.elements[e_id];
  std::vector<int> out;
  for (size_t p = 0; p < e.support.size(); ++p)
    if (element_touches(e, static_cast<int>(p))) out.push_back(e.support[p]);
  return out;
}

const std::vector<int>& vertex_elements(const EnergyDecomposition& dec, int v) {
  if (v < 0 || v >= dec.n) throw std::out_of_range("vertex id out of range");
  return dec.vertex_index.at(v);
}

bool adjacent(const EnergyDecomposition& dec, int u, int v) {
  for (int k : vertex_elements(dec, u)) {
    const EnergyElement& e = dec.elements[k];
    auto iu = std::lower_bound(e.support.begin(), e.support.end(), u);
    auto iv = std::lower_bound(e.support.begin(), e.support.end(), v);
    if (iv == e.support.end() || *iv != v) continue;
    int pu = static_cast<int>(iu - e.support.begin());
    int pv = static_cast<int>(iv - e.support.begin());
    if (e.local.at(pu, pv) != 0.0) return true;
  }
  return false;
}

SparseSymMatrix assemble(const EnergyDecomposition& dec) {
  if (dec.elements.empty()) throw std::invalid_argument("assemble: empty decomposition");
  std::vector<Triplet> ts;
  for (const EnergyElement& e : dec.elements) {
    int s = e.local.n;
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j)
        if (e.local.at(i, j) != 0.0) ts.push_back({e.support[i], e.support[j], e.local.at(i, j)});
  }
  return SparseSymMatrix::from_triplets(dec.n, std::move(ts));
}

DenseSymMatrix restricted_energy(const SparseSymMatrix& A, const std::vector<int>& S) {
  for (size_t i = 1; i < S.size(); ++i)
    if (S[i] <= S[i - 1]) throw std::invalid_argument("restricted_energy: S not sorted/unique");
  int s = static_cast<int>(S.size());
  DenseSymMatrix D(s);
  for (int i = 0; i < s; ++i) {
    int r = S[i];
    for (int k = A.row_ptr[r]; k < A.row_ptr[r + 1]; ++k) {
      auto it = std::lower_bound(S.begin(), S.end(), A.col[k]);
      if (it != S.end() && *it == A.col[k]) D.at(i, static_cast<int>(it - S.begin())) = A.val[k];
    }
  }
  return D;
}

// Collect ids of elements neighboring S (deduplicated).
static std::vector<int> elements_near(const EnergyDecomposition& dec, const std::vector<int>& S) {
  std::vector<int> ids;
  std::unordered_set<int> seen;
  for (int v : S)
    for (int k : dec.vertex_index[v])
      if (seen.insert(k).second) ids.push_back(k);
  std::sort(ids.begin(), ids.end());
  return ids;
}

static bool interior_to(const EnergyDecomposition& dec, int e_id, const std::vector<int>& S) {
  const EnergyElement& e = dec.elements[e_id];
  for (size_t p = 0; p < e.support.size(); ++p) {
    if (!element_touches(e, static_cast<int>(p))) continue;
    auto it = std::lower_bound(S.begin(), S.end(), e.support[p]);
    if (it == S.end() || *it != e.support[p]) return false;
  }
  return true;
}

DenseSymMatrix interior_energy(const EnergyDecomposition& dec, const std::vector<int>& S) {
  int s = static_cast<int>(S.size());
  DenseSymMatrix D(s);
  for (int k : elements_near(dec, S)) {
    if (!interior_to(dec, k, S)) continue;
    const EnergyElement& e = dec.elements[k];
    int m = e.local.n;
    std::vector<int> pos(m, -1);
    for (int p = 0; p < m; ++p) {
      auto it = std::lower_bound(S.begin(), S.end(), e.support[p]);
      if (it != S.end() && *it == e.support[p]) pos[p] = static_cast<int>(it - S.begin());
    }
    for (int i = 0; i < m; ++i) {
      if (pos[i] < 0) continue;  // untouched support vertex outside S
      for (int j = 0; j < m; ++j)
        if (pos[j] >= 0) D.at(pos[i], pos[j]) += e.local.at(i, j);
    }
  }
  return D;
}

Vec diagonal_concentration(const EnergyElement& e) {
  int m = e.local.n;
  Vec d(m, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) d[i] += std::abs(e.local.at(i, j));
  return d;
}

DenseSymMatrix closed_energy(const EnergyDecomposition& dec, const std::vector<int>& S) {
  DenseSymMatrix D = interior_energy(dec, S);
  for (int k : elements_near(dec, S)) {
    if (interior_to(dec, k, S)) continue;
    const EnergyElement& e = dec.elements[k];
    Vec d = diagonal_concentration(e);
    for (size_t p = 0; p < e.support.size(); ++p) {
      auto it = std::lower_bound(S.begin(), S.end(), e.support[p]);
      if (it != S.end() && *it == e.support[p])
        D.at(static_cast<int>(it - S.begin()), static_cast<int>(it - S.begin())) += d[p];
    }
  }
  return D;
}

void Partition::rebuild_patch_of(int n) {
  patch_of.assign(n, -1);
  for (size_t j = 0; j < patches.size(); ++j)
    for (int v : patches[j]) patch_of[v] = static_cast<int>(j);
}

void Partition::validate(int n) const {
  std::vector<char> seen(n, 0);
  for (const auto& p : patches) {
    if (!std::is_sorted(p.begin(), p.end())) throw std::runtime_error("patch not sorted");
    for (int v : p) {
      if (v < 0 || v >= n || seen[v]) throw std::runtime_error("partition not disjoint/in-range");
      seen[v] = 1;
    }
  }
  for (int v = 0; v < n; ++v)
    if (!seen[v]) throw std::runtime_error("partition does not cover all vertices");
}

Partition singleton_partition(int n) {
  Partition p;
  p.patches.resize(n);
  for (int v = 0; v < n; ++v) p.patches[v] = {v};
  p.rebuild_patch_of(n);
  return p;
}

Partition regular_grid_partition(int nx, int ny, int s) {
  Partition p;
  int bx = (nx + s - 1) / s, by = (ny + s - 1) / s;
  p.patches.resize(static_cast<size_t>(bx) * by);
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      int b = (iy / s) * bx + (ix / s);
      p.patches[b].push_back(iy * nx + ix);
    }
  p.patches.erase(std::remove_if(p.patches.begin(), p.patches.end(),
                                 [](const std::vector<int>& q) { return q.empty(); }),
                  p.patches.end());
  for (auto& q : p.patches) std::sort(q.begin(), q.end());
  p.rebuild_patch_of(nx * ny);
  return p;
}

void write_edx(const std::string& path, const EnergyDecomposition& dec) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for write: " + path);
  f << "EDX1 " << dec.n << " " << dec.elements.size() << "\n";
  char buf[64];
  for (size_t k = 0; k < dec.elements.size(); ++k) {
    const EnergyElement& e = dec.elements[k];
    int s = e.local.n;
    f << k << " " << s;
    for (int v : e.support) f << " " << v;
    for (int i = 0; i < s; ++i)
      for (int j = i; j < s; ++j) {
        std::snprintf(buf, sizeof(buf), " %.17g", e.local.at(i, j));
        f << buf;
      }
    f << "\n";
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

EnergyDecomposition read_edx(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open for read: " + path);
  std::string magic;
  f >> magic;
  if (magic != "EDX1") throw std::runtime_error("not an EDX1 file: " + path);
  EnergyDecomposition dec;
  size_t m;
  f >> dec.n >> m;
  dec.elements.resize(m);
  for (size_t k = 0; k < m; ++k) {
    size_t id;
    int s;
    f >> id >> s;
    EnergyElement& e = dec.elements[id];
    e.support.resize(s);
    for (int i = 0; i < s; ++i) f >> e.support[i];
    e.local = DenseSymMatrix(s);
    for (int i = 0; i < s; ++i)
      for (int j = i; j < s; ++j) {
        double v;
        f >> v;
        e.local.at(i, j) = v;
        e.local.at(j, i) = v;
      }
  }
  if (!f) throw std::runtime_error("truncated EDX1 file: " + path);
  dec.build_vertex_index();
  dec.validate();
  return dec;
}

void write_partition(const std::string& path, const Partition& p) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for write: " + path);
  for (size_t j = 0; j < p.patches.size(); ++j) {
    f << j << ":";
    for (int v : p.patches[j]) f << " " << v;
    f << "\n";
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

Partition read_partition(const std::string& path, int n) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open for read: " + path);
  Partition p;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    size_t colon = line.find(':');
    if (colon == std::string::npos) throw std::runtime_error("bad partition line: " + line);
    std::istringstream rest(line.substr(colon + 1));
    std::vector<int> patch;
    int v;
    while (rest >> v) patch.push_back(v);
    std::sort(patch.begin(), patch.end());
    p.patches.push_back(std::move(patch));
  }
  p.rebuild_patch_of(n);
  p.validate(n);
  return p;
}

}  // namespace eds
