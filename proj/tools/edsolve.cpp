// edsolve command-line front end.
//
// Subcommands: generate, partition, compress, localize, mmd, solve, verify,
// report. Every output directory gets a manifest.json carrying the run
// configuration, a config hash, and hashes of the input files so runs can be
// reproduced byte for byte.
//
// Exit codes: 0 success, 2 predicate violation, 3 solver non-convergence.

#include "edsolve/coarse.hpp"
#include "edsolve/localize.hpp"
#include "edsolve/mmd.hpp"
#include "edsolve/partition.hpp"
#include "edsolve/problems.hpp"
#include "edsolve/threads.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace eds;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitViolation = 2;
constexpr int kExitNoConverge = 3;

uint64_t fnv1a(const void* data, size_t len, uint64_t h = 0xCBF29CE484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::string hash_string(const std::string& s) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(s.data(), s.size())));
  return buf;
}

std::string hash_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "missing";
  uint64_t h = 0xCBF29CE484222325ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0)
    h = fnv1a(buf, static_cast<size_t>(in.gcount()), h);
  char out[20];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

void write_manifest(const std::string& dir, json config,
                    const std::vector<std::string>& inputs) {
  json m;
  m["config"] = config;
  m["config_hash"] = hash_string(config.dump());
  m["version"] = "0.1.0";
  json ih = json::object();
  for (const auto& p : inputs) ih[p] = hash_file(p);
  m["input_hashes"] = ih;
  std::ofstream out(dir + "/run_manifest.json");
  out << m.dump(2) << '\n';
}

void write_vector(const std::string& path, const Vec& v) {
  std::ofstream out(path);
  out << v.size() << '\n';
  char buf[32];
  for (double x : v) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out << buf << '\n';
  }
}

Vec read_vector(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vector file " + path);
  size_t n = 0;
  in >> n;
  Vec v(n);
  for (double& x : v) in >> x;
  if (!in) throw std::runtime_error("truncated vector file " + path);
  return v;
}

void write_coords_csv(const std::string& path, const GeneratedProblem& gp) {
  std::ofstream out(path);
  out << "vertex,x,y,z\n";
  char buf[96];
  for (size_t i = 0; i < gp.coords.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", i, gp.coords[i][0],
                  gp.coords[i][1], gp.coords[i][2]);
    out << buf;
  }
}

// ------------------------------------------------------------------ verify

bool psd_within(const DenseSymMatrix& M, double slack) {
  if (M.n == 0) return true;
  EigResult e = dense_sym_eig(M, 1);
  return e.values[0] >= slack;
}

int run_verify_energy(uint64_t seed, int trials) {
  SplitMix64 g = SplitMix64::stream(seed, 3);
  int failures = 0;
  for (int t = 0; t < trials; ++t) {
    int n = 10 + static_cast<int>(g.next() % 31);
    GeneratedProblem gp = random_geometric_laplacian(n, 2, 3.0, g.next());
    DenseSymMatrix Ad = to_dense(gp.A);
    double slack = -1e-10 * (1.0 + Ad.frobenius());

    std::vector<int> S;
    for (int v = 0; v < n; ++v)
      if (g.uniform() < 0.5) S.push_back(v);
    if (S.empty()) S.push_back(static_cast<int>(g.next() % n));
    DenseSymMatrix AS = restricted_energy(gp.A, S);
    DenseSymMatrix lo = interior_energy(gp.dec, S);
    DenseSymMatrix hi = closed_energy(gp.dec, S);
    auto diff = [](const DenseSymMatrix& a, const DenseSymMatrix& b) {
      DenseSymMatrix d = a;
      for (size_t i = 0; i < d.a.size(); ++i) d.a[i] -= b.a[i];
      return d;
    };
    if (!psd_within(diff(AS, lo), slack) || !psd_within(diff(hi, AS), slack)) ++failures;

    // random partition sandwich
    int parts = 2 + static_cast<int>(g.next() % 4);
    Partition P;
    P.patches.resize(parts);
    for (int v = 0; v < n; ++v) P.patches[g.next() % parts].push_back(v);
    P.patches.erase(std::remove_if(P.patches.begin(), P.patches.end(),
                                   [](const std::vector<int>& p) { return p.empty(); }),
                    P.patches.end());
    P.rebuild_patch_of(n);
    DenseSymMatrix sum_lo(n), sum_hi(n);
    for (const auto& patch : P.patches) {
      DenseSymMatrix l = interior_energy(gp.dec, patch);
      DenseSymMatrix h = closed_energy(gp.dec, patch);
      for (size_t a = 0; a < patch.size(); ++a)
        for (size_t b = 0; b < patch.size(); ++b) {
          sum_lo.at(patch[a], patch[b]) += l.at(a, b);
          sum_hi.at(patch[a], patch[b]) += h.at(a, b);
        }
    }
    if (!psd_within(diff(Ad, sum_lo), slack) || !psd_within(diff(sum_hi, Ad), slack))
      ++failures;
  }
  std::cout << "energy suite: " << trials << " trials, " << failures << " failures\n";
  return failures == 0 ? 0 : kExitViolation;
}

int run_verify_decay(int n, uint64_t seed) {
  GeneratedProblem gp = random_geometric_laplacian(n, 2, 3.0, seed);
  Partition part = pair_cluster(gp.dec, std::sqrt(1e-2), 50.0);
  CoarseSpace cs = construct_phi(gp.dec, part, 1);
  CompressedOperator exact = exact_psi(gp.A, cs);
  auto adj = patch_adjacency(gp.dec, cs.part);
  PartitionMeasurements pm = partition_measurements(gp.dec, part, 1, true);
  SplitMix64 g = SplitMix64::stream(seed, 4);
  int failures = 0;
  for (int t = 0; t < 5; ++t) {
    int col = static_cast<int>(g.next() % cs.N);
    int home = cs.patch_of_column(col);
    double alpha = pm.per_patch[home].alpha;
    double delta = pm.per_patch[home].delta;
    DecayCertificate cert = decay_certificate(gp.A, cs, adj, exact, col, alpha, delta, 1e-10);
    if (!cert.holds) ++failures;
    std::cout << "column " << col << ": radii " << cert.error2.size()
              << (cert.holds ? " ok" : " VIOLATED") << '\n';
  }
  return failures == 0 ? 0 : kExitViolation;
}

int run_verify_mmd(int n, uint64_t seed) {
  GeneratedProblem gp = random_geometric_laplacian(n, 2, 3.0, seed);
  Partition part = pair_cluster(gp.dec, std::sqrt(1e-2), 50.0);
  CoarseSpace cs = construct_phi(gp.dec, part, 1);
  CompressedOperator comp = exact_psi(gp.A, cs);
  SparseSymMatrix B = build_b_matrix(gp.A, cs);

  // A^{-1} = U B^{-1} U^T + Psi A_st^{-1} Psi^T, checked densely
  DenseSymMatrix Ainv = dense_inverse_oracle(to_dense(gp.A));
  DenseSymMatrix rebuilt(n);
  Cholesky bchol = cholesky(to_dense(B));
  std::vector<int> off(part.size() + 1, 0);
  for (int j = 0; j < part.size(); ++j) off[j + 1] = off[j] + cs.frames[j].complement_dim();
  for (int c = 0; c < n; ++c) {
    Vec e(n, 0.0);
    e[c] = 1.0;
    Vec z(off.back(), 0.0);
    for (int j = 0; j < part.size(); ++j) {
      int cd = cs.frames[j].complement_dim();
      if (cd == 0) continue;
      Vec xp(part.patches[j].size());
      for (size_t r = 0; r < part.patches[j].size(); ++r) xp[r] = e[part.patches[j][r]];
      Vec u = apply_complement(cs.frames[j], ComplementMode::UT_x, xp);
      std::copy(u.begin(), u.end(), z.begin() + off[j]);
    }
    Vec y = bchol.solve(z);
    Vec x(n, 0.0);
    for (int j = 0; j < part.size(); ++j) {
      int cd = cs.frames[j].complement_dim();
      if (cd == 0) continue;
      Vec yb(y.begin() + off[j], y.begin() + off[j] + cd);
      Vec xp = apply_complement(cs.frames[j], ComplementMode::U_y, yb);
      for (size_t r = 0; r < part.patches[j].size(); ++r) x[part.patches[j][r]] += xp[r];
    }
    Vec pc = compress_apply(comp, e);
    axpy(1.0, pc, x);
    for (int r = 0; r < n; ++r) rebuilt.at(r, c) = x[r];
  }
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < Ainv.a.size(); ++i) {
    double d = Ainv.a[i] - rebuilt.a[i];
    num += d * d;
    den += Ainv.a[i] * Ainv.a[i];
  }
  double rel = std::sqrt(num / den);
  std::cout << "one-level identity relative Frobenius error: " << rel << '\n';
  return rel <= 1e-8 ? 0 : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"energy-decomposition operator compression and multiresolution solver"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker thread cap (0 = auto)");

  // ---- generate
  auto* cmd_gen = app.add_subcommand("generate", "write a seeded test problem");
  std::string g_kind = "geometric", g_out = "problem";
  int g_n = 1000, g_d = 2, g_nx = 50, g_ny = 50;
  double g_eta = 2.5, g_a = 0.1, g_c = 50.0, g_contrast = 1e4;
  uint64_t g_seed = 7;
  cmd_gen->add_option("--kind", g_kind, "geometric|knn|roll|fd5|fem")->required();
  cmd_gen->add_option("--n", g_n);
  cmd_gen->add_option("--d", g_d);
  cmd_gen->add_option("--eta", g_eta);
  cmd_gen->add_option("--a", g_a);
  cmd_gen->add_option("--c", g_c);
  cmd_gen->add_option("--nx", g_nx);
  cmd_gen->add_option("--ny", g_ny);
  cmd_gen->add_option("--contrast", g_contrast);
  cmd_gen->add_option("--seed", g_seed);
  cmd_gen->add_option("--out", g_out, "output directory");

  // ---- partition
  auto* cmd_part = app.add_subcommand("partition", "adaptive pair clustering");
  std::string p_edx, p_out = "partition_out";
  double p_eps2 = 1e-3, p_c = 50.0;
  int p_q = 1, p_regular = 0, p_nx = 0, p_ny = 0;
  cmd_part->add_option("--edx", p_edx)->required();
  cmd_part->add_option("--eps2", p_eps2);
  cmd_part->add_option("--c", p_c);
  cmd_part->add_option("--q", p_q);
  cmd_part->add_option("--regular", p_regular, "uniform s x s grid baseline (needs --nx/--ny)");
  cmd_part->add_option("--nx", p_nx);
  cmd_part->add_option("--ny", p_ny);
  cmd_part->add_option("--out", p_out);

  // ---- compress
  auto* cmd_comp = app.add_subcommand("compress", "build the compressed operator");
  std::string c_edx, c_part, c_out = "compress_out";
  double c_eps_loc2 = 0.0;
  int c_q = 1;
  bool c_exact = false, c_measure = false;
  double c_eps2_bound = 0.0;
  cmd_comp->add_option("--edx", c_edx)->required();
  cmd_comp->add_option("--partition", c_part)->required();
  cmd_comp->add_option("--q", c_q);
  cmd_comp->add_flag("--exact", c_exact, "dense exact Psi (desk scale)");
  cmd_comp->add_option("--eps-loc2", c_eps_loc2, "localization tolerance squared");
  cmd_comp->add_flag("--measure", c_measure, "measure compression error (desk scale)");
  cmd_comp->add_option("--eps2", c_eps2_bound, "bound to check the measured error against");
  cmd_comp->add_option("--out", c_out);

  // ---- localize
  auto* cmd_loc = app.add_subcommand("localize", "localized basis for an existing space");
  std::string l_edx, l_csx, l_out = "localize_out";
  double l_eps_loc = 1e-3;
  cmd_loc->add_option("--edx", l_edx)->required();
  cmd_loc->add_option("--space", l_csx)->required();
  cmd_loc->add_option("--eps-loc", l_eps_loc);
  cmd_loc->add_option("--out", l_out);

  // ---- mmd
  auto* cmd_mmd = app.add_subcommand("mmd", "multiresolution decomposition");
  std::string m_edx, m_out = "hierarchy";
  std::vector<double> m_schedule;
  double m_c = 50.0;
  int m_q = 1, m_floor = 512;
  bool m_exact = false, m_strict = false;
  cmd_mmd->add_option("--edx", m_edx)->required();
  cmd_mmd->add_option("--schedule", m_schedule, "per-level eps^2 values (comma separated)")
      ->required()
      ->delimiter(',');
  cmd_mmd->add_option("--c", m_c);
  cmd_mmd->add_option("--q", m_q);
  cmd_mmd->add_option("--floor", m_floor);
  cmd_mmd->add_flag("--exact", m_exact);
  cmd_mmd->add_flag("--strict-loc", m_strict, "eps_loc = eps^2 instead of eps");

  cmd_mmd->add_option("--out", m_out);

  // ---- solve
  auto* cmd_solve = app.add_subcommand("solve", "multilevel solve");
  std::string s_dir, s_rhs = "ones", s_out = "solve_out";
  double s_tol = 1e-5;
  int s_maxcomp = 500;
  bool s_nocomp = false;
  cmd_solve->add_option("--hierarchy", s_dir)->required();
  cmd_solve->add_option("--rhs", s_rhs, "ones | random:<seed> | path to vector file");
  cmd_solve->add_option("--tol", s_tol);
  cmd_solve->add_option("--max-compensation", s_maxcomp);
  cmd_solve->add_flag("--no-compensation", s_nocomp);
  cmd_solve->add_option("--out", s_out);

  // ---- verify
  auto* cmd_verify = app.add_subcommand("verify", "theorem-backed check suites");
  std::string v_suite = "energy";
  int v_n = 300, v_trials = 200;
  uint64_t v_seed = 11;
  cmd_verify->add_option("--suite", v_suite, "energy|decay|mmd")->required();
  cmd_verify->add_option("--n", v_n);
  cmd_verify->add_option("--trials", v_trials);
  cmd_verify->add_option("--seed", v_seed);

  // ---- report
  auto* cmd_report = app.add_subcommand("report", "print a hierarchy manifest table as CSV");
  std::string r_dir;
  cmd_report->add_option("--hierarchy", r_dir)->required();

  CLI11_PARSE(app, argc, argv);
  set_thread_count(threads);

  try {
    if (*cmd_gen) {
      GeneratedProblem gp;
      if (g_kind == "geometric")
        gp = random_geometric_laplacian(g_n, g_d, g_eta, g_seed);
      else if (g_kind == "knn")
        gp = knn_graph_laplacian(g_n, g_c, g_seed);
      else if (g_kind == "roll")
        gp = roll_surface_laplacian(g_n, g_a, g_eta, g_seed);
      else if (g_kind == "fd5")
        gp = fd5_highcontrast(g_nx, g_ny, g_contrast, g_seed);
      else if (g_kind == "fem")
        gp = fem_anisotropic(g_nx, g_ny, g_contrast, g_seed);
      else
        throw CLI::ValidationError("--kind", "unknown kind " + g_kind);
      fs::create_directories(g_out);
      write_edx(g_out + "/problem.edx", gp.dec);
      write_matrix_market(g_out + "/A.mtx", gp.A);
      write_coords_csv(g_out + "/coords.csv", gp);
      json cfg = {{"cmd", "generate"}, {"kind", g_kind},     {"n", gp.dec.n},
                  {"d", g_d},          {"eta", g_eta},       {"a", g_a},
                  {"c", g_c},          {"nx", g_nx},         {"ny", g_ny},
                  {"contrast", g_contrast}, {"seed", g_seed}, {"nnz", gp.A.nnz()},
                  {"elements", gp.dec.elements.size()}};
      write_manifest(g_out, cfg, {});
      std::cout << "n=" << gp.dec.n << " elements=" << gp.dec.elements.size()
                << " nnz=" << gp.A.nnz() << '\n';
      return 0;
    }

    if (*cmd_part) {
      EnergyDecomposition dec = read_edx(p_edx);
      Partition part;
      ClusterReport rep;
      if (p_regular > 0) {
        if (p_nx <= 0 || p_ny <= 0)
          throw CLI::ValidationError("--regular", "needs --nx and --ny grid dimensions");
        part = regular_grid_partition(p_nx, p_ny, p_regular);
        rep.measurements = partition_measurements(dec, part, p_q);
      } else {
        ClusterOptions opts;
        opts.q = p_q;
        part = pair_cluster(dec, std::sqrt(p_eps2), p_c, opts, &rep);
      }
      fs::create_directories(p_out);
      write_partition(p_out + "/partition.txt", part);
      write_measurement_csv(p_out + "/measurements.csv", rep.measurements, p_q);
      double max_de = 0.0;
      bool ok = true;
      for (const auto& m : rep.measurements.per_patch) {
        max_de = std::max(max_de, m.delta * m.eps * m.eps);
        if (p_regular == 0 && (m.eps * m.eps > p_eps2 * (1 + 1e-12) ||
                               m.delta * m.eps * m.eps > p_c * (1 + 1e-12)))
          ok = false;
      }
      json cfg = {{"cmd", "partition"}, {"eps2", p_eps2},   {"c", p_c},
                  {"q", p_q},           {"regular", p_regular}, {"patches", part.size()},
                  {"eps2_measured", rep.measurements.eps * rep.measurements.eps},
                  {"delta_measured", rep.measurements.delta},
                  {"max_delta_eps2", max_de},
                  {"sweeps", rep.sweeps},
                  {"merges", rep.merges}};
      write_manifest(p_out, cfg, {p_edx});
      std::cout << "#P=" << part.size() << " eps2=" << rep.measurements.eps * rep.measurements.eps
                << " delta=" << rep.measurements.delta << " max(delta*eps2)=" << max_de << '\n';
      return ok ? 0 : kExitViolation;
    }

    if (*cmd_comp) {
      EnergyDecomposition dec = read_edx(c_edx);
      SparseSymMatrix A = assemble(dec);
      Partition part = read_partition(c_part, dec.n);
      CoarseSpace cs = construct_phi(dec, part, c_q);
      CompressedOperator comp;
      if (c_exact) {
        comp = exact_psi(A, cs);
      } else {
        double eps_loc = std::sqrt(c_eps_loc2 > 0 ? c_eps_loc2 : 1e-4);
        LocalizeResult lr = construct_tilde_psi(A, dec, cs, eps_loc);
        comp = make_localized_operator(A, cs, std::move(lr.psi), eps_loc);
      }
      fs::create_directories(c_out);
      write_csx(c_out + "/space.csx", cs);
      write_matrix_market_columns(c_out + "/psi.mtx", A.n, comp.psi);
      write_matrix_market(c_out + "/a_st.mtx",
                          comp.has_dense() ? to_sparse(comp.a_st_dense) : comp.a_st_sparse);
      json cfg = {{"cmd", "compress"}, {"q", c_q},          {"exact", c_exact},
                  {"eps_loc2", c_eps_loc2}, {"N", comp.N}};
      bool ok = true;
      if (c_measure) {
        double err = compression_error(A, comp);
        cfg["compression_error"] = err;
        PartitionMeasurements pm = partition_measurements(dec, part, c_q);
        StiffnessReport sr = stiffness_condition_report(A, comp, pm.delta);
        cfg["kappa_a_st"] = sr.kappa;
        cfg["kappa_bound"] = sr.bound;
        std::cout << "compression error " << err << ", kappa(A_st) " << sr.kappa
                  << " (bound " << sr.bound << ")\n";
        if (sr.violated) ok = false;
        if (c_eps2_bound > 0 && err > c_eps2_bound) ok = false;
      }
      write_manifest(c_out, cfg, {c_edx, c_part});
      return ok ? 0 : kExitViolation;
    }

    if (*cmd_loc) {
      EnergyDecomposition dec = read_edx(l_edx);
      SparseSymMatrix A = assemble(dec);
      CoarseSpace cs = read_csx(l_csx);
      LocalizeResult lr = construct_tilde_psi(A, dec, cs, l_eps_loc);
      fs::create_directories(l_out);
      write_matrix_market_columns(l_out + "/psi.mtx", A.n, lr.psi);
      std::ofstream csv(l_out + "/radii.csv");
      csv << "column,home_patch,radius,full_support,final_eta\n";
      for (const auto& c : lr.columns)
        csv << c.index << ',' << c.home_patch << ',' << c.radius << ','
            << (c.full_support ? 1 : 0) << ',' << c.final_eta << '\n';
      json cfg = {{"cmd", "localize"},
                  {"eps_loc", l_eps_loc},
                  {"max_radius", lr.max_radius},
                  {"any_full_support", lr.any_full_support}};
      write_manifest(l_out, cfg, {l_edx, l_csx});
      std::cout << "N=" << lr.psi.size() << " max radius " << lr.max_radius << '\n';
      return 0;
    }

    if (*cmd_mmd) {
      EnergyDecomposition dec = read_edx(m_edx);
      MMDConfig cfg;
      cfg.eps2_schedule = m_schedule;
      cfg.c = m_c;
      cfg.q = m_q;
      cfg.n_floor = m_floor;
      cfg.exact_levels = m_exact;
      cfg.relaxed_loc = !m_strict;
      MMDHierarchy h = mmd_decompose(dec, cfg);
      save_hierarchy(m_out, h);
      json jc = {{"cmd", "mmd"},   {"schedule", m_schedule}, {"c", m_c},
                 {"q", m_q},       {"floor", m_floor},       {"exact", m_exact},
                 {"depth", h.depth()}};
      write_manifest(m_out, jc, {m_edx});
      for (const auto& L : h.levels)
        std::cout << "level " << L.level << ": n " << L.n_prev << " -> " << L.n_coarse
                  << ", kappa(B) " << L.kappa_b << '\n';
      std::cout << "bottom kappa " << h.kappa_bottom << '\n';
      return 0;
    }

    if (*cmd_solve) {
      MMDHierarchy h = load_hierarchy(s_dir);
      Vec b;
      if (s_rhs == "ones") {
        b.assign(h.a0.n, 1.0);
      } else if (s_rhs.rfind("random:", 0) == 0) {
        SplitMix64 g = SplitMix64::stream(std::stoull(s_rhs.substr(7)), 5);
        b.resize(h.a0.n);
        for (double& x : b) x = g.uniform(-1.0, 1.0);
      } else {
        b = read_vector(s_rhs);
      }
      SolveConfig sc;
      sc.final_tol = s_tol;
      sc.max_compensation = s_maxcomp;
      sc.compensate = !s_nocomp;
      SolveStats st = mmd_solve(h, b, sc);
      fs::create_directories(s_out);
      write_vector(s_out + "/x.txt", st.x);
      json cfg = {{"cmd", "solve"},
                  {"rhs", s_rhs},
                  {"tol", s_tol},
                  {"level_iterations", st.level_iterations},
                  {"bottom_iterations", st.bottom_iterations},
                  {"compensation_iterations", st.compensation_iterations},
                  {"rel_residual", st.rel_residual},
                  {"converged", st.converged}};
      write_manifest(s_out, cfg, {s_dir + "/manifest.json"});
      std::cout << "rel residual " << st.rel_residual << ", compensation "
                << st.compensation_iterations << " iters\n";
      return st.converged ? 0 : kExitNoConverge;
    }

    if (*cmd_verify) {
      if (v_suite == "energy") return run_verify_energy(v_seed, v_trials);
      if (v_suite == "decay") return run_verify_decay(v_n, v_seed);
      if (v_suite == "mmd") return run_verify_mmd(v_n, v_seed);
      throw CLI::ValidationError("--suite", "unknown suite " + v_suite);
    }

    if (*cmd_report) {
      std::ifstream in(r_dir + "/manifest.json");
      if (!in) throw std::runtime_error("missing manifest in " + r_dir);
      json m = json::parse(in);
      std::cout << "Level,Matrix,Size,#Nonzeros,Condition Number,Complexity\n";
      for (const auto& row : m["table"])
        std::cout << row["Level"].get<int>() << ',' << row["Matrix"].get<std::string>() << ','
                  << row["Size"].get<int>() << ',' << row["#Nonzeros"].get<int>() << ','
                  << row["Condition Number"].get<double>() << ','
                  << row["Complexity"].get<double>() << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
