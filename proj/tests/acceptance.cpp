// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any fails.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "itops/dynamics.hpp"
#include "itops/errors.hpp"
#include "itops/model.hpp"
#include "itops/random.hpp"
#include "itops/rmatrix.hpp"
#include "itops/specfun.hpp"
#include "support.hpp"

using namespace itops;
using testing::rel_err;
using testing::scaled_err;

namespace {

using FamPtr = std::shared_ptr<const RMatrixFamily>;

FamPtr fam_of(RMatrixFamily f) { return std::make_shared<RMatrixFamily>(std::move(f)); }

const cplx kTauI{0.0, 1.0};

cplx draw_z(const Flavor& fl, Rng& rng) {
  for (;;) {
    cplx z = fl.tag() == FlavorTag::Elliptic ? rng.uniform() + rng.uniform() * fl.tau() : rng.in_box();
    if (fl.pole_distance(z) > 0.05) return z;
  }
}

struct Outcome {
  bool pass = true;
  std::string detail;
  void need(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

// --- 1 ---------------------------------------------------------------------
Outcome scalar_suite() {
  Outcome o;
  struct Item {
    Flavor fl;
    double tol;
  };
  std::vector<Item> items = {{Flavor::rational(), 1e-10},
                             {Flavor::trigonometric(), 1e-10},
                             {Flavor::elliptic(kTauI), 1e-8},
                             {Flavor::elliptic({0.3, 0.8}), 1e-8}};
  double worst = 0.0;
  for (auto& it : items) {
    ResidualReport rep = scalar_identity_report(it.fl, 100, 11);
    rep.finalize(it.tol);
    worst = std::max(worst, rep.max_residual());
    for (const auto& e : rep.entries())
      o.need(e.pass, it.fl.name() + " " + e.name + " " + sci(e.max_residual));
  }
  o.detail = "max residual " + sci(worst) + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

// --- 2 ---------------------------------------------------------------------
Outcome rmatrix_certification() {
  Outcome o;
  std::vector<RMatrixFamily> fams = {RMatrixFamily::yang(1),
                                     RMatrixFamily::yang(2),
                                     RMatrixFamily::yang(3),
                                     RMatrixFamily::eleven_vertex(),
                                     RMatrixFamily::six_vertex(),
                                     RMatrixFamily::seven_vertex({0.7, 0.2}),
                                     RMatrixFamily::baxter_belavin(2, kTauI),
                                     RMatrixFamily::baxter_belavin(3, kTauI)};
  double worst = 0.0;
  for (const auto& f : fams) {
    ResidualReport rep = certify(f, 50, 21);
    rep.finalize(f.kind() == FamilyKind::BaxterBelavin ? 1e-7 : 1e-8);
    worst = std::max(worst, rep.max_residual());
    for (const auto& e : rep.entries()) o.need(e.pass, f.name() + " " + e.name + " " + sci(e.max_residual));
  }
  o.detail = "max residual " + sci(worst) + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

std::vector<FamPtr> lax_families() {
  return {fam_of(RMatrixFamily::yang(2)),
          fam_of(RMatrixFamily::eleven_vertex()),
          fam_of(RMatrixFamily::six_vertex()),
          fam_of(RMatrixFamily::seven_vertex({0.7, 0.2})),
          fam_of(RMatrixFamily::baxter_belavin(2, kTauI)),
          fam_of(RMatrixFamily::yang(1)),
          fam_of(RMatrixFamily::baxter_belavin(1, kTauI)),
          fam_of(RMatrixFamily::baxter_belavin(3, kTauI))};
}

// --- 3 ---------------------------------------------------------------------
Outcome lax_certification() {
  Outcome o;
  double worst = 0.0;
  for (const auto& fam : lax_families())
    for (int m : {2, 3})
      for (int st = 0; st < 5; ++st) {
        PhaseState s = random_state(fam, m, {1.0, 0.3}, st % 2 == 1, 100 + 10 * m + st);
        Rng rng(500 + st);
        for (int k = 0; k < 5; ++k) {
          double r = lax_residual(s, draw_z(fam->flavor(), rng));
          worst = std::max(worst, r);
          o.need(r < 1e-9, fam->name() + " M=" + std::to_string(m) + " " + sci(r));
        }
      }
  o.detail = "max residual " + sci(worst) + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

double velocity_err(const PhaseVelocity& a, const PhaseVelocity& b) {
  double sc = max_abs(b.dS), d = max_abs(a.dS - b.dS);
  for (std::size_t i = 0; i < b.dp.size(); ++i) {
    sc = std::max({sc, std::abs(b.dp[i]), std::abs(b.dq[i])});
    d = std::max({d, std::abs(a.dp[i] - b.dp[i]), std::abs(a.dq[i] - b.dq[i])});
  }
  return d / sc;
}

// --- 4 ---------------------------------------------------------------------
Outcome eom_equivalence() {
  Outcome o;
  double worst = 0.0, worst_c = 0.0;
  for (const auto& fam : lax_families())
    for (int st = 0; st < 5; ++st) {
      bool r1 = st % 2 == 0;
      PhaseState s = random_state(fam, 2 + st % 2, {0.9, -0.2}, r1, 300 + st);
      PhaseVelocity a = eom_rhs(s), b = hamiltonian_flow(s);
      double e = velocity_err(a, b);
      worst = std::max(worst, e);
      o.need(e < 1e-10, fam->name() + " eom " + sci(e));
      if (r1) {
        double c = velocity_err(eom_rhs(s, DiagonalForm::Commutator), a);
        worst_c = std::max(worst_c, c);
        o.need(c < 1e-10, fam->name() + " commutator form " + sci(c));
      }
    }
  o.detail = "eom " + sci(worst) + ", commutator form " + sci(worst_c) + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

// --- 5 ---------------------------------------------------------------------
Outcome exchange() {
  Outcome o;
  double worst = 0.0;
  for (const auto& fam : lax_families()) {
    if (fam->n() != 2) continue;
    for (int st = 0; st < 5; ++st) {
      PhaseState s = random_state(fam, 2, {0.6, 0.2}, st % 2 == 1, 700 + st);
      Rng rng(900 + st);
      for (int k = 0; k < 5; ++k) {
        cplx z = draw_z(fam->flavor(), rng), w = draw_z(fam->flavor(), rng);
        if (fam->flavor().pole_distance(z - w) < 0.05) continue;
        double r = exchange_residual(s, z, w);
        worst = std::max(worst, r);
        o.need(r < 1e-9, fam->name() + " " + sci(r));
      }
    }
  }
  // N = 1: on the constraints, and off them where the (S_ii - S_jj) term is needed.
  double n1 = 0.0;
  for (auto fam : {fam_of(RMatrixFamily::yang(1)), fam_of(RMatrixFamily::baxter_belavin(1, kTauI))}) {
    PhaseState s = random_state(fam, 3, 1.0, false, 5);
    cplx z{0.33, 0.21}, w{0.71, -0.12};
    n1 = std::max(n1, exchange_residual(s, z, w));
    s.spin.big()(1, 1) = {1.7, -0.2};
    n1 = std::max(n1, exchange_residual(s, z, w, 10.0));
  }
  o.need(n1 < 1e-9, "N=1 " + sci(n1));
  o.detail = "N=2 " + sci(worst) + ", N=1 " + sci(n1) + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

// --- 6 ---------------------------------------------------------------------
Outcome reductions() {
  Outcome o;
  const cplx z{0.33, 0.21};
  double spin_cm = 0.0, top = 0.0, uv = 0.0, ell = 0.0;
  for (auto fam : {fam_of(RMatrixFamily::yang(1)), fam_of(RMatrixFamily::baxter_belavin(1, kTauI))}) {
    const Flavor& fl = fam->flavor();
    PhaseState s = random_state(fam, 3, 1.3, false, 4);
    ComplexMatrix L = build_L(s, z), want(3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        cplx S = s.spin.big()(i, j);
        want(i, j) = i == j ? s.p[i] + S * eisenstein_E1(fl, z) : S * kronecker_phi(fl, z, s.q[i] - s.q[j]);
      }
    spin_cm = std::max(spin_cm, scaled_err(L, want));
  }
  for (const auto& fam : lax_families()) {
    PhaseState s = random_state(fam, 1, {1.0, 0.5}, false, 7);
    ComplexMatrix want = s.p[0] * ComplexMatrix::identity(s.N()) + contract_2(fam->r(z), s.spin.big());
    top = std::max(top, scaled_err(build_L(s, z), want));
    PhaseState r = random_state(fam, 3, {1.1, 0.2}, true, 8);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        if (i == j) continue;
        cplx q = r.q[i] - r.q[j];
        uv = std::max(uv, rel_err(potential_U(*fam, r.spin.block(i, j), r.spin.block(j, i), q),
                                  potential_V(*fam, r.spin.block(i, i), r.spin.block(j, j), q)));
      }
  }
  {
    const int n = 2;
    auto fam = fam_of(RMatrixFamily::baxter_belavin(n, kTauI));
    const Flavor& fl = fam->flavor();
    for (std::uint64_t seed : {3, 4, 5}) {
      PhaseState s = random_state(fam, 2, 1.0, false, seed);
      cplx q = s.q[0] - s.q[1];
      ComplexMatrix sij = s.spin.block(0, 1), sji = s.spin.block(1, 0);
      cplx sum = 0.0;
      for (int a1 = 0; a1 < n; ++a1)
        for (int a2 = 0; a2 < n; ++a2) {
          SectorIndex a{a1, a2, n};
          cplx sa = trace(sij * sin_basis_T(a.negated())) / static_cast<double>(n);
          cplx sma = trace(sji * sin_basis_T(a)) / static_cast<double>(n);
          sum += sa * sma * eisenstein_E2(fl, sector_omega(fl, a) + q / static_cast<double>(n));
        }
      ell = std::max(ell, rel_err(potential_U(*fam, sij, sji, q), -sum));
    }
  }
  o.need(spin_cm < 1e-12, "spin CM");
  o.need(top < 1e-12, "top");
  o.need(uv < 1e-12, "U=V");
  o.need(ell < 1e-8, "elliptic U");
  o.detail = "spin CM " + sci(spin_cm) + ", top " + sci(top) + ", U=V " + sci(uv) + ", elliptic U " + sci(ell) +
             (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

// --- 7 ---------------------------------------------------------------------
IntegratorConfig unit_time(double dt) {
  IntegratorConfig c;
  c.dt = dt;
  c.steps = std::lround(1.0 / dt);
  c.monitor_every = std::lround(1e-2 / dt);
  c.monitor_z = {{0.3, 0.2}, {0.65, -0.1}};
  c.monitor_lax = false;
  return c;
}

Outcome conservation() {
  Outcome o;
  std::string ratios;
  double fine = 0.0;
  for (auto f : {RMatrixFamily::yang(2), RMatrixFamily::eleven_vertex()}) {
    auto fam = fam_of(f);
    PhaseState s = random_state(fam, 2, 1.0, false, 1);
    s.q = {0.0, {1.0, 0.2}};
    DriftTable a = drift_table(integrate(s, unit_time(1e-2)));
    DriftTable b = drift_table(integrate(s, unit_time(5e-3)));
    DriftTable c = drift_table(integrate(s, unit_time(1e-3)));
    auto ratio = [&](const std::string& what, double x, double y) {
      double r = x / y;
      o.need(r >= 8.0 && r <= 32.0, f.name() + " " + what + " ratio " + sci(r));
      ratios += " " + what + "=" + sci(r);
    };
    ratios += " [" + f.name();
    ratio("H", a.H, b.H);
    for (int z = 0; z < 2; ++z)
      for (int k = 1; k < 3; ++k) ratio("trL" + std::to_string(k + 1) + "_z" + std::to_string(z), a.trL[z][k], b.trL[z][k]);
    for (int k = 1; k < 3; ++k) ratio("trS" + std::to_string(k + 1), a.casimir[k], b.casimir[k]);
    ratios += "]";
    // Linear invariants are preserved exactly by RK4, so only roundoff remains.
    for (int z = 0; z < 2; ++z) o.need(a.trL[z][0] < 1e-12, f.name() + " trL1 not at roundoff");
    o.need(a.casimir[0] < 1e-12, f.name() + " trS1 not at roundoff");
    fine = std::max({fine, c.H, c.max_trL(), c.max_casimir()});
  }
  o.need(fine < 1e-6, "drift at dt=1e-3 " + sci(fine));
  o.detail = "drift at dt=1e-3 " + sci(fine) + ";" + ratios + (o.pass ? "" : "; " + o.detail);
  return o;
}

// --- 8 ---------------------------------------------------------------------
Outcome cm_rmx() {
  Outcome o;
  const std::vector<cplx> q2{0.1, {0.55, 0.3}}, p2{0.3, -0.2};
  const std::vector<cplx> q3{0.1, {0.55, 0.3}, {0.9, -0.2}}, p3{0.3, -0.2, {0.1, 0.4}};
  double worst = 0.0, n1 = 0.0;
  Rng rng(31);
  for (auto fam : {RMatrixFamily::yang(2), RMatrixFamily::eleven_vertex()})
    for (int k = 0; k < 3; ++k) {
      cplx z = draw_z(fam.flavor(), rng);
      worst = std::max({worst, cm_rmx_lax(q2, p2, 1.0, fam, z).residual, cm_rmx_lax(q3, p3, 1.0, fam, z).residual});
    }
  for (auto fam : {RMatrixFamily::yang(1), RMatrixFamily::baxter_belavin(1, kTauI)}) {
    CmRmxResult r = cm_rmx_lax(q3, p3, {1.0, 0.3}, fam, {0.33, 0.21});
    n1 = std::max(n1, r.residual);
    // The scalar Krichever entries.
    n1 = std::max(n1, rel_err(r.L(0, 1), cplx(1.0, 0.3) * kronecker_phi(fam.flavor(), {0.33, 0.21}, q3[0] - q3[1])));
  }
  o.need(worst < 1e-9, "N=2");
  o.need(n1 < 1e-11, "N=1");
  o.detail = "N=2 " + sci(worst) + ", N=1 " + sci(n1) + (o.pass ? "" : "; " + o.detail);
  return o;
}

// --- 9 ---------------------------------------------------------------------
Outcome sector_identities() {
  Outcome o;
  double worst = 0.0;
  for (int n : {2, 3}) {
    ResidualReport rep;
    sector_identity_residuals(Flavor::elliptic(kTauI), n, 20, 40 + n, rep);
    rep.finalize(1e-8);
    worst = std::max(worst, rep.max_residual());
    for (const auto& e : rep.entries()) o.need(e.pass, "N=" + std::to_string(n) + " " + e.name + " " + sci(e.max_residual));
  }
  o.detail = "max residual " + sci(worst) + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

// --- 10 --------------------------------------------------------------------
std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  Outcome o;
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "itops_acceptance";
  fs::create_directories(dir);
  fs::path cfg = dir / "model.json";
  std::ofstream(cfg) << R"({"family": "11v", "N": 2, "M": 2, "nu": [1, 0], "spin_mode": "rank1", "seed": 5,
  "q0": [[0, 0], [1, 0.2]]})";
  const std::string bin = ITOPS_CLI_PATH, c = cfg.string();
  const std::vector<std::string> cmds = {
      "certify-functions --flavor elliptic --tau 0.3,0.8 --samples 20 --seed 3",
      "certify-rmatrix --family bb --n 2 --samples 10 --seed 3",
      "check-lax --config " + c,
      "check-exchange --config " + c + " --pairs 3",
      "check-cm-rmx --family 11v --n 2 --m 3 --seed 3",
      "simulate --config " + c + " --steps 200 --out " + (dir / "run.csv").string(),
  };
  int k = 0;
  for (const auto& cmd : cmds) {
    std::string outs[2], csvs[2];
    for (int r = 0; r < 2; ++r) {
      fs::path out = dir / ("out" + std::to_string(k) + "_" + std::to_string(r));
      int st = std::system((bin + " " + cmd + " > " + out.string() + " 2>&1").c_str());
      o.need(st == 0, cmd.substr(0, cmd.find(' ')) + " exit status " + std::to_string(st));
      outs[r] = slurp(out);
      if (cmd.rfind("simulate", 0) == 0) csvs[r] = slurp(dir / "run.csv");
    }
    o.need(!outs[0].empty() && outs[0] == outs[1], cmd.substr(0, cmd.find(' ')) + " output differs");
    o.need(csvs[0] == csvs[1], "simulate csv differs");
    ++k;
  }
  o.detail = std::to_string(cmds.size()) + " commands run twice" + (o.pass ? "" : "; " + o.detail);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all = {
      {1, "scalar identities", 5, scalar_suite},
      {2, "R-matrix certification", 60, rmatrix_certification},
      {3, "Lax equation", 60, lax_certification},
      {4, "equations of motion", 60, eom_equivalence},
      {5, "exchange relation", 60, exchange},
      {6, "reductions", 60, reductions},
      {7, "conservation under integration", 120, conservation},
      {8, "R-matrix valued CM Lax pair", 60, cm_rmx},
      {9, "elliptic basis identities", 60, sector_identities},
      {10, "determinism", 60, determinism},
  };
  int failed = 0;
  for (const auto& c : all) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget) o.need(false, "runtime over " + std::to_string(static_cast<int>(c.budget)) + " s");
    if (!o.pass) ++failed;
    char t[32];
    std::snprintf(t, sizeof t, "%.2fs", secs);
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << ", " << t << "): " << o.detail
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
