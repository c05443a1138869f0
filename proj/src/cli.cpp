#include "itops/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "itops/dynamics.hpp"
#include "itops/errors.hpp"
#include "itops/random.hpp"

namespace itops {

namespace {

cplx json_complex(const Json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ConfigError("field '" + field + "' must be a [re, im] pair");
  return {v[0].get<double>(), v[1].get<double>()};
}

std::vector<cplx> json_complex_list(const Json& v, const std::string& field) {
  if (!v.is_array()) throw ConfigError("field '" + field + "' must be a list of [re, im] pairs");
  std::vector<cplx> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(json_complex(v[k], field + "[" + std::to_string(k) + "]"));
  return out;
}

int json_int(const Json& j, const char* field, int lo) {
  const Json& v = j.at(field);
  if (!v.is_number_integer() || v.get<long long>() < lo || v.get<long long>() > 64)
    throw ConfigError(std::string("field '") + field + "' must be an integer in [" + std::to_string(lo) + ", 64]");
  return v.get<int>();
}

Json complex_json(cplx x) { return Json::array({x.real(), x.imag()}); }

std::string complex_flag(cplx x) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g", x.real(), x.imag());
  return buf;
}

Json header(const std::string& command, const Json& echo, std::uint64_t seed) {
  Json j = Json::object();
  j["tool_version"] = kToolVersion;
  j["command"] = command;
  j["config_echo"] = echo;
  j["seed"] = seed;
  return j;
}

// Spectral sample away from poles of the flavor.
cplx draw_point(const Flavor& fl, Rng& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    cplx z = fl.tag() == FlavorTag::Elliptic ? rng.uniform() + rng.uniform() * fl.tau() : rng.in_box();
    if (fl.pole_distance(z) > 0.05) return z;
  }
  throw Error("could not draw a pole-free spectral point");
}

double casimir_rate(const ComplexMatrix& S, const ComplexMatrix& dS, int k) {
  // d/dt tr S^k = k tr(S^{k-1} dS), relative to k |S|^{k-1} |dS|.
  ComplexMatrix pw = ComplexMatrix::identity(S.dim());
  for (int e = 1; e < k; ++e) pw = pw * S;
  double sc = k * std::pow(frobenius_norm(S), k - 1) * frobenius_norm(dS);
  cplx v = static_cast<double>(k) * trace(pw * dS);
  return sc == 0.0 ? std::abs(v) : std::abs(v) / sc;
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

int cmd_certify_functions(std::ostream& out, const std::string& flavor, std::optional<cplx> tau, int samples,
                          std::uint64_t seed, double tol) {
  Flavor fl = Flavor::rational();
  if (flavor == "rational")
    fl = Flavor::rational();
  else if (flavor == "trig")
    fl = Flavor::trigonometric();
  else if (flavor == "elliptic")
    fl = Flavor::elliptic(tau.value_or(cplx(0.0, 1.0)));
  else
    throw ConfigError("--flavor must be rational, trig or elliptic");
  if (samples < 1) throw ConfigError("--samples must be positive");
  Json echo = {{"flavor", flavor}, {"samples", samples}, {"tol", tol}};
  if (flavor == "elliptic") echo["tau"] = complex_json(fl.tau());
  ResidualReport rep = scalar_identity_report(fl, samples, seed);
  rep.finalize(tol);
  Json j = header("certify-functions", echo, seed);
  j["pass"] = rep.all_pass();
  j["max_residual"] = rep.max_residual();
  j["residuals"] = rep.to_json();
  emit(out, j);
  return rep.all_pass() ? 0 : 1;
}

int cmd_certify_rmatrix(std::ostream& out, const std::string& family, std::optional<cplx> c, int n,
                        std::optional<cplx> tau, int samples, std::uint64_t seed, double tol) {
  auto fam = make_family(family, n, tau, c);
  if (samples < 1) throw ConfigError("--samples must be positive");
  Json echo = {{"family", family}, {"n", fam->n()}, {"samples", samples}, {"tol", tol}};
  if (fam->kind() == FamilyKind::SevenVertex) echo["c"] = complex_json(fam->c());
  if (fam->kind() == FamilyKind::BaxterBelavin) echo["tau"] = complex_json(fam->flavor().tau());
  ResidualReport rep = certify(*fam, samples, seed);
  rep.finalize(tol);
  Json j = header("certify-rmatrix", echo, seed);
  j["pass"] = rep.all_pass();
  j["max_residual"] = rep.max_residual();
  j["residuals"] = rep.to_json();
  emit(out, j);
  return rep.all_pass() ? 0 : 1;
}

int cmd_check_lax(std::ostream& out, const std::string& path, int z_samples, double tol) {
  ModelConfig cfg = load_model_config(path);
  if (z_samples < 1) throw ConfigError("--z-samples must be positive");
  PhaseState s = make_state(cfg);
  const auto& fam = *s.family;
  const Flavor& fl = fam.flavor();
  ResidualReport rep;
  Rng rng(cfg.seed ^ 0x5851f42d4c957f2dULL);
  Json offsets = Json::array();
  const double n = s.N();
  cplx sp = 0.0;
  for (cplx x : s.p) sp += x;
  cplx site_sq = 0.0;
  for (int i = 0; i < s.M(); ++i) site_sq += std::pow(trace(s.spin.block(i, i)), 2);
  const cplx H = hamiltonian(s);
  const cplx trS2 = trace(s.spin.big() * s.spin.big());
  for (int k = 0; k < z_samples; ++k) {
    cplx z = draw_point(fl, rng);
    rep.record("lax_equation", lax_residual(s, z));
    ComplexMatrix L = build_L(s, z);
    cplx e1 = eisenstein_E1(fl, z), e2 = eisenstein_E2(fl, z);
    cplx off = trace(L * L) / (2.0 * n) - e2 * trS2 / (2.0 * n) - H;
    cplx rest = off - cfg.nu * e1 * sp / n - site_sq / (2.0 * n * n) * (e1 * e1 - e2);
    offsets.push_back({{"z", complex_json(z)}, {"offset", complex_json(off)}, {"constant_part", complex_json(rest)}});
  }
  PhaseVelocity a = eom_rhs(s), b = hamiltonian_flow(s);
  double sc = max_abs(b.dS);
  for (int i = 0; i < s.M(); ++i) sc = std::max(sc, std::abs(b.dp[i]));
  double d = max_abs(a.dS - b.dS);
  for (int i = 0; i < s.M(); ++i) d = std::max({d, std::abs(a.dp[i] - b.dp[i]), std::abs(a.dq[i] - b.dq[i])});
  rep.record("eom_vs_bracket", sc == 0.0 ? d : d / sc);
  if (s.spin.is_rank1()) {
    PhaseVelocity c = eom_rhs(s, DiagonalForm::Commutator);
    rep.record("eom_commutator_form", sc == 0.0 ? max_abs(c.dS - a.dS) : max_abs(c.dS - a.dS) / sc);
    for (int i = 0; i < s.M(); ++i)
      for (int j = i + 1; j < s.M(); ++j) {
        cplx u = potential_U(fam, s.spin.block(i, j), s.spin.block(j, i), s.q[i] - s.q[j]);
        cplx v = potential_V(fam, s.spin.block(i, i), s.spin.block(j, j), s.q[i] - s.q[j]);
        double m = std::max({std::abs(u), std::abs(v), 1e-300});
        rep.record("rank1_U_equals_V", std::abs(u - v) / m);
      }
  }
  double tr_rate = 0.0;
  for (int i = 0; i < s.M(); ++i) {
    SpinConfig ds(s.M(), s.N(), a.dS);
    tr_rate = std::max(tr_rate, std::abs(trace(ds.block(i, i))) / std::max(sc, 1e-300));
  }
  rep.record("trace_conservation", tr_rate);
  for (int k = 1; k <= 3; ++k) rep.record("casimir_rate_trS" + std::to_string(k), casimir_rate(s.spin.big(), a.dS, k));
  rep.finalize(tol);

  Json j = header("check-lax", cfg.echo, cfg.seed);
  j["z_samples"] = z_samples;
  j["tol"] = tol;
  j["pass"] = rep.all_pass();
  j["max_lax_residual"] = rep.find("lax_equation")->max_residual;
  j["hamiltonian"] = complex_json(H);
  j["residuals"] = rep.to_json();
  j["generating_function_offset"] = offsets;
  emit(out, j);
  return rep.all_pass() ? 0 : 1;
}

int cmd_check_exchange(std::ostream& out, const std::string& path, int pairs, double tol) {
  ModelConfig cfg = load_model_config(path);
  if (pairs < 1) throw ConfigError("--pairs must be positive");
  PhaseState s = make_state(cfg);
  const Flavor& fl = s.family->flavor();
  Rng rng(cfg.seed ^ 0x2545f4914f6cdd1dULL);
  ResidualReport rep;
  for (int k = 0; k < pairs; ++k) {
    cplx z, w;
    do {
      z = draw_point(fl, rng);
      w = draw_point(fl, rng);
    } while (fl.pole_distance(z - w) < 0.05);
    rep.record("exchange_relation", exchange_residual(s, z, w));
  }
  rep.finalize(tol);
  Json j = header("check-exchange", cfg.echo, cfg.seed);
  j["pairs"] = pairs;
  j["tol"] = tol;
  j["pass"] = rep.all_pass();
  j["max_exchange_residual"] = rep.find("exchange_relation")->max_residual;
  j["residuals"] = rep.to_json();
  emit(out, j);
  return rep.all_pass() ? 0 : 1;
}

int cmd_check_cm_rmx(std::ostream& out, const std::string& family, int n, int m, cplx nu, std::optional<cplx> tau,
                     std::optional<cplx> c, int z_samples, std::uint64_t seed, double tol) {
  auto fam = make_family(family, n, tau, c);
  if (m < 1) throw ConfigError("--m must be positive");
  if (z_samples < 1) throw ConfigError("--z-samples must be positive");
  if (std::pow(static_cast<double>(fam->n()), m) > 256.0)
    throw ScaleExceeded("N^M = " + std::to_string(static_cast<long long>(std::pow(fam->n(), m))) + " exceeds 256");
  Rng rng(seed);
  std::vector<cplx> q(m), p(m);
  for (int attempt = 0;; ++attempt) {
    if (attempt > 10000) throw Error("no pole-avoiding positions found");
    for (auto& x : q) x = rng.in_box();
    bool ok = true;
    for (int a = 0; a < m && ok; ++a)
      for (int b = 0; b < m && ok; ++b)
        if (a != b && clearance(*fam, q[a] - q[b]) < 0.1) ok = false;
    if (ok) break;
  }
  for (auto& x : p) x = rng.in_box();
  ResidualReport rep;
  for (int k = 0; k < z_samples; ++k) rep.record("cm_rmatrix_lax", cm_rmx_lax(q, p, nu, *fam, draw_point(fam->flavor(), rng)).residual);
  rep.finalize(tol);
  Json echo = {{"family", family}, {"n", fam->n()}, {"m", m}, {"nu", complex_json(nu)}, {"z_samples", z_samples}, {"tol", tol}};
  if (fam->kind() == FamilyKind::SevenVertex) echo["c"] = complex_json(fam->c());
  if (fam->kind() == FamilyKind::BaxterBelavin) echo["tau"] = complex_json(fam->flavor().tau());
  Json j = header("check-cm-rmx", echo, seed);
  Json qs = Json::array(), ps = Json::array();
  for (cplx x : q) qs.push_back(complex_json(x));
  for (cplx x : p) ps.push_back(complex_json(x));
  j["q"] = qs;
  j["p"] = ps;
  j["pass"] = rep.all_pass();
  j["max_residual"] = rep.find("cm_rmatrix_lax")->max_residual;
  j["residuals"] = rep.to_json();
  emit(out, j);
  return rep.all_pass() ? 0 : 1;
}

int cmd_simulate(std::ostream& out, const std::string& path, double dt, long steps, const std::string& monitor_z,
                 long monitor_every, const std::string& csv_path, double drift_tol, double lax_tol) {
  ModelConfig cfg = load_model_config(path);
  PhaseState s = make_state(cfg);
  IntegratorConfig ic;
  ic.dt = dt;
  ic.steps = steps;
  ic.monitor_every = monitor_every;
  ic.monitor_z = parse_complex_list(monitor_z);
  for (cplx z : ic.monitor_z)
    if (s.family->flavor().pole_distance(z) < 0.05)
      throw ConfigError("--monitor-z point " + complex_flag(z) + " is too close to a pole");
  Json echo = cfg.echo;
  echo["dt"] = dt;
  echo["steps"] = steps;
  echo["monitor_every"] = monitor_every;
  Json mz = Json::array();
  for (cplx z : ic.monitor_z) mz.push_back(complex_json(z));
  echo["monitor_z"] = mz;
  echo["drift_tol"] = drift_tol;
  echo["lax_tol"] = lax_tol;
  Json j = header("simulate", echo, cfg.seed);
  TrajectoryRecord rec;
  try {
    rec = integrate(s, ic);
  } catch (const PoleProximity& e) {
    j["pass"] = false;
    j["error"] = {{"kind", "PoleProximity"}, {"step", e.step()}, {"message", e.what()}};
    emit(out, j);
    return 1;
  } catch (const ConstraintDrift& e) {
    j["pass"] = false;
    j["error"] = {{"kind", "ConstraintDrift"}, {"message", e.what()}};
    emit(out, j);
    return 1;
  }
  if (!csv_path.empty()) {
    std::ofstream f(csv_path, std::ios::binary);
    if (!f) throw ConfigError("--out: cannot open '" + csv_path + "' for writing");
    write_csv(f, rec);
  }
  DriftTable d = drift_table(rec);
  ResidualReport rep = isospectrality_report(rec, drift_tol, lax_tol);
  j["rows"] = rec.rows.size();
  j["final_time"] = rec.rows.back().t;
  j["pass"] = rep.all_pass();
  j["drift"] = drift_json(rec, d);
  j["residuals"] = rep.to_json();
  emit(out, j);
  return rep.all_pass() ? 0 : 1;
}

}  // namespace

cplx parse_complex(const std::string& s) {
  double re = 0.0, im = 0.0;
  int used = 0;
  if (std::sscanf(s.c_str(), " %lf , %lf %n", &re, &im, &used) != 2 || used != static_cast<int>(s.size()))
    throw ConfigError("expected a complex number as RE,IM, got '" + s + "'");
  return {re, im};
}

std::vector<cplx> parse_complex_list(const std::string& s) {
  std::vector<cplx> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';'))
    if (!item.empty()) out.push_back(parse_complex(item));
  return out;
}

std::shared_ptr<const RMatrixFamily> make_family(const std::string& name, int n, std::optional<cplx> tau,
                                                 std::optional<cplx> c) {
  auto need2 = [&] {
    if (n != 2) throw ConfigError("family '" + name + "' is defined for N = 2 only");
  };
  if (n < 1) throw ConfigError("N must be positive");
  if (name == "xxx") return std::make_shared<RMatrixFamily>(RMatrixFamily::yang(n));
  if (name == "11v") {
    need2();
    return std::make_shared<RMatrixFamily>(RMatrixFamily::eleven_vertex());
  }
  if (name == "xxz") {
    need2();
    return std::make_shared<RMatrixFamily>(RMatrixFamily::six_vertex());
  }
  if (name == "7v") {
    need2();
    return std::make_shared<RMatrixFamily>(RMatrixFamily::seven_vertex(c.value_or(cplx(0.7, 0.2))));
  }
  if (name == "bb") return std::make_shared<RMatrixFamily>(RMatrixFamily::baxter_belavin(n, tau.value_or(cplx(0.0, 1.0))));
  throw ConfigError("unknown family '" + name + "' (expected xxx, 11v, xxz, 7v or bb)");
}

ModelConfig parse_model_config(const Json& j) {
  if (!j.is_object()) throw ConfigError("model config must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    static const char* known[] = {"family", "N", "M", "tau", "C", "nu", "spin_mode", "seed", "q0", "p0", "S0"};
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return it.key() == k; }) == std::end(known))
      throw ConfigError("unknown field '" + it.key() + "'");
  }
  for (const char* req : {"family", "N", "M", "nu", "spin_mode", "seed"})
    if (!j.contains(req)) throw ConfigError(std::string("missing field '") + req + "'");
  ModelConfig c;
  if (!j["family"].is_string()) throw ConfigError("field 'family' must be a string");
  c.family = j["family"].get<std::string>();
  c.N = json_int(j, "N", 1);
  c.M = json_int(j, "M", 1);
  if (j.contains("tau")) c.tau = json_complex(j["tau"], "tau");
  if (j.contains("C")) c.C = json_complex(j["C"], "C");
  const Json& nu = j["nu"];
  if (nu.is_array() && !nu.empty() && nu[0].is_array()) {
    std::vector<cplx> per_site = json_complex_list(nu, "nu");
    if (static_cast<int>(per_site.size()) != c.M) throw ConfigError("field 'nu' lists " + std::to_string(per_site.size()) + " sites, M = " + std::to_string(c.M));
    for (cplx x : per_site)
      if (std::abs(x - per_site[0]) > 1e-12)
        throw ConstraintViolation("field 'nu': per-site values differ; the model needs tr S^ii = nu equal for all i");
    c.nu = per_site[0];
  } else {
    c.nu = json_complex(nu, "nu");
  }
  if (!j["spin_mode"].is_string()) throw ConfigError("field 'spin_mode' must be \"rank1\" or \"general\"");
  c.spin_mode = j["spin_mode"].get<std::string>();
  if (c.spin_mode != "rank1" && c.spin_mode != "general")
    throw ConfigError("field 'spin_mode' must be \"rank1\" or \"general\"");
  if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0))
    throw ConfigError("field 'seed' must be a non-negative integer");
  c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("q0")) {
    c.q0 = json_complex_list(j["q0"], "q0");
    if (static_cast<int>(c.q0.size()) != c.M) throw ConfigError("field 'q0' must have M entries");
  }
  if (j.contains("p0")) {
    c.p0 = json_complex_list(j["p0"], "p0");
    if (static_cast<int>(c.p0.size()) != c.M) throw ConfigError("field 'p0' must have M entries");
  }
  if (j.contains("S0")) {
    const Json& rows = j["S0"];
    const int d = c.N * c.M;
    if (!rows.is_array() || static_cast<int>(rows.size()) != d) throw ConfigError("field 'S0' must be an NM x NM matrix");
    ComplexMatrix S(d);
    for (int r = 0; r < d; ++r) {
      std::vector<cplx> row = json_complex_list(rows[r], "S0[" + std::to_string(r) + "]");
      if (static_cast<int>(row.size()) != d) throw ConfigError("field 'S0' must be an NM x NM matrix");
      for (int k = 0; k < d; ++k) S(r, k) = row[k];
    }
    SpinConfig sc(c.M, c.N, S);
    cplx t0 = trace(sc.block(0, 0));
    if (!sc.on_constraints(t0, 1e-12))
      throw ConstraintViolation("field 'S0': tr S^ii differ between sites; the model needs tr S^ii = nu equal for all i");
    if (std::abs(t0 - c.nu) > 1e-12) throw ConstraintViolation("field 'S0': tr S^ii does not equal field 'nu'");
    c.S0 = S;
  }
  c.echo = j;
  return c;
}

ModelConfig load_model_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config '" + path + "'");
  Json j;
  try {
    j = Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_model_config(j);
}

PhaseState make_state(const ModelConfig& cfg) {
  auto fam = make_family(cfg.family, cfg.N, cfg.tau, cfg.C);
  PhaseState s = random_state(fam, cfg.M, cfg.nu, cfg.spin_mode == "rank1", cfg.seed);
  if (!cfg.q0.empty()) {
    s.q = cfg.q0;
    for (int i = 0; i < cfg.M; ++i)
      for (int k = 0; k < cfg.M; ++k)
        if (i != k && clearance(*fam, s.q[i] - s.q[k]) < 1e-3)
          throw ConfigError("field 'q0': positions " + std::to_string(i) + " and " + std::to_string(k) + " sit on a pole");
  }
  if (!cfg.p0.empty()) s.p = cfg.p0;
  if (cfg.S0) s.spin = SpinConfig(cfg.M, cfg.N, *cfg.S0);
  return s;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interacting tops toolkit: identity certification, Lax checks and simulation", "itops"};
  app.require_subcommand(1);

  std::string flavor, family, config, monitor_z = "0.3,0.2;0.65,-0.1", csv_out, tau_s, c_s, nu_s = "1,0";
  int samples = 50, n = 2, m = 2, z_samples = 5, pairs = 5;
  std::uint64_t seed = 0;
  double tol = 1e-9, dt = 1e-3, drift_tol = 1e-6, lax_tol = 1e-9;
  long steps = 1000, monitor_every = 10;

  auto* cf = app.add_subcommand("certify-functions", "scalar identity residuals");
  cf->add_option("--flavor", flavor)->required()->check(CLI::IsMember({"rational", "trig", "elliptic"}));
  cf->add_option("--tau", tau_s, "RE,IM");
  cf->add_option("--samples", samples);
  cf->add_option("--seed", seed);
  cf->add_option("--tol", tol);

  auto* cr = app.add_subcommand("certify-rmatrix", "R-matrix property residuals");
  cr->add_option("--family", family)->required()->check(CLI::IsMember({"xxx", "11v", "xxz", "7v", "bb"}));
  cr->add_option("--c", c_s, "RE,IM");
  cr->add_option("--n", n);
  cr->add_option("--tau", tau_s, "RE,IM");
  cr->add_option("--samples", samples);
  cr->add_option("--seed", seed);
  cr->add_option("--tol", tol);

  auto* cl = app.add_subcommand("check-lax", "Lax equation and equations of motion");
  cl->add_option("--config", config)->required();
  cl->add_option("--z-samples", z_samples);
  cl->add_option("--tol", tol);

  auto* ce = app.add_subcommand("check-exchange", "classical exchange relation");
  ce->add_option("--config", config)->required();
  ce->add_option("--pairs", pairs);
  ce->add_option("--tol", tol);

  auto* cc = app.add_subcommand("check-cm-rmx", "R-matrix valued Calogero-Moser Lax pair");
  cc->add_option("--family", family)->required()->check(CLI::IsMember({"xxx", "11v", "xxz", "7v", "bb"}));
  cc->add_option("--n", n);
  cc->add_option("--m", m);
  cc->add_option("--nu", nu_s, "RE,IM");
  cc->add_option("--tau", tau_s, "RE,IM");
  cc->add_option("--c", c_s, "RE,IM");
  cc->add_option("--z-samples", z_samples);
  cc->add_option("--seed", seed);
  cc->add_option("--tol", tol);

  auto* sm = app.add_subcommand("simulate", "RK4 trajectory with conserved-quantity monitors");
  sm->add_option("--config", config)->required();
  sm->add_option("--dt", dt);
  sm->add_option("--steps", steps);
  sm->add_option("--monitor-z", monitor_z, "RE,IM;RE,IM");
  sm->add_option("--monitor-every", monitor_every);
  sm->add_option("--out", csv_out);
  sm->add_option("--drift-tol", drift_tol);
  sm->add_option("--lax-tol", lax_tol);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    auto opt = [](const std::string& s) -> std::optional<cplx> {
      if (s.empty()) return std::nullopt;
      return parse_complex(s);
    };
    if (cf->parsed()) return cmd_certify_functions(out, flavor, opt(tau_s), samples, seed, tol);
    if (cr->parsed()) return cmd_certify_rmatrix(out, family, opt(c_s), n, opt(tau_s), samples, seed, tol);
    if (cl->parsed()) return cmd_check_lax(out, config, z_samples, tol);
    if (ce->parsed()) return cmd_check_exchange(out, config, pairs, tol);
    if (cc->parsed())
      return cmd_check_cm_rmx(out, family, n, m, parse_complex(nu_s), opt(tau_s), opt(c_s), z_samples, seed, tol);
    if (sm->parsed()) return cmd_simulate(out, config, dt, steps, monitor_z, monitor_every, csv_out, drift_tol, lax_tol);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ConstraintViolation& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const BadModulus& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DimensionMismatch& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ScaleExceeded& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace itops
