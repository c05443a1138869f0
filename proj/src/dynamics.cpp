#include "itops/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "itops/errors.hpp"

namespace itops {

namespace {

PhaseState shifted(const PhaseState& s, const PhaseVelocity& v, double h) {
  PhaseState out = s;
  for (std::size_t i = 0; i < s.q.size(); ++i) {
    out.q[i] += h * v.dq[i];
    out.p[i] += h * v.dp[i];
  }
  out.spin.big() += h * v.dS;
  return out;
}

double rel_drift(cplx x, cplx x0) {
  double a = std::abs(x0);
  return a > 0.0 ? std::abs(x - x0) / a : std::abs(x - x0);
}

TrajectoryRow monitor(const PhaseState& s, double t, const IntegratorConfig& cfg) {
  TrajectoryRow row;
  row.t = t;
  row.q = s.q;
  row.p = s.p;
  row.H = hamiltonian(s);
  for (cplx z : cfg.monitor_z) {
    ComplexMatrix L = build_L(s, z);
    ComplexMatrix L2 = L * L;
    row.trL.push_back({trace(L), trace(L2), trace(L2 * L)});
  }
  const ComplexMatrix& S = s.spin.big();
  ComplexMatrix S2 = S * S;
  row.casimir = {trace(S), trace(S2), trace(S2 * S)};
  if (cfg.monitor_lax && !cfg.monitor_z.empty()) {
    for (cplx z : cfg.monitor_z) row.lax_residual = std::max(row.lax_residual, lax_residual(s, z));
  }
  return row;
}

}  // namespace

PhaseState rk4_step(const PhaseState& s, double dt, double constraint_tol) {
  auto f = [&](const PhaseState& x) { return eom_rhs(x, DiagonalForm::General, constraint_tol); };
  PhaseVelocity k1 = f(s);
  PhaseVelocity k2 = f(shifted(s, k1, 0.5 * dt));
  PhaseVelocity k3 = f(shifted(s, k2, 0.5 * dt));
  PhaseVelocity k4 = f(shifted(s, k3, dt));
  PhaseState out = s;
  const double w = dt / 6.0;
  for (std::size_t i = 0; i < s.q.size(); ++i) {
    out.q[i] += w * (k1.dq[i] + 2.0 * k2.dq[i] + 2.0 * k3.dq[i] + k4.dq[i]);
    out.p[i] += w * (k1.dp[i] + 2.0 * k2.dp[i] + 2.0 * k3.dp[i] + k4.dp[i]);
  }
  out.spin.big() += w * (k1.dS + 2.0 * k2.dS + 2.0 * k3.dS + k4.dS);
  // Generator vectors no longer describe the evolved S.
  out.spin = SpinConfig(s.M(), s.N(), out.spin.big());
  return out;
}

TrajectoryRecord integrate(const PhaseState& s0, const IntegratorConfig& cfg) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw ConfigError("dt must be a positive finite number");
  if (cfg.steps < 1) throw ConfigError("steps must be positive");
  if (cfg.monitor_every < 1) throw ConfigError("monitor_every must be positive");
  const cplx nu = trace(s0.spin.block(0, 0));
  if (!s0.spin.on_constraints(nu, 1e-12))
    throw ConstraintViolation("initial state is off the constraint surface tr S^ii = nu");

  TrajectoryRecord rec;
  rec.monitor_z = cfg.monitor_z;
  PhaseState s = s0;
  long step = 0;
  try {
    rec.rows.push_back(monitor(s, 0.0, cfg));
    for (step = 1; step <= cfg.steps; ++step) {
      s = rk4_step(s, cfg.dt, 1e-6);
      double err = s.spin.constraint_error(nu);
      if (err > 1e-6)
        throw ConstraintDrift("tr S^ii drifted by " + std::to_string(err) + " at step " + std::to_string(step));
      if (step % cfg.monitor_every == 0) rec.rows.push_back(monitor(s, static_cast<double>(step) * cfg.dt, cfg));
    }
  } catch (const PoleProximity& e) {
    throw PoleProximity(std::string(e.what()) + " (step " + std::to_string(step) + ")", e.argument(), step);
  } catch (const ConstraintViolation& e) {
    throw ConstraintDrift(std::string(e.what()) + " (step " + std::to_string(step) + ")");
  }
  rec.final_state = s;
  return rec;
}

double DriftTable::max_trL() const {
  double m = 0.0;
  for (const auto& a : trL)
    for (double x : a) m = std::max(m, x);
  return m;
}

double DriftTable::max_casimir() const { return *std::max_element(casimir.begin(), casimir.end()); }

DriftTable drift_table(const TrajectoryRecord& rec) {
  if (rec.rows.empty()) throw ConfigError("empty trajectory");
  const TrajectoryRow& r0 = rec.rows.front();
  DriftTable d;
  d.trL.assign(r0.trL.size(), {0.0, 0.0, 0.0});
  for (const auto& r : rec.rows) {
    d.H = std::max(d.H, rel_drift(r.H, r0.H));
    for (std::size_t s = 0; s < r.trL.size(); ++s)
      for (int k = 0; k < 3; ++k) d.trL[s][k] = std::max(d.trL[s][k], rel_drift(r.trL[s][k], r0.trL[s][k]));
    for (int k = 0; k < 3; ++k) d.casimir[k] = std::max(d.casimir[k], rel_drift(r.casimir[k], r0.casimir[k]));
    d.max_lax_residual = std::max(d.max_lax_residual, r.lax_residual);
  }
  return d;
}

Json drift_json(const TrajectoryRecord& rec, const DriftTable& d) {
  Json j = Json::object();
  j["H"] = d.H;
  Json tl = Json::array();
  for (std::size_t s = 0; s < d.trL.size(); ++s) {
    Json e = Json::object();
    e["z"] = {rec.monitor_z[s].real(), rec.monitor_z[s].imag()};
    e["trL1"] = d.trL[s][0];
    e["trL2"] = d.trL[s][1];
    e["trL3"] = d.trL[s][2];
    tl.push_back(e);
  }
  j["trL"] = tl;
  j["trS1"] = d.casimir[0];
  j["trS2"] = d.casimir[1];
  j["trS3"] = d.casimir[2];
  j["max_lax_residual"] = d.max_lax_residual;
  return j;
}

ResidualReport isospectrality_report(const TrajectoryRecord& rec, double drift_tol, double lax_tol) {
  DriftTable d = drift_table(rec);
  ResidualReport rep;
  const int n = static_cast<int>(rec.rows.size());
  auto put = [&](const std::string& name, double x) {
    ResidualEntry& e = rep.entry(name);
    e.max_residual = x;
    e.samples = n;
  };
  put("hamiltonian_drift", d.H);
  for (std::size_t s = 0; s < d.trL.size(); ++s)
    for (int k = 0; k < 3; ++k) put("trL" + std::to_string(k + 1) + "_z" + std::to_string(s) + "_drift", d.trL[s][k]);
  for (int k = 0; k < 3; ++k) put("trS" + std::to_string(k + 1) + "_drift", d.casimir[k]);
  rep.finalize(drift_tol);
  ResidualEntry& lax = rep.entry("lax_residual");
  lax.max_residual = d.max_lax_residual;
  lax.samples = n;
  lax.tol = lax_tol;
  lax.pass = std::isfinite(d.max_lax_residual) && d.max_lax_residual < lax_tol;
  return rep;
}

void write_csv(std::ostream& os, const TrajectoryRecord& rec) {
  if (rec.rows.empty()) return;
  const int m = static_cast<int>(rec.rows.front().q.size());
  os << "t";
  for (int i = 0; i < m; ++i) os << ",re_q" << i << ",im_q" << i;
  for (int i = 0; i < m; ++i) os << ",re_p" << i << ",im_p" << i;
  os << ",re_H,im_H";
  for (std::size_t s = 0; s < rec.monitor_z.size(); ++s)
    for (int k = 1; k <= 3; ++k) os << ",re_trL" << k << "_z" << s << ",im_trL" << k << "_z" << s;
  for (int k = 1; k <= 3; ++k) os << ",re_trS" << k << ",im_trS" << k;
  os << ",lax_residual\n";
  char buf[64];
  auto num = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    os << buf;
  };
  auto c = [&](cplx x) {
    os << ',';
    num(x.real());
    os << ',';
    num(x.imag());
  };
  for (const auto& r : rec.rows) {
    num(r.t);
    for (cplx x : r.q) c(x);
    for (cplx x : r.p) c(x);
    c(r.H);
    for (const auto& a : r.trL)
      for (cplx x : a) c(x);
    for (cplx x : r.casimir) c(x);
    os << ',';
    num(r.lax_residual);
    os << '\n';
  }
}

}  // namespace itops
