#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "itops/model.hpp"
#include "itops/report.hpp"

namespace itops {

enum class Scheme { RK4 };

struct IntegratorConfig {
  double dt = 1e-3;
  long steps = 1000;
  Scheme scheme = Scheme::RK4;
  std::vector<cplx> monitor_z;
  long monitor_every = 10;
  // Evaluating the Lax residual costs one bracket flow per row.
  bool monitor_lax = true;
};

struct TrajectoryRow {
  double t = 0.0;
  std::vector<cplx> q;
  std::vector<cplx> p;
  cplx H;
  // trL[s][k-1] = tr L^k(z_s).
  std::vector<std::array<cplx, 3>> trL;
  std::array<cplx, 3> casimir;  // tr S^k
  double lax_residual = 0.0;
};

struct TrajectoryRecord {
  std::vector<cplx> monitor_z;
  std::vector<TrajectoryRow> rows;
  PhaseState final_state;
};

// One classical RK4 step of the equations of motion.
PhaseState rk4_step(const PhaseState& s, double dt, double constraint_tol = 1e-6);

TrajectoryRecord integrate(const PhaseState& s0, const IntegratorConfig& cfg);

// Drift of each monitored quantity relative to its initial value:
// max_t |x(t) - x(0)| / max(|x(0)|, 1).
struct DriftTable {
  double H = 0.0;
  std::vector<std::array<double, 3>> trL;
  std::array<double, 3> casimir{};
  double max_lax_residual = 0.0;
  double max_trL() const;
  double max_casimir() const;
};

DriftTable drift_table(const TrajectoryRecord& rec);
Json drift_json(const TrajectoryRecord& rec, const DriftTable& d);

// Drift table as a residual report; the Lax residual entry uses lax_tol.
ResidualReport isospectrality_report(const TrajectoryRecord& rec, double drift_tol = 1e-6, double lax_tol = 1e-9);

void write_csv(std::ostream& os, const TrajectoryRecord& rec);

}  // namespace itops
