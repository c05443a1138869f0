// Scalar identity residuals for the three flavors.
#include <algorithm>
#include <cmath>
#include <functional>
#include <initializer_list>

#include "itops/errors.hpp"
#include "itops/random.hpp"
#include "itops/specfun.hpp"

namespace itops {

namespace {

double rel(cplx diff, std::initializer_list<cplx> terms) {
  double s = 0.0;
  for (cplx t : terms) s = std::max(s, std::abs(t));
  if (s == 0.0) return std::abs(diff);
  return std::abs(diff) / s;
}

cplx draw(const Flavor& fl, Rng& rng) {
  if (fl.tag() == FlavorTag::Elliptic) {
    double s = rng.uniform();
    double t = rng.uniform();
    return s + t * fl.tau();
  }
  return rng.in_box();
}

// Re-draws until body() runs without tripping a pole guard.
void sample(Rng& rng, const std::function<void()>& body) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    try {
      body();
      return;
    } catch (const PoleProximity&) {
    }
  }
  throw Error("sampling: could not find a pole-free argument tuple");
  (void)rng;
}

}  // namespace

ResidualReport scalar_identity_report(const Flavor& fl, int n_samples, std::uint64_t seed, int sector_n) {
  ResidualReport rep;
  Rng rng(seed);
  auto d = [&] { return draw(fl, rng); };

  for (int s = 0; s < n_samples; ++s) {
    sample(rng, [&] {
      cplx a = d(), b = d();
      cplx x = kronecker_phi(fl, a, b), y = kronecker_phi(fl, b, a);
      rep.record("symmetry", rel(x - y, {x, y}));
    });

    sample(rng, [&] {
      cplx z = d(), w = d(), q = d(), u = d();
      cplx t0 = kronecker_phi(fl, z, q) * kronecker_phi(fl, w, u);
      cplx t1 = kronecker_phi(fl, z - w, q) * kronecker_phi(fl, w, q + u);
      cplx t2 = kronecker_phi(fl, w - z, u) * kronecker_phi(fl, z, q + u);
      rep.record("fay", rel(t0 - t1 - t2, {t0, t1, t2}));
    });

    sample(rng, [&] {
      cplx z = d(), x = d(), y = d();
      cplx t0 = kronecker_phi(fl, z, x) * phi_derivative_f(fl, z, y);
      cplx t1 = kronecker_phi(fl, z, y) * phi_derivative_f(fl, z, x);
      cplx rhs = kronecker_phi(fl, z, x + y) * (weierstrass_p(fl, x) - weierstrass_p(fl, y));
      rep.record("f_degeneration", rel(t0 - t1 - rhs, {t0, t1, rhs}));
    });

    sample(rng, [&] {
      cplx eta = d(), z = d();
      cplx lhs = kronecker_phi(fl, eta, z) * kronecker_phi(fl, eta, -z);
      cplx p = weierstrass_p(fl, eta) - weierstrass_p(fl, z);
      cplx e = eisenstein_E2(fl, eta) - eisenstein_E2(fl, z);
      rep.record("unitarity", std::max(rel(lhs - p, {lhs, weierstrass_p(fl, eta), weierstrass_p(fl, z)}),
                                       rel(lhs - e, {lhs, eisenstein_E2(fl, eta), eisenstein_E2(fl, z)})));
    });

    sample(rng, [&] {
      cplx z = d(), w = d(), q = d();
      cplx lhs = kronecker_phi(fl, z, q) * kronecker_phi(fl, w, q);
      cplx pzw = kronecker_phi(fl, z + w, q);
      cplx e1z = eisenstein_E1(fl, z), e1w = eisenstein_E1(fl, w);
      cplx r1 = pzw * (e1z + e1w + eisenstein_E1(fl, q) - eisenstein_E1(fl, z + w + q));
      cplx r2 = pzw * (e1z + e1w) - phi_derivative_f(fl, z + w, q);
      rep.record("e1_sum", std::max(rel(lhs - r1, {lhs, pzw * e1z, pzw * e1w}),
                                    rel(lhs - r2, {lhs, pzw * e1z, pzw * e1w})));
    });

    sample(rng, [&] {
      cplx u = d();
      double ang = 2.0 * kPi * rng.uniform();
      cplx z = 1e-3 * std::polar(1.0, ang);
      cplx e1 = eisenstein_E1(fl, u), p = weierstrass_p(fl, u), pp = weierstrass_p_prime(fl, u);
      cplx series = 1.0 / z + e1 + z / 2.0 * (e1 * e1 - p) + z * z / 6.0 * (e1 * e1 * e1 - 3.0 * e1 * p - pp);
      cplx ph = kronecker_phi(fl, z, u);
      rep.record("phi_expansion", rel(ph - series, {ph}));
      cplx e1z = eisenstein_E1(fl, z);
      cplx e1s = 1.0 / z + fl.wp_shift() * z;
      rep.record("e1_expansion", rel(e1z - e1s, {e1z}));
    });

    sample(rng, [&] {
      cplx u = d();
      // Symmetric average removes the odd part; Richardson removes h^2.
      auto g = [&](double h) { return 0.5 * (phi_derivative_f(fl, h, u) + phi_derivative_f(fl, -h, u)); };
      double h = 1e-3;
      cplx f0 = (4.0 * g(h / 2) - g(h)) / 3.0;
      cplx e2 = eisenstein_E2(fl, u);
      rep.record("f_at_zero", rel(f0 + e2, {e2}));
    });
  }

  if (fl.tag() == FlavorTag::Elliptic) sector_identity_residuals(fl, sector_n, n_samples, seed ^ 0x9e3779b97f4a7c15ULL, rep);
  return rep;
}

void sector_identity_residuals(const Flavor& fl, int n, int n_samples, std::uint64_t seed, ResidualReport& rep) {
  if (fl.tag() != FlavorTag::Elliptic) throw Error("sector identities need the elliptic flavor");
  Rng rng(seed);
  auto d = [&] { return draw(fl, rng); };
  const double nn = static_cast<double>(n);
  auto e1 = [&](cplx z) { return eisenstein_E1(fl, z); };
  auto e2 = [&](cplx z) { return eisenstein_E2(fl, z); };
  std::vector<SectorIndex> all;
  for (int a1 = 0; a1 < n; ++a1)
    for (int a2 = 0; a2 < n; ++a2) all.push_back({a1, a2, n});
  // phi_a(q, w_a) (E1(q + w_a) - E1(q) + 2 pi i a2/N)
  auto dphi = [&](const SectorIndex& a, cplx q) {
    cplx w = sector_omega(fl, a);
    return sector_phi(fl, a, q, 0.0) * (e1(q + w) - e1(q) + 2.0 * kPi * kI * (a.a2 / nn));
  };

  for (int s = 0; s < n_samples; ++s) {
    sample(rng, [&] {
      cplx hb = d(), z = d();
      double worst = 0.0;
      for (const auto& g : all) {
        cplx lhs = 0.0;
        double sc = 0.0;
        for (const auto& a : all) {
          cplx k = kappa(a, g);
          cplx t = k * k * sector_phi(fl, a, nn * hb, z / nn) / nn;
          lhs += t;
          sc = std::max(sc, std::abs(t));
        }
        cplx rhs = sector_phi(fl, g, z, hb);
        worst = std::max(worst, std::abs(lhs - rhs) / std::max({sc, std::abs(rhs), 1e-300}));
      }
      rep.record("sector_fourier", worst);
    });

    sample(rng, [&] {
      cplx q = d();
      cplx lhs = 0.0;
      double sc = 0.0;
      for (const auto& a : all) {
        cplx t = e2(sector_omega(fl, a) + q);
        lhs += t;
        sc = std::max(sc, std::abs(t));
      }
      cplx rhs = nn * nn * e2(nn * q);
      rep.record("e2_lattice_sum", std::abs(lhs - rhs) / std::max(sc, std::abs(rhs)));

      double worst_w = 0.0, worst_c = 0.0;
      for (const auto& g : all) {
        cplx lw = 0.0;
        double sw = 0.0;
        for (const auto& a : all) {
          cplx k = kappa(a, g);
          cplx t = k * k * e2(sector_omega(fl, a) + q);
          lw += t;
          sw = std::max(sw, std::abs(t));
        }
        if (!g.is_zero()) {
          cplx rw = -nn * nn * dphi(g, nn * q);
          worst_w = std::max(worst_w, std::abs(lw - rw) / std::max(sw, std::abs(rw)));
        }
        cplx lc = -e2(q);
        double sc2 = std::abs(lc);
        for (const auto& a : all) {
          if (a.is_zero()) continue;
          cplx k = kappa(a, g);
          cplx t = k * k * dphi(a, q);
          lc += t;
          sc2 = std::max(sc2, std::abs(t));
        }
        cplx rc = -e2(sector_omega(fl, g) + q / nn);
        worst_c = std::max(worst_c, std::abs(lc - rc) / std::max(sc2, std::abs(rc)));
      }
      rep.record("e2_lattice_weighted", worst_w);
      rep.record("e2_lattice_converse", worst_c);
    });
  }
}

}  // namespace itops
