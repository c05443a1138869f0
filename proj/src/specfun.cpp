#include "itops/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "itops/errors.hpp"

namespace itops {

namespace {

std::string fmt_c(cplx z) {
  std::ostringstream os;
  os.precision(17);
  os << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
  return os.str();
}

}  // namespace

Flavor Flavor::rational() { return Flavor{}; }

Flavor Flavor::trigonometric() {
  Flavor f;
  f.tag_ = FlavorTag::Trigonometric;
  f.wp_shift_ = 1.0 / 3.0;
  return f;
}

Flavor Flavor::elliptic(cplx tau, double trunc_tol) {
  if (!(tau.imag() >= 0.05)) throw BadModulus("elliptic flavor needs Im(tau) >= 0.05, got tau=" + fmt_c(tau));
  if (!(trunc_tol > 0.0 && trunc_tol <= 1e-8)) throw BadModulus("trunc_tol must lie in (0, 1e-8]");
  Flavor f;
  f.tag_ = FlavorTag::Elliptic;
  f.tau_ = tau;
  f.trunc_tol_ = trunc_tol;
  ThetaDerivs t0 = theta_series(0.0, tau, trunc_tol);
  f.theta1_0_ = t0.d1;
  f.wp_shift_ = t0.d3 / (3.0 * t0.d1);
  return f;
}

std::string Flavor::name() const {
  switch (tag_) {
    case FlavorTag::Rational: return "rational";
    case FlavorTag::Trigonometric: return "trig";
    case FlavorTag::Elliptic: return "elliptic";
  }
  return "?";
}

double Flavor::pole_distance(cplx z) const {
  switch (tag_) {
    case FlavorTag::Rational: return std::abs(z);
    case FlavorTag::Trigonometric: {
      double n = std::round(z.imag() / kPi);
      return std::abs(z - cplx(0.0, kPi * n));
    }
    case FlavorTag::Elliptic: {
      double y = z.imag() / tau_.imag();
      double best = std::abs(z);
      double ny = std::floor(y);
      for (double n = ny - 1; n <= ny + 2; n += 1.0) {
        cplx w = z - n * tau_;
        double m0 = std::round(w.real());
        for (double m = m0 - 1; m <= m0 + 1; m += 1.0) best = std::min(best, std::abs(w - m));
      }
      return best;
    }
  }
  return 0.0;
}

void Flavor::guard(cplx z, const char* where) const {
  if (!(pole_distance(z) > kPoleEps) || !std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw PoleProximity(std::string(where) + ": argument " + fmt_c(z) + " is within the pole guard", z);
}

ThetaDerivs theta_series(cplx z, cplx tau, double trunc_tol, int cap) {
  if (!(tau.imag() >= 0.05)) throw BadModulus("theta needs Im(tau) >= 0.05, got tau=" + fmt_c(tau));
  cplx s[4] = {0.0, 0.0, 0.0, 0.0};
  double absum[4] = {0.0, 0.0, 0.0, 0.0};
  const cplx zs = z + 0.5;
  // Terms k and -k-1 (n = +-(k+1/2)) are added together.
  for (int k = 0; k <= cap; ++k) {
    double n = k + 0.5;
    cplx tp = std::exp(kI * kPi * tau * (n * n) + 2.0 * kPi * kI * zs * n);
    cplx tm = std::exp(kI * kPi * tau * (n * n) - 2.0 * kPi * kI * zs * n);
    cplx fp = 2.0 * kPi * kI * n;
    cplx tpj = tp, tmj = tm;
    bool small = k > 0;
    cplx add[4];
    for (int j = 0; j < 4; ++j) {
      add[j] = tpj + tmj;
      double mag = std::abs(tpj) + std::abs(tmj);
      if (!(mag < trunc_tol * absum[j])) small = false;
      absum[j] += mag;
      tpj *= fp;
      tmj *= -fp;
    }
    if (small) return {s[0], s[1], s[2], s[3]};
    for (int j = 0; j < 4; ++j) s[j] += add[j];
    if (!std::isfinite(absum[3])) break;
  }
  throw NonConvergent("theta series did not converge within |k| <= " + std::to_string(cap) + " at z=" + fmt_c(z));
}

cplx theta(cplx z, cplx tau) { return theta_series(z, tau).d0; }

namespace {

ThetaDerivs th(const Flavor& fl, cplx z) { return theta_series(z, fl.tau(), fl.trunc_tol()); }

}  // namespace

cplx kronecker_phi(const Flavor& fl, cplx eta, cplx z) {
  fl.guard(eta, "kronecker_phi(eta)");
  fl.guard(z, "kronecker_phi(z)");
  switch (fl.tag()) {
    case FlavorTag::Rational: return 1.0 / eta + 1.0 / z;
    case FlavorTag::Trigonometric: return 1.0 / std::tanh(eta) + 1.0 / std::tanh(z);
    case FlavorTag::Elliptic:
      fl.guard(eta + z, "kronecker_phi(eta+z)");
      return fl.theta1_at_zero() * th(fl, eta + z).d0 / (th(fl, eta).d0 * th(fl, z).d0);
  }
  return 0.0;
}

cplx eisenstein_E1(const Flavor& fl, cplx z) {
  fl.guard(z, "E1");
  switch (fl.tag()) {
    case FlavorTag::Rational: return 1.0 / z;
    case FlavorTag::Trigonometric: return 1.0 / std::tanh(z);
    case FlavorTag::Elliptic: {
      ThetaDerivs t = th(fl, z);
      return t.d1 / t.d0;
    }
  }
  return 0.0;
}

cplx eisenstein_E2(const Flavor& fl, cplx z) {
  fl.guard(z, "E2");
  switch (fl.tag()) {
    case FlavorTag::Rational: return 1.0 / (z * z);
    case FlavorTag::Trigonometric: {
      cplx s = std::sinh(z);
      return 1.0 / (s * s);
    }
    case FlavorTag::Elliptic: {
      ThetaDerivs t = th(fl, z);
      cplx l = t.d1 / t.d0;
      return l * l - t.d2 / t.d0;
    }
  }
  return 0.0;
}

cplx weierstrass_p(const Flavor& fl, cplx z) { return eisenstein_E2(fl, z) + fl.wp_shift(); }

cplx weierstrass_p_prime(const Flavor& fl, cplx z) {
  fl.guard(z, "wp'");
  switch (fl.tag()) {
    case FlavorTag::Rational: return -2.0 / (z * z * z);
    case FlavorTag::Trigonometric: {
      cplx s = std::sinh(z);
      return -2.0 * std::cosh(z) / (s * s * s);
    }
    case FlavorTag::Elliptic: {
      ThetaDerivs t = th(fl, z);
      cplx l1 = t.d1 / t.d0;
      cplx e1pp = t.d3 / t.d0 - 3.0 * l1 * t.d2 / t.d0 + 2.0 * l1 * l1 * l1;
      return -e1pp;
    }
  }
  return 0.0;
}

cplx phi_derivative_f(const Flavor& fl, cplx z, cplx q) {
  cplx ph = kronecker_phi(fl, z, q);
  return ph * (eisenstein_E1(fl, z + q) - eisenstein_E1(fl, q));
}

cplx phi_second_derivative(const Flavor& fl, cplx z, cplx q) {
  cplx ph = kronecker_phi(fl, z, q);
  cplx d = eisenstein_E1(fl, z + q) - eisenstein_E1(fl, q);
  return ph * (d * d - eisenstein_E2(fl, z + q) + eisenstein_E2(fl, q));
}

SectorIndex SectorIndex::reduced() const {
  auto md = [this](int x) { return ((x % N) + N) % N; };
  return {md(a1), md(a2), N};
}

cplx sector_omega(const Flavor& fl, const SectorIndex& a) {
  return (static_cast<double>(a.a1) + static_cast<double>(a.a2) * fl.tau()) / static_cast<double>(a.N);
}

cplx sector_phi(const Flavor& fl, const SectorIndex& a, cplx z, cplx u) {
  cplx pref = std::exp(2.0 * kPi * kI * (static_cast<double>(a.a2) / a.N) * z);
  return pref * kronecker_phi(fl, z, sector_omega(fl, a) + u);
}

cplx sector_f(const Flavor& fl, const SectorIndex& a, cplx z, cplx u) {
  cplx pref = std::exp(2.0 * kPi * kI * (static_cast<double>(a.a2) / a.N) * z);
  return pref * phi_derivative_f(fl, z, sector_omega(fl, a) + u);
}

cplx kappa(const SectorIndex& a, const SectorIndex& b) {
  double e = static_cast<double>(b.a1) * a.a2 - static_cast<double>(b.a2) * a.a1;
  return std::exp(kI * kPi * e / static_cast<double>(a.N));
}

}  // namespace itops
