#pragma once

#include <complex>
#include <cstdint>
#include <string>

#include "itops/report.hpp"

namespace itops {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kPoleEps = 1e-6;

enum class FlavorTag { Rational, Trigonometric, Elliptic };

// Which of the three function families is in use. Elliptic flavors cache
// theta'(0) and theta'''(0) at construction.
class Flavor {
 public:
  static Flavor rational();
  static Flavor trigonometric();
  static Flavor elliptic(cplx tau, double trunc_tol = 1e-16);

  FlavorTag tag() const { return tag_; }
  cplx tau() const { return tau_; }
  double trunc_tol() const { return trunc_tol_; }
  std::string name() const;

  // c in wp(z) = E2(z) + c; also the linear coefficient of E1 at 0.
  cplx wp_shift() const { return wp_shift_; }
  cplx theta1_at_zero() const { return theta1_0_; }

  // Distance from z to the nearest pole (0, i*pi*Z, or Z + tau*Z).
  double pole_distance(cplx z) const;
  void guard(cplx z, const char* where) const;

 private:
  FlavorTag tag_ = FlavorTag::Rational;
  cplx tau_{0.0, 0.0};
  double trunc_tol_ = 1e-16;
  cplx wp_shift_{0.0, 0.0};
  cplx theta1_0_{0.0, 0.0};
};

struct ThetaDerivs {
  cplx d0, d1, d2, d3;
};

inline constexpr int kThetaCap = 200;

// Odd theta function and its first three z-derivatives, summed term-wise.
ThetaDerivs theta_series(cplx z, cplx tau, double trunc_tol = 1e-16, int cap = kThetaCap);
cplx theta(cplx z, cplx tau);

cplx kronecker_phi(const Flavor& fl, cplx eta, cplx z);
cplx eisenstein_E1(const Flavor& fl, cplx z);
cplx eisenstein_E2(const Flavor& fl, cplx z);
cplx weierstrass_p(const Flavor& fl, cplx z);
// d/dz wp(z) = d/dz E2(z).
cplx weierstrass_p_prime(const Flavor& fl, cplx z);

// d/dq phi(z, q), closed form.
cplx phi_derivative_f(const Flavor& fl, cplx z, cplx q);
// d^2/dq^2 phi(z, q), closed form.
cplx phi_second_derivative(const Flavor& fl, cplx z, cplx q);

struct SectorIndex {
  int a1 = 0;
  int a2 = 0;
  int N = 1;

  bool is_zero() const { return a1 == 0 && a2 == 0; }
  SectorIndex negated() const { return {-a1, -a2, N}; }
  // Representative in [0,N)^2.
  SectorIndex reduced() const;
};

cplx sector_omega(const Flavor& fl, const SectorIndex& a);
cplx sector_phi(const Flavor& fl, const SectorIndex& a, cplx z, cplx u);
cplx sector_f(const Flavor& fl, const SectorIndex& a, cplx z, cplx u);
cplx kappa(const SectorIndex& a, const SectorIndex& b);

// Residuals of the scalar identities at n_samples random points. sector_n
// selects N for the elliptic sector identities (ignored otherwise).
ResidualReport scalar_identity_report(const Flavor& fl, int n_samples, std::uint64_t seed,
                                      int sector_n = 2);

// Only the sector identities (elliptic flavor).
void sector_identity_residuals(const Flavor& fl, int n, int n_samples, std::uint64_t seed,
                               ResidualReport& rep);

}  // namespace itops
