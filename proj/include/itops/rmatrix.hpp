#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "itops/report.hpp"
#include "itops/specfun.hpp"
#include "itops/tensor.hpp"

namespace itops {

enum class FamilyKind { YangXXX, ElevenVertex, SixVertexXXZ, SevenVertex, BaxterBelavin };

// R^hbar_12(z) with hbar the first slot and z the argument, plus its
// classical data. Immutable after construction.
class RMatrixFamily {
 public:
  static RMatrixFamily yang(int n);
  static RMatrixFamily eleven_vertex();
  static RMatrixFamily six_vertex();
  static RMatrixFamily seven_vertex(cplx c);
  static RMatrixFamily baxter_belavin(int n, cplx tau);

  FamilyKind kind() const { return kind_; }
  int n() const { return n_; }
  const Flavor& flavor() const { return flavor_; }
  cplx c() const { return c_; }
  std::string name() const;

  TwoSiteOperator R(cplx hbar, cplx z) const;
  TwoSiteOperator r(cplx z) const;
  TwoSiteOperator m(cplx z) const;
  TwoSiteOperator m0() const;
  // d/dq R^z(q).
  TwoSiteOperator F(cplx z, cplx q) const;
  // d/dq r(q).
  TwoSiteOperator F0(cplx q) const;
  // d^2/dq^2 r(q).
  TwoSiteOperator F0_prime(cplx q) const;
  // d^2/dq^2 R^z(q).
  TwoSiteOperator R_qq(cplx z, cplx q) const;
  // d/dhbar R^hbar(z).
  TwoSiteOperator R_hbar(cplx hbar, cplx z) const;

  // Coefficients of R^z(q) = P/q + R^{z,(0)} + q R^{z,(1)} + ...
  TwoSiteOperator R0(cplx z) const;
  TwoSiteOperator R1(cplx z) const;
  // Coefficients of r(z) = P/z + r^(0) + z r^(1) + ...
  TwoSiteOperator r0() const;
  TwoSiteOperator r1() const;

  void guard(cplx x, const char* where) const { flavor_.guard(x, where); }

 private:
  FamilyKind kind_ = FamilyKind::YangXXX;
  int n_ = 1;
  cplx c_{0.0, 0.0};
  Flavor flavor_ = Flavor::rational();
  // Baxter-Belavin: T_a (x) T_{-a} for a in [0,N)^2, a = (0,0) first.
  std::vector<SectorIndex> sectors_;
  std::vector<TwoSiteOperator> tt_;

  TwoSiteOperator from4(const cplx (&e)[4][4]) const;
};

// Laurent coefficient c_k of f about 0 by the trapezoid rule on |z| = radius.
TwoSiteOperator laurent_coefficient(const std::function<TwoSiteOperator(cplx)>& f, int k, double radius = 0.1,
                                    int points = 64);

// Three-site residual helpers; all live in Mat(N)^{(x)3}.
ComplexMatrix on3(const TwoSiteOperator& t, int a, int b);

// Max relative residuals of every R-matrix property (not finalized).
ResidualReport certify(const RMatrixFamily& fam, int n_samples, std::uint64_t seed);

}  // namespace itops
