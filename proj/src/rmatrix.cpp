#include "itops/rmatrix.hpp"

#include <cmath>

#include "itops/errors.hpp"

namespace itops {

namespace {

cplx coth(cplx x) { return 1.0 / std::tanh(x); }
cplx csch(cplx x) { return 1.0 / std::sinh(x); }

}  // namespace

RMatrixFamily RMatrixFamily::yang(int n) {
  if (n < 1) throw ConfigError("Yang R-matrix needs N >= 1");
  RMatrixFamily f;
  f.kind_ = FamilyKind::YangXXX;
  f.n_ = n;
  return f;
}

RMatrixFamily RMatrixFamily::eleven_vertex() {
  RMatrixFamily f;
  f.kind_ = FamilyKind::ElevenVertex;
  f.n_ = 2;
  return f;
}

RMatrixFamily RMatrixFamily::six_vertex() {
  RMatrixFamily f;
  f.kind_ = FamilyKind::SixVertexXXZ;
  f.n_ = 2;
  f.flavor_ = Flavor::trigonometric();
  return f;
}

RMatrixFamily RMatrixFamily::seven_vertex(cplx c) {
  RMatrixFamily f = six_vertex();
  f.kind_ = FamilyKind::SevenVertex;
  f.c_ = c;
  return f;
}

RMatrixFamily RMatrixFamily::baxter_belavin(int n, cplx tau) {
  if (n < 1) throw ConfigError("Baxter-Belavin R-matrix needs N >= 1");
  RMatrixFamily f;
  f.kind_ = FamilyKind::BaxterBelavin;
  f.n_ = n;
  f.flavor_ = Flavor::elliptic(tau);
  for (int a1 = 0; a1 < n; ++a1)
    for (int a2 = 0; a2 < n; ++a2) {
      SectorIndex a{a1, a2, n};
      f.sectors_.push_back(a);
      f.tt_.push_back(kron2(sin_basis_T(a), sin_basis_T(a.negated())));
    }
  return f;
}

std::string RMatrixFamily::name() const {
  switch (kind_) {
    case FamilyKind::YangXXX: return "xxx";
    case FamilyKind::ElevenVertex: return "11v";
    case FamilyKind::SixVertexXXZ: return "xxz";
    case FamilyKind::SevenVertex: return "7v";
    case FamilyKind::BaxterBelavin: return "bb";
  }
  return "?";
}

TwoSiteOperator RMatrixFamily::from4(const cplx (&e)[4][4]) const {
  TwoSiteOperator t = TwoSiteOperator::zero(2);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) t.mat()(i, j) = e[i][j];
  return t;
}

TwoSiteOperator RMatrixFamily::R(cplx hb, cplx z) const {
  guard(hb, "R(hbar)");
  guard(z, "R(z)");
  switch (kind_) {
    case FamilyKind::YangXXX:
      return (1.0 / hb) * TwoSiteOperator::identity(n_) + (1.0 / z) * permutation_P(n_);
    case FamilyKind::ElevenVertex: {
      cplx d = 1.0 / hb + 1.0 / z, s = hb + z;
      cplx c41 = -hb * hb * hb - 2.0 * z * hb * hb - 2.0 * hb * z * z - z * z * z;
      const cplx e[4][4] = {{d, 0, 0, 0}, {-s, 1.0 / hb, 1.0 / z, 0}, {-s, 1.0 / z, 1.0 / hb, 0}, {c41, s, s, d}};
      return from4(e);
    }
    case FamilyKind::SixVertexXXZ:
    case FamilyKind::SevenVertex: {
      cplx d = coth(z) + coth(hb);
      const cplx e[4][4] = {{d, 0, 0, 0}, {0, csch(hb), csch(z), 0}, {0, csch(z), csch(hb), 0}, {c_ * std::sinh(z + hb), 0, 0, d}};
      return from4(e);
    }
    case FamilyKind::BaxterBelavin: {
      TwoSiteOperator t = TwoSiteOperator::zero(n_);
      for (std::size_t i = 0; i < sectors_.size(); ++i)
        t += (sector_phi(flavor_, sectors_[i], z, hb / static_cast<double>(n_)) / static_cast<double>(n_)) * tt_[i];
      return t;
    }
  }
  return {};
}

TwoSiteOperator RMatrixFamily::R_hbar(cplx hb, cplx z) const {
  guard(hb, "R_hbar(hbar)");
  guard(z, "R_hbar(z)");
  switch (kind_) {
    case FamilyKind::YangXXX: return (-1.0 / (hb * hb)) * TwoSiteOperator::identity(n_);
    case FamilyKind::ElevenVertex: {
      cplx d = -1.0 / (hb * hb);
      cplx c41 = -3.0 * hb * hb - 4.0 * z * hb - 2.0 * z * z;
      const cplx e[4][4] = {{d, 0, 0, 0}, {-1.0, d, 0, 0}, {-1.0, 0, d, 0}, {c41, 1.0, 1.0, d}};
      return from4(e);
    }
    case FamilyKind::SixVertexXXZ:
    case FamilyKind::SevenVertex: {
      cplx s = std::sinh(hb);
      cplx d = -1.0 / (s * s), o = -std::cosh(hb) / (s * s);
      const cplx e[4][4] = {{d, 0, 0, 0}, {0, o, 0, 0}, {0, 0, o, 0}, {c_ * std::cosh(z + hb), 0, 0, d}};
      return from4(e);
    }
    case FamilyKind::BaxterBelavin: {
      const double nn = n_;
      TwoSiteOperator t = TwoSiteOperator::zero(n_);
      for (std::size_t i = 0; i < sectors_.size(); ++i)
        t += (sector_f(flavor_, sectors_[i], z, hb / nn) / (nn * nn)) * tt_[i];
      return t;
    }
  }
  return {};
}

TwoSiteOperator RMatrixFamily::r(cplx z) const {
  guard(z, "r(z)");
  switch (kind_) {
    case FamilyKind::YangXXX: return (1.0 / z) * permutation_P(n_);
    case FamilyKind::ElevenVertex: {
      cplx iz = 1.0 / z;
      const cplx e[4][4] = {{iz, 0, 0, 0}, {-z, 0, iz, 0}, {-z, iz, 0, 0}, {-z * z * z, z, z, iz}};
      return from4(e);
    }
    case FamilyKind::SixVertexXXZ:
    case FamilyKind::SevenVertex: {
      cplx d = coth(z), o = csch(z);
      const cplx e[4][4] = {{d, 0, 0, 0}, {0, 0, o, 0}, {0, o, 0, 0}, {c_ * std::sinh(z), 0, 0, d}};
      return from4(e);
    }
    case FamilyKind::BaxterBelavin: {
      const double nn = n_;
      TwoSiteOperator t = (eisenstein_E1(flavor_, z) / nn) * tt_[0];
      for (std::size_t i = 1; i < sectors_.size(); ++i)
        t += (sector_phi(flavor_, sectors_[i], z, 0.0) / nn) * tt_[i];
      return t;
    }
  }
  return {};
}

TwoSiteOperator RMatrixFamily::m(cplx z) const {
  guard(z, "m(z)");
  switch (kind_) {
    case FamilyKind::YangXXX: return TwoSiteOperator::zero(n_);
    case FamilyKind::ElevenVertex: {
      const cplx e[4][4] = {{0, 0, 0, 0}, {-1.0, 0, 0, 0}, {-1.0, 0, 0, 0}, {-2.0 * z * z, 1.0, 1.0, 0}};
      return from4(e);
    }
    case FamilyKind::SixVertexXXZ:
    case FamilyKind::SevenVertex: {
      const cplx a = 1.0 / 3.0, b = -1.0 / 6.0;
      const cplx e[4][4] = {{a, 0, 0, 0}, {0, b, 0, 0}, {0, 0, b, 0}, {c_ * std::cosh(z), 0, 0, a}};
      return from4(e);
    }
    case FamilyKind::BaxterBelavin: {
      const double n2 = static_cast<double>(n_) * n_;
      cplx e1 = eisenstein_E1(flavor_, z);
      TwoSiteOperator t = ((e1 * e1 - weierstrass_p(flavor_, z)) / (2.0 * n2)) * tt_[0];
      for (std::size_t i = 1; i < sectors_.size(); ++i)
        t += (sector_f(flavor_, sectors_[i], z, 0.0) / n2) * tt_[i];
      return t;
    }
  }
  return {};
}

TwoSiteOperator RMatrixFamily::m0() const {
  switch (kind_) {
    case FamilyKind::YangXXX: return TwoSiteOperator::zero(n_);
    case FamilyKind::ElevenVertex: {
      const cplx e[4][4] = {{0, 0, 0, 0}, {-1.0, 0, 0, 0}, {-1.0, 0, 0, 0}, {0, 1.0, 1.0, 0}};
      return from4(e);
    }
    case FamilyKind::SixVertexXXZ:
    case FamilyKind::SevenVertex: {
      const cplx a = 1.0 / 3.0, b = -1.0 / 6.0;
      const cplx e[4][4] = {{a, 0, 0, 0}, {0, b, 0, 0}, {0, 0, b, 0}, {c_, 0, 0, a}};
      return from4(e);
    }
    case FamilyKind::BaxterBelavin: {
      const double n2 = static_cast<double>(n_) * n_;
      TwoSiteOperator t = (flavor_.wp_shift() / n2) * tt_[0];
      for (std::size_t i = 1; i < sectors_.size(); ++i)
        t += (-eisenstein_E2(flavor_, sector_omega(flavor_, sectors_[i])) / n2) * tt_[i];
      return t;
    }
  }
  return {};
}

TwoSiteOperator RMatrixFamily::F(cplx z, cplx q) const {
  guard(z, "F(z)");
  guard(q, "F(q)");
  switch (kind_) {
    case FamilyKind::YangXXX: return (-1.0 / (q * q)) * permutation_P(n_);
    case FamilyKind::ElevenVertex: {
      cplx d = -1.0 / (q * q);
      cplx c41 = -2.0 * z * z - 4.0 * z * q - 3.0 * q * q;
      const cplx e[4][4] = {{d, 0, 0, 0}, {-1.0, 0, d, 0}, {-1.0, d, 0, 0}, {c41, 1.0, 1.0, d}};
      return from4(e);
    }
    case FamilyKind::SixVertexXXZ:
    case FamilyKind::SevenVertex: {
      cplx s = std::sinh(q);
      cplx d = -1.0 / (s * s), o = -std::cosh(q) / (s * s);
      const cplx e[4][4] = {{d, 0, 0, 0}, {0, 0, o, 0}, {0, o, 0, 0}, {c_ * std::cosh(q + z), 0, 0, d}};
      return from4(e);
    }
    case FamilyKind::BaxterBelavin: {
      const double nn = n_;
      TwoSiteOperator t = TwoSiteOperator::zero(n_);
      for (std::size_t i = 0; i < sectors_.size(); ++i) {
        const auto& a = sectors_[i];
        cplx ca = 2.0 * kPi * kI * (a.a2 / nn);
        cplx v = z / nn + sector_omega(flavor_, a);
        cplx g = ca + eisenstein_E1(flavor_, q + v) - eisenstein_E1(flavor_, q);
        t += (std::exp(ca * q) * kronecker_phi(flavor_, q, v) * g / nn) * tt_[i];
      }
      return t;
    }
  }
  return {};
}

TwoSiteOperator RMatrixFamily::R_qq(cplx z, cplx q) const {
  guard(z, "R_qq(z)");
  guard(q, "R_qq(q)");
  switch (kind_) {
    case FamilyKind::YangXXX: return (2.0 / (q * q * q)) * permutation_P(n_);
    case FamilyKind::ElevenVertex: {
      cplx d = 2.0 / (q * q * q);
      const cplx e[4][4] = {{d, 0, 0, 0}, {0, 0, d, 0}, {0, d, 0, 0}, {-4.0 * z - 6.0 * q, 0, 0, d}};
      return from4(e);
    }
    case FamilyKind::SixVertexXXZ:
    case FamilyKind::SevenVertex: {
      cplx s = std::sinh(q), ch = std::cosh(q);
      cplx d = 2.0 * ch / (s * s * s), o = (ch * ch + 1.0) / (s * s * s);
      const cplx e[4][4] = {{d, 0, 0, 0}, {0, 0, o, 0}, {0, o, 0, 0}, {c_ * std::sinh(q + z), 0, 0, d}};
      return from4(e);
    }
    case FamilyKind::BaxterBelavin: {
      const double nn = n_;
      TwoSiteOperator t = TwoSiteOperator::zero(n_);
      for (std::size_t i = 0; i < sectors_.size(); ++i) {
        const auto& a = sectors_[i];
        cplx ca = 2.0 * kPi * kI * (a.a2 / nn);
        cplx v = z / nn + sector_omega(flavor_, a);
        cplx g = ca + eisenstein_E1(flavor_, q + v) - eisenstein_E1(flavor_, q);
        cplx gp = -eisenstein_E2(flavor_, q + v) + eisenstein_E2(flavor_, q);
        t += (std::exp(ca * q) * kronecker_phi(flavor_, q, v) * (g * g + gp) / nn) * tt_[i];
      }
      return t;
    }
  }
  return {};
}

TwoSiteOperator RMatrixFamily::F0(cplx q) const {
  guard(q, "F0(q)");
  switch (kind_) {
    case FamilyKind::YangXXX: return (-1.0 / (q * q)) * permutation_P(n_);
    case FamilyKind::ElevenVertex: {
      cplx d = -1.0 / (q * q);
      const cplx e[4][4] = {{d, 0, 0, 0}, {-1.0, 0, d, 0}, {-1.0, d, 0, 0}, {-3.0 * q * q, 1.0, 1.0, d}};
      return from4(e);
    }
    case FamilyKind::SixVertexXXZ:
    case FamilyKind::SevenVertex: {
      cplx s = std::sinh(q);
      cplx d = -1.0 / (s * s), o = -std::cosh(q) / (s * s);
      const cplx e[4][4] = {{d, 0, 0, 0}, {0, 0, o, 0}, {0, o, 0, 0}, {c_ * std::cosh(q), 0, 0, d}};
      return from4(e);
    }
    case FamilyKind::BaxterBelavin: {
      const double nn = n_;
      TwoSiteOperator t = (-eisenstein_E2(flavor_, q) / nn) * tt_[0];
      for (std::size_t i = 1; i < sectors_.size(); ++i) {
        const auto& a = sectors_[i];
        cplx ca = 2.0 * kPi * kI * (a.a2 / nn);
        cplx w = sector_omega(flavor_, a);
        cplx g = ca + eisenstein_E1(flavor_, q + w) - eisenstein_E1(flavor_, q);
        t += (std::exp(ca * q) * kronecker_phi(flavor_, q, w) * g / nn) * tt_[i];
      }
      return t;
    }
  }
  return {};
}

TwoSiteOperator RMatrixFamily::F0_prime(cplx q) const {
  guard(q, "F0'(q)");
  switch (kind_) {
    case FamilyKind::YangXXX: return (2.0 / (q * q * q)) * permutation_P(n_);
    case FamilyKind::ElevenVertex: {
      cplx d = 2.0 / (q * q * q);
      const cplx e[4][4] = {{d, 0, 0, 0}, {0, 0, d, 0}, {0, d, 0, 0}, {-6.0 * q, 0, 0, d}};
      return from4(e);
    }
    case FamilyKind::SixVertexXXZ:
    case FamilyKind::SevenVertex: {
      cplx s = std::sinh(q), ch = std::cosh(q);
      cplx d = 2.0 * ch / (s * s * s), o = (ch * ch + 1.0) / (s * s * s);
      const cplx e[4][4] = {{d, 0, 0, 0}, {0, 0, o, 0}, {0, o, 0, 0}, {c_ * std::sinh(q), 0, 0, d}};
      return from4(e);
    }
    case FamilyKind::BaxterBelavin: {
      const double nn = n_;
      TwoSiteOperator t = (-weierstrass_p_prime(flavor_, q) / nn) * tt_[0];
      for (std::size_t i = 1; i < sectors_.size(); ++i) {
        const auto& a = sectors_[i];
        cplx ca = 2.0 * kPi * kI * (a.a2 / nn);
        cplx w = sector_omega(flavor_, a);
        cplx g = ca + eisenstein_E1(flavor_, q + w) - eisenstein_E1(flavor_, q);
        cplx gp = -eisenstein_E2(flavor_, q + w) + eisenstein_E2(flavor_, q);
        t += (std::exp(ca * q) * kronecker_phi(flavor_, q, w) * (g * g + gp) / nn) * tt_[i];
      }
      return t;
    }
  }
  return {};
}

TwoSiteOperator RMatrixFamily::R0(cplx z) const { return r(z) * permutation_P(n_); }
TwoSiteOperator RMatrixFamily::R1(cplx z) const { return m(z) * permutation_P(n_); }

TwoSiteOperator RMatrixFamily::r0() const {
  if (kind_ != FamilyKind::BaxterBelavin) return TwoSiteOperator::zero(n_);
  const double nn = n_;
  TwoSiteOperator t = TwoSiteOperator::zero(n_);
  for (std::size_t i = 1; i < sectors_.size(); ++i) {
    const auto& a = sectors_[i];
    cplx ca = 2.0 * kPi * kI * (a.a2 / nn);
    t += ((eisenstein_E1(flavor_, sector_omega(flavor_, a)) + ca) / nn) * tt_[i];
  }
  return t;
}

TwoSiteOperator RMatrixFamily::r1() const {
  switch (kind_) {
    case FamilyKind::YangXXX: return TwoSiteOperator::zero(n_);
    case FamilyKind::ElevenVertex: {
      const cplx e[4][4] = {{0, 0, 0, 0}, {-1.0, 0, 0, 0}, {-1.0, 0, 0, 0}, {0, 1.0, 1.0, 0}};
      return from4(e);
    }
    case FamilyKind::SixVertexXXZ:
    case FamilyKind::SevenVertex: {
      const cplx a = 1.0 / 3.0, b = -1.0 / 6.0;
      const cplx e[4][4] = {{a, 0, 0, 0}, {0, 0, b, 0}, {0, b, 0, 0}, {c_, 0, 0, a}};
      return from4(e);
    }
    case FamilyKind::BaxterBelavin: {
      const double nn = n_;
      TwoSiteOperator t = (flavor_.wp_shift() / nn) * tt_[0];
      for (std::size_t i = 1; i < sectors_.size(); ++i) {
        const auto& a = sectors_[i];
        cplx ca = 2.0 * kPi * kI * (a.a2 / nn);
        cplx w = sector_omega(flavor_, a);
        cplx e1 = eisenstein_E1(flavor_, w);
        cplx coef = 0.5 * ca * ca + ca * e1 + 0.5 * (e1 * e1 - weierstrass_p(flavor_, w));
        t += (coef / nn) * tt_[i];
      }
      return t;
    }
  }
  return {};
}

TwoSiteOperator laurent_coefficient(const std::function<TwoSiteOperator(cplx)>& f, int k, double radius, int points) {
  TwoSiteOperator acc;
  for (int j = 0; j < points; ++j) {
    cplx z = std::polar(radius, 2.0 * kPi * (j + 0.5) / points);
    TwoSiteOperator v = (std::pow(z, -k) / static_cast<double>(points)) * f(z);
    if (j == 0)
      acc = v;
    else
      acc += v;
  }
  return acc;
}

ComplexMatrix on3(const TwoSiteOperator& t, int a, int b) { return embed(t, 3, a - 1, b - 1); }

}  // namespace itops
