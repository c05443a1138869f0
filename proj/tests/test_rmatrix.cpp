#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "itops/errors.hpp"
#include "itops/rmatrix.hpp"
#include "support.hpp"

using namespace itops;
using testing::rel_err;
using testing::scaled_err;

namespace {

std::vector<RMatrixFamily> all_families() {
  return {RMatrixFamily::yang(1),        RMatrixFamily::yang(2),
          RMatrixFamily::yang(3),        RMatrixFamily::eleven_vertex(),
          RMatrixFamily::six_vertex(),   RMatrixFamily::seven_vertex({0.7, 0.2}),
          RMatrixFamily::baxter_belavin(2, {0.0, 1.0}), RMatrixFamily::baxter_belavin(3, {0.0, 1.0})};
}

const cplx kH{0.31, 0.12}, kZ{0.41, 0.29};

}  // namespace

TEST_CASE("Baxter-Belavin entries match mpmath references") {
  struct Ent {
    int n, i, j;
    cplx v;
  };
  // tests/oracles/specfun_oracle.py, hbar = 0.31+0.12i, z = 0.41+0.29i, tau = i.
  const Ent refs[] = {
      {2, 0, 0, {2.1718941705393808, -3.9152991988940118}}, {2, 0, 3, {0.80157177844384672, -0.58014146931568406}},
      {2, 1, 1, {3.3006601843489835, -0.91289351158863216}}, {2, 1, 2, {2.1631216805333809, -0.51425005218821872}},
      {2, 3, 0, {0.80157177844384672, -0.58014146931568406}}, {3, 0, 0, {2.1721782161584467, -3.9152456431917824}},
      {3, 0, 5, {0.31034643918992249, -0.27642376348414994}}, {3, 1, 3, {2.4168016669019837, -1.7811105893008402}},
      {3, 5, 7, {2.4168016669019837, -1.7811105893008402}},
  };
  for (const auto& e : refs) {
    CAPTURE(e.n);
    CAPTURE(e.i);
    CAPTURE(e.j);
    auto fam = RMatrixFamily::baxter_belavin(e.n, {0.0, 1.0});
    CHECK(rel_err(fam.R(kH, kZ).mat()(e.i, e.j), e.v) < 1e-12);
  }
}

TEST_CASE("closed forms at hand-evaluated points") {
  // Yang: 1/hbar + P/z.
  auto y = RMatrixFamily::yang(2);
  TwoSiteOperator R = y.R(0.5, 0.25);
  CHECK(R.coeff(0, 0, 0, 0) == cplx(6.0));
  CHECK(R.coeff(0, 1, 1, 0) == cplx(4.0));
  CHECK(R.coeff(0, 0, 1, 1) == cplx(2.0));
  // Eleven-vertex at hbar = 0.3, z = 0.5.
  auto e = RMatrixFamily::eleven_vertex().R(0.3, 0.5);
  CHECK(rel_err(e.mat()(0, 0), cplx(1.0 / 0.3 + 2.0)) < 1e-15);
  CHECK(rel_err(e.mat()(3, 0), cplx(-0.392)) < 1e-14);
  CHECK(rel_err(e.mat()(1, 0), cplx(-0.8)) < 1e-15);
  CHECK(rel_err(e.mat()(1, 2), cplx(2.0)) < 1e-15);
  CHECK(rel_err(e.mat()(3, 1), cplx(0.8)) < 1e-15);
  // Seven-vertex corner entry C sinh(z + hbar).
  cplx C{0.7, 0.2};
  auto s = RMatrixFamily::seven_vertex(C).R(0.3, 0.5);
  CHECK(rel_err(s.mat()(3, 0), C * std::sinh(0.8)) < 1e-15);
  CHECK(rel_err(s.mat()(1, 2), cplx(1.0 / std::sinh(0.5))) < 1e-15);
  CHECK(std::abs(RMatrixFamily::six_vertex().R(0.3, 0.5).mat()(3, 0)) == 0.0);
}

TEST_CASE("unitarity, Fourier symmetry and skew-symmetry at a point") {
  for (const auto& fam : all_families()) {
    CAPTURE(fam.name());
    CAPTURE(fam.n());
    const int n = fam.n();
    const Flavor& fl = fam.flavor();
    TwoSiteOperator u = fam.R(kH, kZ) * fam.R(kH, -kZ).swapped();
    cplx want = weierstrass_p(fl, kH) - weierstrass_p(fl, kZ);
    CHECK(rel_err(u.mat(), want * ComplexMatrix::identity(n * n)) < 1e-12);
    CHECK(rel_err((fam.R(kH, kZ) * permutation_P(n)).mat(), fam.R(kZ, kH).mat()) < 1e-12);
    CHECK(rel_err(fam.R(-kH, -kZ).swapped().mat(), -fam.R(kH, kZ).mat()) < 1e-12);
  }
}

TEST_CASE("laurent coefficients of r and R") {
  for (const auto& fam : all_families()) {
    CAPTURE(fam.name());
    const int n = fam.n();
    auto rr = [&](cplx z) { return fam.r(z); };
    CHECK(scaled_err(laurent_coefficient(rr, -1).mat(), permutation_P(n).mat()) < 1e-12);
    CHECK(scaled_err(laurent_coefficient(rr, 0).mat(), fam.r0().mat()) < 1e-10);
    CHECK(scaled_err(laurent_coefficient(rr, 1).mat(), (fam.m0() * permutation_P(n)).mat()) < 1e-9);
    auto Rq = [&](cplx q) { return fam.R(kZ, q); };
    CHECK(scaled_err(laurent_coefficient(Rq, 0).mat(), fam.R0(kZ).mat()) < 1e-10);
    CHECK(scaled_err(laurent_coefficient(Rq, 1).mat(), fam.R1(kZ).mat()) < 1e-9);
  }
}

TEST_CASE("derivatives against central differences") {
  const double h = 1e-5;
  for (const auto& fam : all_families()) {
    CAPTURE(fam.name());
    cplx q{0.37, -0.11};
    auto fd = [&](auto f, cplx x) { return (1.0 / (2.0 * h)) * (f(x + h).mat() - f(x - h).mat()); };
    CHECK(rel_err(fam.F(kZ, q).mat(), fd([&](cplx x) { return fam.R(kZ, x); }, q)) < 1e-8);
    CHECK(rel_err(fam.F0(q).mat(), fd([&](cplx x) { return fam.r(x); }, q)) < 1e-8);
    CHECK(rel_err(fam.F0_prime(q).mat(), fd([&](cplx x) { return fam.F0(x); }, q)) < 1e-8);
    CHECK(rel_err(fam.R_qq(kZ, q).mat(), fd([&](cplx x) { return fam.F(kZ, x); }, q)) < 1e-8);
    CHECK(rel_err(fam.R_hbar(kH, kZ).mat(), fd([&](cplx x) { return fam.R(x, kZ); }, kH)) < 1e-8);
  }
}

TEST_CASE("certification passes for every family") {
  for (const auto& fam : all_families()) {
    CAPTURE(fam.name());
    CAPTURE(fam.n());
    ResidualReport rep = certify(fam, 8, 21);
    rep.finalize(fam.kind() == FamilyKind::BaxterBelavin ? 1e-7 : 1e-8);
    for (const auto& e : rep.entries()) {
      CAPTURE(e.name);
      CHECK(e.pass);
    }
    for (const char* name : {"aybe", "skew_symmetry", "unitarity_scalar", "unitarity_value", "fourier_symmetry",
                             "classical_expansion", "trace_property", "mixed_rf", "q_product", "half_cybe",
                             "half_cybe_limit", "r1_equals_m0P"})
      CHECK(rep.find(name) != nullptr);
  }
}

TEST_CASE("trace property extras") {
  auto rep = certify(RMatrixFamily::yang(2), 2, 4);
  const Json& x = rep.find("trace_property")->extra;
  // tr_1 R^hbar(z) for Yang is N/hbar + 1/z; the measured phi~ is phi(hbar, z) with hbar -> q/N scaling.
  CHECK(x.contains("flavor_phi_q_over_N"));
  CHECK(x.contains("E1_tilde"));
}

TEST_CASE("on3 and pole guards") {
  auto fam = RMatrixFamily::yang(2);
  TwoSiteOperator P = permutation_P(2);
  CHECK(rel_err(on3(P, 1, 3), embed(P, 3, 0, 2)) < 1e-15);
  CHECK_THROWS_AS(fam.R(0.0, 0.3), PoleProximity);
  CHECK_THROWS_AS(fam.r(1e-9), PoleProximity);
  CHECK_THROWS_AS(RMatrixFamily::six_vertex().r({0.0, kPi}), PoleProximity);
  CHECK_THROWS_AS(RMatrixFamily::baxter_belavin(2, {0.0, 1.0}).r({1.0, 1.0}), PoleProximity);
  CHECK_THROWS_AS(RMatrixFamily::yang(0), ConfigError);
}
