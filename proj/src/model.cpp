#include "itops/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "itops/errors.hpp"
#include "itops/random.hpp"

namespace itops {

SpinConfig::SpinConfig(int m, int n) : m_(m), n_(n), big_(static_cast<std::size_t>(m * n)) {
  if (m < 1 || n < 1) throw ConfigError("spin config needs M, N >= 1");
}

SpinConfig::SpinConfig(int m, int n, ComplexMatrix big) : m_(m), n_(n), big_(std::move(big)) {
  if (big_.dim() != static_cast<std::size_t>(m * n)) throw DimensionMismatch("spin config: big matrix must be NM x NM");
}

ComplexMatrix SpinConfig::block(int i, int j) const {
  ComplexMatrix b(n_);
  for (int a = 0; a < n_; ++a)
    for (int c = 0; c < n_; ++c) b(a, c) = big_(i * n_ + a, j * n_ + c);
  return b;
}

void SpinConfig::set_block(int i, int j, const ComplexMatrix& b) {
  for (int a = 0; a < n_; ++a)
    for (int c = 0; c < n_; ++c) big_(i * n_ + a, j * n_ + c) = b(a, c);
}

double SpinConfig::constraint_error(cplx nu) const {
  double e = 0.0;
  for (int i = 0; i < m_; ++i) e = std::max(e, std::abs(trace(block(i, i)) - nu));
  return e;
}

bool SpinConfig::on_constraints(cplx nu, double tol) const { return constraint_error(nu) <= tol; }

void SpinConfig::set_generators(std::vector<std::vector<cplx>> xi, std::vector<std::vector<cplx>> eta) {
  xi_ = std::move(xi);
  eta_ = std::move(eta);
}

SpinConfig spin_rank1(int m, int n, cplx nu, std::uint64_t seed) {
  if (nu == 0.0) throw ConfigError("rank-1 spin needs nu != 0");
  Rng rng(seed);
  std::vector<std::vector<cplx>> xi(m, std::vector<cplx>(n)), eta(m, std::vector<cplx>(n));
  for (int i = 0; i < m; ++i) {
    bool ok = false;
    for (int attempt = 0; attempt < 10 && !ok; ++attempt) {
      for (int a = 0; a < n; ++a) xi[i][a] = rng.centred(1.0);
      for (int a = 0; a < n; ++a) eta[i][a] = rng.centred(1.0);
      cplx dot = 0.0;
      for (int a = 0; a < n; ++a) dot += xi[i][a] * eta[i][a];
      if (std::abs(dot) < 1e-8) continue;
      for (int a = 0; a < n; ++a) xi[i][a] *= nu / dot;
      ok = true;
    }
    if (!ok) throw DegenerateDraw("rank-1 spin: xi.eta stayed below 1e-8 after 10 draws");
  }
  SpinConfig s(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) s.big()(i * n + a, j * n + b) = xi[i][a] * eta[j][b];
  // Exact traces: the rescaled product can be off by one ulp.
  for (int i = 0; i < m; ++i) {
    cplx t = trace(s.block(i, i));
    s.big()(i * n, i * n) += nu - t;
  }
  s.set_generators(std::move(xi), std::move(eta));
  return s;
}

SpinConfig spin_general(int m, int n, cplx nu, std::uint64_t seed) {
  Rng rng(seed);
  SpinConfig s(m, n);
  for (auto& x : s.big().data()) x = rng.in_box();
  for (int i = 0; i < m; ++i) {
    cplx shift = (nu - trace(s.block(i, i))) / static_cast<double>(n);
    for (int a = 0; a < n; ++a) s.big()(i * n + a, i * n + a) += shift;
  }
  return s;
}

double clearance(const RMatrixFamily& fam, cplx q) {
  const Flavor& fl = fam.flavor();
  double d = fl.pole_distance(q);
  if (fam.kind() == FamilyKind::BaxterBelavin) {
    const int n = fam.n();
    for (int a1 = 0; a1 < n; ++a1)
      for (int a2 = 0; a2 < n; ++a2) d = std::min(d, fl.pole_distance(q / static_cast<double>(n) + sector_omega(fl, {a1, a2, n})));
  }
  return d;
}

PhaseState random_state(std::shared_ptr<const RMatrixFamily> fam, int m, cplx nu, bool rank1, std::uint64_t seed,
                        double min_clear) {
  Rng rng(seed);
  PhaseState s;
  s.family = fam;
  for (int attempt = 0;; ++attempt) {
    if (attempt > 10000) throw Error("random_state: no pole-avoiding positions found");
    s.q.assign(m, 0.0);
    for (auto& x : s.q) x = rng.in_box();
    bool ok = true;
    for (int i = 0; i < m && ok; ++i)
      for (int j = 0; j < m && ok; ++j)
        if (i != j && clearance(*fam, s.q[i] - s.q[j]) < min_clear) ok = false;
    if (ok) break;
  }
  s.p.assign(m, 0.0);
  for (auto& x : s.p) x = rng.in_box();
  std::uint64_t sub = rng.next_u64();
  s.spin = rank1 ? spin_rank1(m, fam->n(), nu, sub) : spin_general(m, fam->n(), nu, sub);
  return s;
}

namespace {

const TwoSiteOperator& cached_P(int n) {
  thread_local std::vector<TwoSiteOperator> cache;
  while (static_cast<int>(cache.size()) < n) cache.push_back(permutation_P(static_cast<int>(cache.size()) + 1));
  return cache[n - 1];
}

ComplexMatrix block_matrix(int m, int n, const std::vector<std::vector<ComplexMatrix>>& blocks) {
  SpinConfig tmp(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) tmp.set_block(i, j, blocks[i][j]);
  return tmp.big();
}

void check_dims(const PhaseState& s) {
  if (!s.family) throw ConfigError("phase state has no family");
  if (static_cast<int>(s.q.size()) != s.M() || static_cast<int>(s.p.size()) != s.M())
    throw DimensionMismatch("phase state: q and p must have length M");
  if (s.family->n() != s.N()) throw DimensionMismatch("phase state: spin block size differs from the family's N");
}

// L built from arbitrary (p, S) at the state's positions; linear in (p, S).
ComplexMatrix build_L_with(const PhaseState& s, const std::vector<cplx>& p, const SpinConfig& spin, cplx z) {
  const auto& fam = *s.family;
  const int m = s.M(), n = s.N();
  const TwoSiteOperator& P = cached_P(n);
  std::vector<std::vector<ComplexMatrix>> bl(m, std::vector<ComplexMatrix>(m));
  TwoSiteOperator diag = fam.R0(z) * P;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j) {
        bl[i][i] = p[i] * ComplexMatrix::identity(n) + contract_2(diag, spin.block(i, i));
      } else {
        bl[i][j] = contract_2(fam.R(z, s.q[i] - s.q[j]) * P, spin.block(i, j));
      }
    }
  return block_matrix(m, n, bl);
}

}  // namespace

ComplexMatrix build_L(const PhaseState& s, cplx z) {
  check_dims(s);
  return build_L_with(s, s.p, s.spin, z);
}

ComplexMatrix build_M(const PhaseState& s, cplx z) {
  check_dims(s);
  const auto& fam = *s.family;
  const int m = s.M(), n = s.N();
  const TwoSiteOperator& P = cached_P(n);
  std::vector<std::vector<ComplexMatrix>> bl(m, std::vector<ComplexMatrix>(m));
  TwoSiteOperator diag = fam.R1(z) * P;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      bl[i][j] = i == j ? contract_2(diag, s.spin.block(i, i))
                        : contract_2(fam.F(z, s.q[i] - s.q[j]) * P, s.spin.block(i, j));
  return block_matrix(m, n, bl);
}

LaxPair lax_pair(const PhaseState& s, cplx z) { return {build_L(s, z), build_M(s, z), z}; }

cplx potential_U(const RMatrixFamily& fam, const ComplexMatrix& sij, const ComplexMatrix& sji, cplx q) {
  return contract_12(fam.F0(q).swapped() * cached_P(fam.n()), sij, sji);
}

cplx potential_V(const RMatrixFamily& fam, const ComplexMatrix& sii, const ComplexMatrix& sjj, cplx q) {
  return contract_12(fam.F0(q), sii, sjj);
}

ComplexMatrix inertia_J(const RMatrixFamily& fam, const ComplexMatrix& s) { return contract_2(fam.m0(), s); }

cplx top_H(const RMatrixFamily& fam, const ComplexMatrix& s) { return 0.5 * trace(s * inertia_J(fam, s)); }

cplx hamiltonian(const PhaseState& s) {
  check_dims(s);
  const auto& fam = *s.family;
  const int m = s.M();
  cplx h = 0.0;
  for (int i = 0; i < m; ++i) h += 0.5 * s.p[i] * s.p[i];
  TwoSiteOperator m0 = fam.m0();
  for (int i = 0; i < m; ++i) {
    ComplexMatrix sii = s.spin.block(i, i);
    h += 0.5 * contract_12(m0, sii, sii);
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) h += potential_U(fam, s.spin.block(i, j), s.spin.block(j, i), s.q[i] - s.q[j]);
  return h;
}

PhaseVelocity eom_rhs(const PhaseState& s, DiagonalForm form, double constraint_tol) {
  check_dims(s);
  const auto& fam = *s.family;
  const int m = s.M(), n = s.N();
  cplx nu = trace(s.spin.block(0, 0));
  if (!s.spin.on_constraints(nu, constraint_tol))
    throw ConstraintViolation("equations of motion need tr S^ii equal for all i (constraint surface)");
  const TwoSiteOperator& P = cached_P(n);
  const TwoSiteOperator m0 = fam.m0();

  std::vector<std::vector<ComplexMatrix>> S(m, std::vector<ComplexMatrix>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) S[i][j] = s.spin.block(i, j);
  // F0(q_ij) P and its 21 version, per ordered pair.
  std::vector<std::vector<TwoSiteOperator>> f0p(m, std::vector<TwoSiteOperator>(m));
  std::vector<std::vector<TwoSiteOperator>> f0p21(m, std::vector<TwoSiteOperator>(m));
  std::vector<std::vector<TwoSiteOperator>> f0(m, std::vector<TwoSiteOperator>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j) {
        f0[i][j] = fam.F0(s.q[i] - s.q[j]);
        f0p[i][j] = f0[i][j] * P;
        f0p21[i][j] = f0[i][j].swapped() * P;
      }
  auto G = [&](int a, int b) { return contract_2(f0p[a][b], S[a][b]); };
  std::vector<ComplexMatrix> J(m);
  for (int i = 0; i < m; ++i) J[i] = contract_2(m0, S[i][i]);

  PhaseVelocity v;
  v.dq = s.p;
  v.dp.assign(m, 0.0);
  std::vector<std::vector<ComplexMatrix>> dS(m, std::vector<ComplexMatrix>(m, ComplexMatrix(n)));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      ComplexMatrix acc(n);
      for (int k = 0; k < m; ++k) {
        if (k == i || k == j) continue;
        acc += S[i][k] * G(k, j) - G(i, k) * S[k][j];
      }
      ComplexMatrix gij = G(i, j);
      acc += S[i][i] * gij - J[i] * S[i][j] - gij * S[j][j] + S[i][j] * J[j];
      dS[i][j] = acc;
    }
  for (int i = 0; i < m; ++i) {
    ComplexMatrix acc = commutator(S[i][i], J[i]);
    for (int k = 0; k < m; ++k) {
      if (k == i) continue;
      if (form == DiagonalForm::General)
        acc += S[i][k] * contract_2(f0p21[i][k], S[k][i]) - contract_2(f0p[i][k], S[i][k]) * S[k][i];
      else
        acc += commutator(S[i][i], contract_2(f0[i][k], S[k][k]));
    }
    dS[i][i] = acc;
  }
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) {
      if (k == i) continue;
      TwoSiteOperator d32 = fam.F0_prime(s.q[i] - s.q[k]).swapped() * P;
      v.dp[i] -= contract_12(d32, S[i][k], S[k][i]);
    }
  v.dS = block_matrix(m, n, dS);
  return v;
}

PhaseVelocity hamiltonian_flow(const PhaseState& s) {
  check_dims(s);
  const auto& fam = *s.family;
  const int m = s.M(), n = s.N();
  const TwoSiteOperator& P = cached_P(n);
  const TwoSiteOperator m0 = fam.m0();
  // D(J,I) = dH/dS(I,J).
  std::vector<std::vector<ComplexMatrix>> D(m, std::vector<ComplexMatrix>(m, ComplexMatrix(n)));
  std::vector<cplx> dHdq(m, 0.0);
  for (int i = 0; i < m; ++i) {
    ComplexMatrix sii = s.spin.block(i, i);
    D[i][i] += 0.5 * (contract_2(m0, sii) + contract_1(m0, sii));
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      cplx q = s.q[i] - s.q[j];
      TwoSiteOperator k = fam.F0(q).swapped() * P;
      ComplexMatrix x = s.spin.block(i, j), y = s.spin.block(j, i);
      D[j][i] += contract_2(k, y);
      D[i][j] += contract_1(k, x);
      cplx dq = contract_12(fam.F0_prime(q).swapped() * P, x, y);
      dHdq[i] += dq;
      dHdq[j] -= dq;
    }
  ComplexMatrix Db = block_matrix(m, n, D);
  PhaseVelocity v;
  v.dq = s.p;
  v.dp.resize(m);
  for (int i = 0; i < m; ++i) v.dp[i] = -dHdq[i];
  v.dS = s.spin.big() * Db - Db * s.spin.big();
  return v;
}

namespace {

// d/dq_k L(z) contracted with velocities: sum_k v_k dL/dq_k.
ComplexMatrix L_q_derivative(const PhaseState& s, cplx z, const std::vector<cplx>& v) {
  const auto& fam = *s.family;
  const int m = s.M(), n = s.N();
  const TwoSiteOperator& P = cached_P(n);
  std::vector<std::vector<ComplexMatrix>> bl(m, std::vector<ComplexMatrix>(m, ComplexMatrix(n)));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j) bl[i][j] = (v[i] - v[j]) * contract_2(fam.F(z, s.q[i] - s.q[j]) * P, s.spin.block(i, j));
  return block_matrix(m, n, bl);
}

}  // namespace

ComplexMatrix lax_time_derivative(const PhaseState& s, cplx z) {
  PhaseVelocity v = hamiltonian_flow(s);
  SpinConfig ds(s.M(), s.N(), v.dS);
  return build_L_with(s, v.dp, ds, z) + L_q_derivative(s, z, v.dq);
}

double lax_residual(const PhaseState& s, cplx z) {
  ComplexMatrix lhs = lax_time_derivative(s, z);
  ComplexMatrix L = build_L(s, z), M = build_M(s, z);
  ComplexMatrix rhs = commutator(L, M);
  double sc = std::max(max_abs(rhs), max_abs(lhs));
  return sc == 0.0 ? max_abs(lhs - rhs) : max_abs(lhs - rhs) / sc;
}

cplx bracket_flow(const PhaseState& s, const Observable& obs) {
  switch (obs.kind) {
    case Observable::Kind::Q: return s.p.at(obs.i);
    case Observable::Kind::P: return hamiltonian_flow(s).dp.at(obs.i);
    case Observable::Kind::Spin: return hamiltonian_flow(s).dS(obs.i, obs.j);
    case Observable::Kind::Lax: return lax_time_derivative(s, obs.z)(obs.i, obs.j);
  }
  return 0.0;
}

namespace {

// Index in the four-factor space: (i', j', a, b) with primed factors outermost.
std::size_t idx4(int m, int n, int ip, int jp, int a, int b) {
  return ((static_cast<std::size_t>(ip) * m + jp) * n + a) * n + b;
}

}  // namespace

ComplexMatrix classical_r_big(const PhaseState& s, cplx z, cplx w) {
  check_dims(s);
  const auto& fam = *s.family;
  const int m = s.M(), n = s.N();
  const TwoSiteOperator& P = cached_P(n);
  ComplexMatrix out(static_cast<std::size_t>(m * m * n * n));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      TwoSiteOperator x = i == j ? fam.r(z - w) : fam.R(z - w, s.q[i] - s.q[j]) * P;
      // E_ij (x) E_ji (x) x
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c)
            for (int d = 0; d < n; ++d) out(idx4(m, n, i, j, a, b), idx4(m, n, j, i, c, d)) = x.mat()(a * n + b, c * n + d);
    }
  return out;
}

ComplexMatrix lax_bracket_big(const PhaseState& s, cplx z, cplx w) {
  check_dims(s);
  const auto& fam = *s.family;
  const int m = s.M(), n = s.N();
  const TwoSiteOperator& P = cached_P(n);
  // L^{ij}_{ac} = sum_{x,y} coef[i][j][a][c](x, y) S^{ij}_{xy}, plus p and q parts.
  struct Lin {
    std::vector<std::vector<std::vector<std::vector<ComplexMatrix>>>> coef;
    std::vector<std::vector<ComplexMatrix>> dq;  // d L^{ij} / d q_i
  };
  auto linear = [&](cplx zz) {
    Lin l;
    l.coef.assign(m, std::vector<std::vector<std::vector<ComplexMatrix>>>(
                         m, std::vector<std::vector<ComplexMatrix>>(n, std::vector<ComplexMatrix>(n, ComplexMatrix(n)))));
    l.dq.assign(m, std::vector<ComplexMatrix>(m, ComplexMatrix(n)));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        TwoSiteOperator x = i == j ? fam.R0(zz) * P : fam.R(zz, s.q[i] - s.q[j]) * P;
        for (int a = 0; a < n; ++a)
          for (int c = 0; c < n; ++c)
            for (int k = 0; k < n; ++k)
              for (int ll = 0; ll < n; ++ll) l.coef[i][j][a][c](ll, k) = x.coeff(a, c, k, ll);
        if (i != j) l.dq[i][j] = contract_2(fam.F(zz, s.q[i] - s.q[j]) * P, s.spin.block(i, j));
      }
    return l;
  };
  Lin lz = linear(z), lw = linear(w);
  std::vector<std::vector<ComplexMatrix>> S(m, std::vector<ComplexMatrix>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) S[i][j] = s.spin.block(i, j);
  auto pair = [](const ComplexMatrix& x, const ComplexMatrix& y) {
    cplx t = 0.0;
    for (std::size_t k = 0; k < x.data().size(); ++k) t += x.data()[k] * y.data()[k];
    return t;
  };

  ComplexMatrix out(static_cast<std::size_t>(m * m * n * n));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l)
          for (int a = 0; a < n; ++a)
            for (int c = 0; c < n; ++c)
              for (int b = 0; b < n; ++b)
                for (int d = 0; d < n; ++d) {
                  const ComplexMatrix& al = lz.coef[i][j][a][c];
                  const ComplexMatrix& be = lw.coef[k][l][b][d];
                  cplx v = 0.0;
                  // {<A,S>, <B,S>} = <BA - AB, S> on the big matrix.
                  if (l == i) v += pair(be * al, S[k][j]);
                  if (j == k) v -= pair(al * be, S[i][l]);
                  // Canonical part: {p_i, q_j} = delta_ij.
                  if (i == j && a == c && k != l) {
                    if (i == k) v += lw.dq[k][l](b, d);
                    if (i == l) v -= lw.dq[k][l](b, d);
                  }
                  if (k == l && b == d && i != j) {
                    if (k == i) v -= lz.dq[i][j](a, c);
                    if (k == j) v += lz.dq[i][j](a, c);
                  }
                  out(idx4(m, n, i, k, a, b), idx4(m, n, j, l, c, d)) = v;
                }
  return out;
}

double exchange_residual(const PhaseState& s, cplx z, cplx w, double constraint_tol) {
  check_dims(s);
  const int m = s.M(), n = s.N();
  cplx nu = trace(s.spin.block(0, 0));
  if (!s.spin.on_constraints(nu, constraint_tol))
    throw ConstraintViolation("exchange relation needs tr S^ii equal for all i (constraint surface)");
  const auto& fam = *s.family;
  const TwoSiteOperator& P = cached_P(n);
  const std::size_t dim = static_cast<std::size_t>(m * m * n * n);

  ComplexMatrix lhs = lax_bracket_big(s, z, w);
  ComplexMatrix Lz = build_L(s, z), Lw = build_L(s, w);
  ComplexMatrix L1(dim), L2(dim), Pi(dim);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int a = 0; a < n; ++a)
          for (int c = 0; c < n; ++c)
            for (int b = 0; b < n; ++b) {
              L1(idx4(m, n, i, k, a, b), idx4(m, n, j, k, c, b)) = Lz(i * n + a, j * n + c);
              L2(idx4(m, n, k, i, b, a), idx4(m, n, k, j, b, c)) = Lw(i * n + a, j * n + c);
            }
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) Pi(idx4(m, n, k, i, b, a), idx4(m, n, i, k, a, b)) = 1.0;
  ComplexMatrix r = classical_r_big(s, z, w);
  ComplexMatrix r21 = Pi * classical_r_big(s, w, z) * Pi;
  ComplexMatrix dq(dim);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      cplx wgt = trace(s.spin.block(i, i)) - trace(s.spin.block(j, j));
      TwoSiteOperator x = fam.F(z - w, s.q[i] - s.q[j]) * P;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c)
            for (int d = 0; d < n; ++d) dq(idx4(m, n, i, j, a, b), idx4(m, n, j, i, c, d)) = wgt * x.mat()(a * n + b, c * n + d);
    }
  ComplexMatrix t1 = commutator(L1, r), t2 = commutator(L2, r21);
  ComplexMatrix rhs = t1 - t2 - dq;
  double sc = std::max({max_abs(lhs), max_abs(t1), max_abs(t2)});
  return sc == 0.0 ? max_abs(lhs - rhs) : max_abs(lhs - rhs) / sc;
}

CmRmxResult cm_rmx_lax(const std::vector<cplx>& q, const std::vector<cplx>& p, cplx nu, const RMatrixFamily& fam,
                       cplx z) {
  const int m = static_cast<int>(q.size()), n = fam.n();
  if (static_cast<int>(p.size()) != m) throw DimensionMismatch("cm_rmx_lax: q and p lengths differ");
  double sites = std::pow(static_cast<double>(n), m);
  if (sites > 256.0) throw ScaleExceeded("cm_rmx_lax: N^M = " + std::to_string(static_cast<long long>(sites)) + " exceeds 256");
  const std::size_t ds = static_cast<std::size_t>(sites);
  const ComplexMatrix one = ComplexMatrix::identity(ds);
  ComplexMatrix f0sum(ds);
  std::vector<ComplexMatrix> d(m, ComplexMatrix(ds));
  for (int a = 0; a < m; ++a)
    for (int c = 0; c < m; ++c) {
      if (a == c) continue;
      ComplexMatrix f = m == 1 ? ComplexMatrix(ds) : embed(fam.F0(q[a] - q[c]), m, a, c);
      d[a] -= f;
      if (a > c) f0sum += f;
    }
  std::vector<std::vector<ComplexMatrix>> L(m, std::vector<ComplexMatrix>(m)), Mb(m, std::vector<ComplexMatrix>(m));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      if (a == b) {
        L[a][a] = p[a] * one;
        Mb[a][a] = nu * d[a];
      } else {
        L[a][b] = nu * embed(fam.R(z, q[a] - q[b]), m, a, b);
        Mb[a][b] = nu * embed(fam.F(z, q[a] - q[b]), m, a, b);
      }
    }
  auto assemble = [&](const std::vector<std::vector<ComplexMatrix>>& bl) {
    ComplexMatrix out(m * ds);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (std::size_t x = 0; x < ds; ++x)
          for (std::size_t y = 0; y < ds; ++y) out(a * ds + x, b * ds + y) = bl[a][b](x, y);
    return out;
  };
  CmRmxResult res;
  res.L = assemble(L);
  res.Mbar = assemble(Mb);
  res.F0sum = f0sum;

  // {H, L} with H = sum p^2/2 - nu^2 sum_{a<b} E2(q_ab), canonical brackets only.
  const Flavor& fl = fam.flavor();
  std::vector<cplx> pdot(m, 0.0);
  for (int a = 0; a < m; ++a)
    for (int c = 0; c < m; ++c)
      if (a != c) pdot[a] += nu * nu * weierstrass_p_prime(fl, q[a] - q[c]);
  std::vector<std::vector<ComplexMatrix>> dl(m, std::vector<ComplexMatrix>(m, ComplexMatrix(ds)));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      if (a == b)
        dl[a][a] = pdot[a] * one;
      else
        dl[a][b] = (p[a] - p[b]) * Mb[a][b];
    }
  ComplexMatrix lhs = assemble(dl);
  std::vector<std::vector<ComplexMatrix>> fb(m, std::vector<ComplexMatrix>(m, ComplexMatrix(ds)));
  for (int a = 0; a < m; ++a) fb[a][a] = nu * f0sum;
  ComplexMatrix F = assemble(fb);
  lhs += commutator(F, res.L);
  ComplexMatrix rhs = commutator(res.L, res.Mbar);
  double sc = std::max(max_abs(lhs), max_abs(rhs));
  res.residual = sc == 0.0 ? max_abs(lhs - rhs) : max_abs(lhs - rhs) / sc;
  return res;
}

}  // namespace itops
