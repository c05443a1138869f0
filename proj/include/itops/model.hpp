#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "itops/rmatrix.hpp"
#include "itops/tensor.hpp"

namespace itops {

// The NM x NM block matrix S = sum E_ij (x) S^{ij}.
class SpinConfig {
 public:
  SpinConfig() = default;
  SpinConfig(int m, int n);
  SpinConfig(int m, int n, ComplexMatrix big);

  int M() const { return m_; }
  int N() const { return n_; }
  const ComplexMatrix& big() const { return big_; }
  ComplexMatrix& big() { return big_; }

  ComplexMatrix block(int i, int j) const;
  void set_block(int i, int j, const ComplexMatrix& b);

  bool on_constraints(cplx nu, double tol = 1e-12) const;
  // Largest |tr S^{ii} - nu|.
  double constraint_error(cplx nu) const;

  bool is_rank1() const { return xi_.has_value(); }
  const std::vector<std::vector<cplx>>& xi() const { return *xi_; }
  const std::vector<std::vector<cplx>>& eta() const { return *eta_; }
  void set_generators(std::vector<std::vector<cplx>> xi, std::vector<std::vector<cplx>> eta);

 private:
  int m_ = 0;
  int n_ = 0;
  ComplexMatrix big_;
  std::optional<std::vector<std::vector<cplx>>> xi_, eta_;
};

SpinConfig spin_rank1(int m, int n, cplx nu, std::uint64_t seed);
SpinConfig spin_general(int m, int n, cplx nu, std::uint64_t seed);

struct PhaseState {
  std::vector<cplx> q;
  std::vector<cplx> p;
  SpinConfig spin;
  std::shared_ptr<const RMatrixFamily> family;

  int M() const { return spin.M(); }
  int N() const { return spin.N(); }
};

// Smallest pole distance seen by any function of q the family evaluates.
double clearance(const RMatrixFamily& fam, cplx q);

// Random pole-avoiding positions (pairwise clearance > min_clear), momenta in
// the unit box, and a constrained spin of the requested kind.
PhaseState random_state(std::shared_ptr<const RMatrixFamily> fam, int m, cplx nu, bool rank1, std::uint64_t seed,
                        double min_clear = 0.1);

struct LaxPair {
  ComplexMatrix L;
  ComplexMatrix Mmat;
  cplx z;
};

ComplexMatrix build_L(const PhaseState& s, cplx z);
ComplexMatrix build_M(const PhaseState& s, cplx z);
LaxPair lax_pair(const PhaseState& s, cplx z);

cplx hamiltonian(const PhaseState& s);
cplx potential_U(const RMatrixFamily& fam, const ComplexMatrix& sij, const ComplexMatrix& sji, cplx q);
cplx potential_V(const RMatrixFamily& fam, const ComplexMatrix& sii, const ComplexMatrix& sjj, cplx q);
ComplexMatrix inertia_J(const RMatrixFamily& fam, const ComplexMatrix& s);
cplx top_H(const RMatrixFamily& fam, const ComplexMatrix& s);

// Time derivative of every phase coordinate.
struct PhaseVelocity {
  std::vector<cplx> dq;
  std::vector<cplx> dp;
  ComplexMatrix dS;
};

enum class DiagonalForm { General, Commutator };

// Equations of motion in their printed block form.
PhaseVelocity eom_rhs(const PhaseState& s, DiagonalForm form = DiagonalForm::General, double constraint_tol = 1e-8);

// The same flow from the Poisson brackets: analytic gradients of H contracted
// with the linear bracket on S and the canonical bracket on (p, q).
PhaseVelocity hamiltonian_flow(const PhaseState& s);

struct Observable {
  enum class Kind { P, Q, Spin, Lax } kind = Kind::Q;
  int i = 0;  // particle index, or big-matrix row
  int j = 0;  // big-matrix column
  cplx z{0.0, 0.0};
};

cplx bracket_flow(const PhaseState& s, const Observable& obs);

// {H, L(z)} from the bracket oracle.
ComplexMatrix lax_time_derivative(const PhaseState& s, cplx z);
// max |{H,L} - [L,M]| / max |[L,M]|.
double lax_residual(const PhaseState& s, cplx z);

// Operator on Mat(M) x Mat(M) x Mat(N) x Mat(N), primed factors outermost.
ComplexMatrix classical_r_big(const PhaseState& s, cplx z, cplx w);
// {L_1'1(z), L_2'2(w)} from the bracket oracle, same flattening.
ComplexMatrix lax_bracket_big(const PhaseState& s, cplx z, cplx w);
double exchange_residual(const PhaseState& s, cplx z, cplx w, double constraint_tol = 1e-8);

struct CmRmxResult {
  ComplexMatrix L;
  ComplexMatrix Mbar;
  ComplexMatrix F0sum;
  double residual = 0.0;
};

// R-matrix valued Lax pair of the spinless model on Mat(M) x Mat(N)^{(x)M}.
CmRmxResult cm_rmx_lax(const std::vector<cplx>& q, const std::vector<cplx>& p, cplx nu, const RMatrixFamily& fam,
                       cplx z);

}  // namespace itops
