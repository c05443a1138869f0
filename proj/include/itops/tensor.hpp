#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "itops/specfun.hpp"

namespace itops {

// Dense square complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}
  static ComplexMatrix identity(std::size_t dim);

  std::size_t dim() const { return dim_; }
  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }
  const std::vector<cplx>& data() const { return data_; }
  std::vector<cplx>& data() { return data_; }

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);

  ComplexMatrix transposed() const;
  bool is_finite() const;

 private:
  std::size_t dim_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a);
ComplexMatrix operator*(cplx s, ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
cplx trace(const ComplexMatrix& a);
double frobenius_norm(const ComplexMatrix& a);
double max_abs(const ComplexMatrix& a);
// Matrix unit e_ij of size n.
ComplexMatrix unit(std::size_t n, std::size_t i, std::size_t j);
ComplexMatrix power(const ComplexMatrix& a, int k);

// Element of Mat(N) x Mat(N). e_ij (x) e_kl sits at row i*N+k, column j*N+l.
class TwoSiteOperator {
 public:
  TwoSiteOperator() = default;
  TwoSiteOperator(int n, ComplexMatrix m);
  static TwoSiteOperator zero(int n);
  static TwoSiteOperator identity(int n);

  int n() const { return n_; }
  const ComplexMatrix& mat() const { return mat_; }
  ComplexMatrix& mat() { return mat_; }

  // Coefficient of e_ij (x) e_kl.
  cplx coeff(int i, int j, int k, int l) const { return mat_(i * n_ + k, j * n_ + l); }
  cplx& coeff(int i, int j, int k, int l) { return mat_(i * n_ + k, j * n_ + l); }

  // X_21 = P X_12 P.
  TwoSiteOperator swapped() const;

  TwoSiteOperator& operator+=(const TwoSiteOperator& o);
  TwoSiteOperator& operator-=(const TwoSiteOperator& o);
  TwoSiteOperator& operator*=(cplx s);

 private:
  int n_ = 0;
  ComplexMatrix mat_;
};

TwoSiteOperator operator+(TwoSiteOperator a, const TwoSiteOperator& b);
TwoSiteOperator operator-(TwoSiteOperator a, const TwoSiteOperator& b);
TwoSiteOperator operator*(cplx s, TwoSiteOperator a);
TwoSiteOperator operator*(const TwoSiteOperator& a, const TwoSiteOperator& b);

TwoSiteOperator permutation_P(int n);
TwoSiteOperator kron2(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix partial_trace_1(const TwoSiteOperator& t);
ComplexMatrix partial_trace_2(const TwoSiteOperator& t);
// tr_2(T S_2) and tr_1(T S_1).
ComplexMatrix contract_2(const TwoSiteOperator& t, const ComplexMatrix& s);
ComplexMatrix contract_1(const TwoSiteOperator& t, const ComplexMatrix& s);
// tr_12(T X_1 Y_2).
cplx contract_12(const TwoSiteOperator& t, const ComplexMatrix& x, const ComplexMatrix& y);

// Places T on sites (a, b) of Mat(N)^{(x) n_sites}; site 0 is the outermost
// factor. a may exceed b, in which case T's first factor sits on site a.
ComplexMatrix embed(const TwoSiteOperator& t, int n_sites, int a, int b);
// Places a one-site operator on site a.
ComplexMatrix embed1(const ComplexMatrix& x, int n_sites, int a);

// Sin-algebra basis exp(pi i a1 a2/N) Q^a1 Lambda^a2 for integer (a1, a2).
ComplexMatrix sin_basis_T(const SectorIndex& a);

}  // namespace itops
