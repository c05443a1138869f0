#include "itops/tensor.hpp"

#include <cmath>
#include <string>

#include "itops/errors.hpp"

namespace itops {

namespace {

void same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.dim() != b.dim())
    throw DimensionMismatch(std::string(op) + ": " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
}

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  same_dim(*this, o, "add");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  same_dim(*this, o, "sub");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& x : data_) x *= s;
  return *this;
}

ComplexMatrix ComplexMatrix::transposed() const {
  ComplexMatrix t(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool ComplexMatrix::is_finite() const {
  for (const auto& x : data_)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
  return true;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator-(ComplexMatrix a) { return a *= -1.0; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return matmul(a, b); }

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  same_dim(a, b, "matmul");
  const std::size_t n = a.dim();
  ComplexMatrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      cplx aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t na = a.dim(), nb = b.dim();
  ComplexMatrix c(na * nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j) {
      cplx aij = a(i, j);
      if (aij == 0.0) continue;
      for (std::size_t k = 0; k < nb; ++k)
        for (std::size_t l = 0; l < nb; ++l) c(i * nb + k, j * nb + l) = aij * b(k, l);
    }
  return c;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return matmul(a, b) - matmul(b, a); }

cplx trace(const ComplexMatrix& a) {
  cplx t = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) t += a(i, i);
  return t;
}

double frobenius_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (const auto& x : a.data()) s += std::norm(x);
  return std::sqrt(s);
}

double max_abs(const ComplexMatrix& a) {
  double m = 0.0;
  for (const auto& x : a.data()) m = std::max(m, std::abs(x));
  return m;
}

ComplexMatrix unit(std::size_t n, std::size_t i, std::size_t j) {
  ComplexMatrix m(n);
  m(i, j) = 1.0;
  return m;
}

ComplexMatrix power(const ComplexMatrix& a, int k) {
  ComplexMatrix r = ComplexMatrix::identity(a.dim());
  for (int i = 0; i < k; ++i) r = matmul(r, a);
  return r;
}

TwoSiteOperator::TwoSiteOperator(int n, ComplexMatrix m) : n_(n), mat_(std::move(m)) {
  if (n < 1 || mat_.dim() != static_cast<std::size_t>(n * n))
    throw DimensionMismatch("two-site operator needs an N^2 x N^2 matrix");
}

TwoSiteOperator TwoSiteOperator::zero(int n) { return TwoSiteOperator(n, ComplexMatrix(n * n)); }
TwoSiteOperator TwoSiteOperator::identity(int n) { return TwoSiteOperator(n, ComplexMatrix::identity(n * n)); }

TwoSiteOperator TwoSiteOperator::swapped() const {
  TwoSiteOperator r = zero(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        for (int l = 0; l < n_; ++l) r.coeff(k, l, i, j) = coeff(i, j, k, l);
  return r;
}

TwoSiteOperator& TwoSiteOperator::operator+=(const TwoSiteOperator& o) {
  if (o.n_ != n_) throw DimensionMismatch("two-site add");
  mat_ += o.mat_;
  return *this;
}

TwoSiteOperator& TwoSiteOperator::operator-=(const TwoSiteOperator& o) {
  if (o.n_ != n_) throw DimensionMismatch("two-site sub");
  mat_ -= o.mat_;
  return *this;
}

TwoSiteOperator& TwoSiteOperator::operator*=(cplx s) {
  mat_ *= s;
  return *this;
}

TwoSiteOperator operator+(TwoSiteOperator a, const TwoSiteOperator& b) { return a += b; }
TwoSiteOperator operator-(TwoSiteOperator a, const TwoSiteOperator& b) { return a -= b; }
TwoSiteOperator operator*(cplx s, TwoSiteOperator a) { return a *= s; }
TwoSiteOperator operator*(const TwoSiteOperator& a, const TwoSiteOperator& b) {
  if (a.n() != b.n()) throw DimensionMismatch("two-site product");
  return TwoSiteOperator(a.n(), matmul(a.mat(), b.mat()));
}

TwoSiteOperator permutation_P(int n) {
  TwoSiteOperator p = TwoSiteOperator::zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) p.coeff(i, j, j, i) = 1.0;
  return p;
}

TwoSiteOperator kron2(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("kron2 needs equal factors");
  return TwoSiteOperator(static_cast<int>(a.dim()), kron(a, b));
}

ComplexMatrix partial_trace_1(const TwoSiteOperator& t) {
  const int n = t.n();
  ComplexMatrix r(n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i) r(k, l) += t.coeff(i, i, k, l);
  return r;
}

ComplexMatrix partial_trace_2(const TwoSiteOperator& t) {
  const int n = t.n();
  ComplexMatrix r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) r(i, j) += t.coeff(i, j, k, k);
  return r;
}

ComplexMatrix contract_2(const TwoSiteOperator& t, const ComplexMatrix& s) {
  const int n = t.n();
  if (s.dim() != static_cast<std::size_t>(n)) throw DimensionMismatch("contract_2");
  ComplexMatrix r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cplx acc = 0.0;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) acc += t.coeff(i, j, k, l) * s(l, k);
      r(i, j) = acc;
    }
  return r;
}

ComplexMatrix contract_1(const TwoSiteOperator& t, const ComplexMatrix& s) {
  const int n = t.n();
  if (s.dim() != static_cast<std::size_t>(n)) throw DimensionMismatch("contract_1");
  ComplexMatrix r(n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      cplx acc = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) acc += t.coeff(i, j, k, l) * s(j, i);
      r(k, l) = acc;
    }
  return r;
}

cplx contract_12(const TwoSiteOperator& t, const ComplexMatrix& x, const ComplexMatrix& y) {
  const int n = t.n();
  cplx acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) acc += t.coeff(i, j, k, l) * x(j, i) * y(l, k);
  return acc;
}

ComplexMatrix embed(const TwoSiteOperator& t, int n_sites, int a, int b) {
  const int n = t.n();
  if (a == b || a < 0 || b < 0 || a >= n_sites || b >= n_sites) throw DimensionMismatch("embed: bad sites");
  const std::size_t dim = ipow(n, n_sites);
  const std::size_t sa = ipow(n, n_sites - 1 - a), sb = ipow(n, n_sites - 1 - b);
  ComplexMatrix r(dim);
  for (std::size_t row = 0; row < dim; ++row) {
    const int ia = static_cast<int>((row / sa) % n), ib = static_cast<int>((row / sb) % n);
    const std::size_t base = row - ia * sa - ib * sb;
    for (int ja = 0; ja < n; ++ja)
      for (int jb = 0; jb < n; ++jb) {
        cplx v = t.coeff(ia, ja, ib, jb);
        if (v != 0.0) r(row, base + ja * sa + jb * sb) = v;
      }
  }
  return r;
}

ComplexMatrix embed1(const ComplexMatrix& x, int n_sites, int a) {
  const int n = static_cast<int>(x.dim());
  const std::size_t dim = ipow(n, n_sites);
  const std::size_t sa = ipow(n, n_sites - 1 - a);
  ComplexMatrix r(dim);
  for (std::size_t row = 0; row < dim; ++row) {
    const int ia = static_cast<int>((row / sa) % n);
    const std::size_t base = row - ia * sa;
    for (int ja = 0; ja < n; ++ja)
      if (x(ia, ja) != 0.0) r(row, base + ja * sa) = x(ia, ja);
  }
  return r;
}

ComplexMatrix sin_basis_T(const SectorIndex& a) {
  const int n = a.N;
  ComplexMatrix t(n);
  const cplx phase = std::exp(kI * kPi * (static_cast<double>(a.a1) * a.a2 / n));
  // Q^a1 Lambda^a2: row r carries Q phase exp(2 pi i a1 (r+1)/N), column r+a2.
  for (int r = 0; r < n; ++r) {
    int c = ((r + a.a2) % n + n) % n;
    t(r, c) = phase * std::exp(2.0 * kPi * kI * (static_cast<double>(a.a1) * (r + 1) / n));
  }
  return t;
}

}  // namespace itops
