#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

#include "itops/random.hpp"
#include "itops/tensor.hpp"

namespace testing {

using itops::cplx;

inline double rel_err(cplx got, cplx want) {
  double s = std::max(std::abs(want), 1e-300);
  return std::abs(got - want) / s;
}

inline double rel_err(const itops::ComplexMatrix& got, const itops::ComplexMatrix& want) {
  double s = std::max(itops::max_abs(want), 1e-300);
  return itops::max_abs(got - want) / s;
}

inline itops::ComplexMatrix random_matrix(std::size_t n, itops::Rng& rng) {
  itops::ComplexMatrix m(n);
  for (auto& x : m.data()) x = rng.centred(1.0);
  return m;
}

// Determinant by Gaussian elimination with partial pivoting.
inline cplx det(itops::ComplexMatrix a) {
  const std::size_t n = a.dim();
  cplx d = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    if (a(piv, c) == 0.0) return 0.0;
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a(c, k), a(piv, k));
      d = -d;
    }
    d *= a(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      cplx f = a(r, c) / a(c, c);
      for (std::size_t k = c; k < n; ++k) a(r, k) -= f * a(c, k);
    }
  }
  return d;
}

}  // namespace testing

namespace testing {

// Difference relative to max(|want|, 1); for expected values that may vanish.
inline double scaled_err(const itops::ComplexMatrix& got, const itops::ComplexMatrix& want) {
  return itops::max_abs(got - want) / std::max(itops::max_abs(want), 1.0);
}

}  // namespace testing
