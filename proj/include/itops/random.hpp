#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace itops {

// MT19937-64 with a fixed 53-bit conversion to [0,1), so draws are identical
// across standard libraries (std::uniform_real_distribution is not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Point in the unit box centred at 0.5+0.25i.
  std::complex<double> in_box() {
    double re = uniform();
    double im = uniform(-0.25, 0.75);
    return {re, im};
  }

  // Point in the square of side 2*half centred at 0.
  std::complex<double> centred(double half) {
    double re = uniform(-half, half);
    double im = uniform(-half, half);
    return {re, im};
  }

  std::uint64_t next_u64() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace itops
