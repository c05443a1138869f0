#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace itops {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when an argument lands within the pole guard of a function.
class PoleProximity : public Error {
 public:
  PoleProximity(const std::string& what, std::complex<double> arg, long step = -1)
      : Error(what), arg_(arg), step_(step) {}
  std::complex<double> argument() const { return arg_; }
  // Integration step at which the guard tripped, -1 outside a trajectory.
  long step() const { return step_; }

 private:
  std::complex<double> arg_;
  long step_;
};

class NonConvergent : public Error {
 public:
  using Error::Error;
};

class BadModulus : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class DegenerateDraw : public Error {
 public:
  using Error::Error;
};

class ConstraintViolation : public Error {
 public:
  using Error::Error;
};

class ConstraintDrift : public Error {
 public:
  using Error::Error;
};

class ScaleExceeded : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace itops
