#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace l2flow {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A grid function contained NaN or infinity.
class NonFiniteField : public Error {
 public:
  NonFiniteField() : Error("non-finite field") {}
};

/// The adaptive controller could not find an acceptable step.
class StepSizeCollapse : public Error {
 public:
  StepSizeCollapse(double t, double dt)
      : Error(describe(t, dt)),
        t_(t),
        dt_(dt) {}

  double time() const noexcept { return t_; }
  double last_dt() const noexcept { return dt_; }

 private:
  static std::string describe(double t, double dt) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "step-size collapse at t=%.9g (dt=%.3g)", t, dt);
    return buf;
  }

  double t_;
  double dt_;
};

}  // namespace l2flow
