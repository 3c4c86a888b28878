#pragma once

#include <span>
#include <vector>

#include "l2flow/field.hpp"

namespace l2flow {

enum class Interpolation {
  /// Evaluates the trigonometric interpolant (Nyquist modes dropped).
  Trigonometric,
  /// Periodic tensor-product 4-point Lagrange cubic, O(h^4) in value.
  Bicubic,
};

/// Evaluates a periodic torus field at arbitrary chart points.
class PeriodicInterpolator {
 public:
  PeriodicInterpolator(const ScalarField& f, Interpolation method);

  double operator()(double x, double y) const;
  std::vector<double> evaluate(std::span<const double> xs,
                               std::span<const double> ys) const;

 private:
  double trigonometric(double x, double y) const;
  double bicubic(double x, double y) const;

  BackgroundPtr background_;
  Interpolation method_;
  std::vector<double> values_;
  std::vector<Complex> spectrum_;  // scaled, with conjugate-pair weights
};

}  // namespace l2flow
