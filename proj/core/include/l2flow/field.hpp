#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "l2flow/background.hpp"

namespace l2flow {

/// Real grid function over a background. Immutable once built; every entry
/// is finite (construction throws "non-finite field" otherwise).
class ScalarField {
 public:
  ScalarField(BackgroundPtr background, std::vector<double> values);

  static ScalarField constant(BackgroundPtr background, double value);
  /// Samples f(x, y) on a torus grid.
  static ScalarField sample_torus(BackgroundPtr background,
                                  const std::function<double(double, double)>& f);
  /// Samples f(theta) on the sphere grid.
  static ScalarField sample_sphere(BackgroundPtr background,
                                   const std::function<double(double)>& f);

  const Background& background() const noexcept { return *background_; }
  const BackgroundPtr& background_ptr() const noexcept { return background_; }

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  const std::vector<double>& data() const noexcept { return values_; }
  double operator[](std::size_t k) const noexcept { return values_[k]; }

  double max_abs() const noexcept;
  double min() const noexcept;
  double max() const noexcept;

  ScalarField map(const std::function<double(double)>& f) const;
  /// Same background, new values.
  ScalarField with_values(std::vector<double> values) const;

 private:
  BackgroundPtr background_;
  std::vector<double> values_;
};

/// Throws unless both fields live on the same grid.
void require_same_grid(const ScalarField& a, const ScalarField& b);

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double c, const ScalarField& a);
ScalarField operator+(const ScalarField& a, double c);
ScalarField operator-(const ScalarField& a);

double max_abs_difference(const ScalarField& a, const ScalarField& b);

/// Symmetric 2-tensor per grid point, components in the background frame.
struct SymTensorField {
  ScalarField c11;
  ScalarField c12;
  ScalarField c22;

  const Background& background() const noexcept { return c11.background(); }
  const BackgroundPtr& background_ptr() const noexcept {
    return c11.background_ptr();
  }
  double max_abs() const noexcept;
};

SymTensorField operator+(const SymTensorField& a, const SymTensorField& b);
SymTensorField operator-(const SymTensorField& a, const SymTensorField& b);
SymTensorField operator*(double c, const SymTensorField& a);
/// Pointwise multiplication of every component by a scalar field.
SymTensorField operator*(const ScalarField& f, const SymTensorField& a);
double max_abs_difference(const SymTensorField& a, const SymTensorField& b);

/// f * identity in the background frame.
SymTensorField isotropic(const ScalarField& f);

/// Vector field (or one-form) in the background frame.
struct FrameVector {
  ScalarField c1;
  ScalarField c2;
};

}  // namespace l2flow
