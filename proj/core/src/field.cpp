#include "l2flow/field.hpp"

#include <algorithm>
#include <cmath>

#include "l2flow/error.hpp"

namespace l2flow {

ScalarField::ScalarField(BackgroundPtr background, std::vector<double> values)
    : background_(std::move(background)), values_(std::move(values)) {
  if (!background_) throw Error("field requires a background");
  if (values_.size() != background_->size()) {
    throw Error("field shape does not match background resolution");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw NonFiniteField();
  }
}

ScalarField ScalarField::constant(BackgroundPtr background, double value) {
  const std::size_t n = background->size();
  return ScalarField(std::move(background), std::vector<double>(n, value));
}

ScalarField ScalarField::sample_torus(
    BackgroundPtr background, const std::function<double(double, double)>& f) {
  if (!background->is_torus()) throw Error("sample_torus needs a torus");
  std::vector<double> v(background->size());
  const int nx = background->nx();
  const int ny = background->ny();
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      v[static_cast<std::size_t>(i) * ny + j] =
          f(background->x(i), background->y(j));
    }
  }
  return ScalarField(std::move(background), std::move(v));
}

ScalarField ScalarField::sample_sphere(BackgroundPtr background,
                                       const std::function<double(double)>& f) {
  if (!background->is_sphere()) throw Error("sample_sphere needs a sphere");
  std::vector<double> v(background->size());
  for (int j = 0; j < background->ntheta(); ++j) v[j] = f(background->theta(j));
  return ScalarField(std::move(background), std::move(v));
}

double ScalarField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double ScalarField::min() const noexcept {
  return *std::min_element(values_.begin(), values_.end());
}

double ScalarField::max() const noexcept {
  return *std::max_element(values_.begin(), values_.end());
}

ScalarField ScalarField::map(const std::function<double(double)>& f) const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), f);
  return ScalarField(background_, std::move(out));
}

ScalarField ScalarField::with_values(std::vector<double> values) const {
  return ScalarField(background_, std::move(values));
}

void require_same_grid(const ScalarField& a, const ScalarField& b) {
  if (!a.background().same_grid(b.background())) {
    throw Error("fields live on different grids");
  }
}

namespace {

template <typename Op>
ScalarField zip(const ScalarField& a, const ScalarField& b, Op op) {
  require_same_grid(a, b);
  std::vector<double> out(a.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = op(a[k], b[k]);
  return a.with_values(std::move(out));
}

}  // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  return zip(a, b, [](double x, double y) { return x + y; });
}
ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  return zip(a, b, [](double x, double y) { return x - y; });
}
ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  return zip(a, b, [](double x, double y) { return x * y; });
}
ScalarField operator*(double c, const ScalarField& a) {
  return a.map([c](double x) { return c * x; });
}
ScalarField operator+(const ScalarField& a, double c) {
  return a.map([c](double x) { return x + c; });
}
ScalarField operator-(const ScalarField& a) {
  return a.map([](double x) { return -x; });
}

double max_abs_difference(const ScalarField& a, const ScalarField& b) {
  return (a - b).max_abs();
}

double SymTensorField::max_abs() const noexcept {
  return std::max({c11.max_abs(), c12.max_abs(), c22.max_abs()});
}

SymTensorField operator+(const SymTensorField& a, const SymTensorField& b) {
  return {a.c11 + b.c11, a.c12 + b.c12, a.c22 + b.c22};
}
SymTensorField operator-(const SymTensorField& a, const SymTensorField& b) {
  return {a.c11 - b.c11, a.c12 - b.c12, a.c22 - b.c22};
}
SymTensorField operator*(double c, const SymTensorField& a) {
  return {c * a.c11, c * a.c12, c * a.c22};
}
SymTensorField operator*(const ScalarField& f, const SymTensorField& a) {
  return {f * a.c11, f * a.c12, f * a.c22};
}
double max_abs_difference(const SymTensorField& a, const SymTensorField& b) {
  return (a - b).max_abs();
}

SymTensorField isotropic(const ScalarField& f) {
  return {f, ScalarField::constant(f.background_ptr(), 0.0), f};
}

}  // namespace l2flow
