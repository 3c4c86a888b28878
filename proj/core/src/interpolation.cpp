#include "l2flow/interpolation.hpp"

#include <array>
#include <cmath>

#include "l2flow/error.hpp"

namespace l2flow {

PeriodicInterpolator::PeriodicInterpolator(const ScalarField& f,
                                           Interpolation method)
    : background_(f.background_ptr()), method_(method), values_(f.data()) {
  if (!background_->is_torus()) throw Error("interpolation requires a torus");
  if (method_ != Interpolation::Trigonometric) return;
  const auto& sp = background_->spectral();
  spectrum_ = sp.forward(values_);
  const int nyh = sp.ny_half();
  const double scale = 1.0 / static_cast<double>(sp.grid_size());
  for (int i = 0; i < sp.nx(); ++i) {
    for (int j = 0; j < nyh; ++j) {
      Complex& c = spectrum_[static_cast<std::size_t>(i) * nyh + j];
      if (sp.nyquist_x(i) || sp.nyquist_y(j)) {
        c = 0.0;
      } else {
        c *= (j == 0 ? 1.0 : 2.0) * scale;
      }
    }
  }
}

double PeriodicInterpolator::operator()(double x, double y) const {
  return method_ == Interpolation::Trigonometric ? trigonometric(x, y)
                                                  : bicubic(x, y);
}

std::vector<double> PeriodicInterpolator::evaluate(
    std::span<const double> xs, std::span<const double> ys) const {
  if (xs.size() != ys.size()) throw Error("coordinate arrays differ in size");
  std::vector<double> out(xs.size());
  for (std::size_t p = 0; p < xs.size(); ++p) out[p] = (*this)(xs[p], ys[p]);
  return out;
}

double PeriodicInterpolator::trigonometric(double x, double y) const {
  const auto& sp = background_->spectral();
  const int nx = sp.nx();
  const int nyh = sp.ny_half();
  // e^{i ky y} for the half plane, e^{i kx x} over all rows.
  thread_local std::vector<Complex> ey;
  ey.resize(nyh);
  for (int j = 0; j < nyh; ++j) ey[j] = std::polar(1.0, sp.ky(j) * y);
  double acc = 0.0;
  for (int i = 0; i < nx; ++i) {
    const Complex* row = spectrum_.data() + static_cast<std::size_t>(i) * nyh;
    Complex inner = 0.0;
    for (int j = 0; j < nyh; ++j) inner += row[j] * ey[j];
    acc += (std::polar(1.0, sp.kx(i) * x) * inner).real();
  }
  return acc;
}

double PeriodicInterpolator::bicubic(double x, double y) const {
  const Background& bg = *background_;
  const int nx = bg.nx();
  const int ny = bg.ny();
  const double gx = x / bg.hx();
  const double gy = y / bg.hy();
  const double fx = std::floor(gx);
  const double fy = std::floor(gy);
  const double tx = gx - fx;
  const double ty = gy - fy;
  auto weights = [](double t) {
    // Lagrange basis on nodes -1, 0, 1, 2.
    return std::array<double, 4>{
        -t * (t - 1.0) * (t - 2.0) / 6.0,
        (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
        -(t + 1.0) * t * (t - 2.0) / 2.0,
        (t + 1.0) * t * (t - 1.0) / 6.0,
    };
  };
  const auto wx = weights(tx);
  const auto wy = weights(ty);
  auto wrap = [](long k, int n) {
    const long m = k % n;
    return static_cast<int>(m < 0 ? m + n : m);
  };
  const long ix = static_cast<long>(fx);
  const long iy = static_cast<long>(fy);
  double acc = 0.0;
  for (int a = 0; a < 4; ++a) {
    const int i = wrap(ix + a - 1, nx);
    double row = 0.0;
    for (int b = 0; b < 4; ++b) {
      const int j = wrap(iy + b - 1, ny);
      row += wy[b] * values_[static_cast<std::size_t>(i) * ny + j];
    }
    acc += wx[a] * row;
  }
  return acc;
}

}  // namespace l2flow
