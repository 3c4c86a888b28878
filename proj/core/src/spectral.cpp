#include "l2flow/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

#include "l2flow/error.hpp"

namespace l2flow {
namespace {

// The FFTW planner is not thread-safe; plan execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

SpectralTransform2D::SpectralTransform2D(int nx, int ny, double lx, double ly)
    : nx_(nx), ny_(ny), kx_(nx), ky_(ny / 2 + 1) {
  if (nx < 2 || ny < 2 || nx % 2 != 0 || ny % 2 != 0) {
    throw Error("spectral grid dimensions must be even and >= 2");
  }
  const double two_pi = 2.0 * std::numbers::pi;
  for (int i = 0; i < nx; ++i) kx_[i] = two_pi * mode_x(i) / lx;
  for (int j = 0; j <= ny / 2; ++j) ky_[j] = two_pi * j / ly;

  std::vector<double> in(grid_size());
  std::vector<Complex> out(spectrum_size());
  auto* cin = reinterpret_cast<fftw_complex*>(out.data());
  std::lock_guard lock(planner_mutex());
  r2c_ = fftw_plan_dft_r2c_2d(nx, ny, in.data(), cin,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
  c2r_ = fftw_plan_dft_c2r_2d(nx, ny, cin, in.data(),
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (r2c_ == nullptr || c2r_ == nullptr) throw Error("FFTW planning failed");
}

SpectralTransform2D::~SpectralTransform2D() {
  std::lock_guard lock(planner_mutex());
  if (r2c_ != nullptr) fftw_destroy_plan(r2c_);
  if (c2r_ != nullptr) fftw_destroy_plan(c2r_);
}

std::vector<Complex> SpectralTransform2D::forward(
    std::span<const double> f) const {
  if (f.size() != grid_size()) throw Error("spectral transform size mismatch");
  // r2c preserves its input, the const_cast only satisfies the C signature.
  std::vector<Complex> out(spectrum_size());
  fftw_execute_dft_r2c(r2c_, const_cast<double*>(f.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<double> SpectralTransform2D::inverse(
    std::vector<Complex> spectrum) const {
  if (spectrum.size() != spectrum_size()) {
    throw Error("spectral transform size mismatch");
  }
  std::vector<double> out(grid_size());
  fftw_execute_dft_c2r(c2r_, reinterpret_cast<fftw_complex*>(spectrum.data()),
                       out.data());
  const double scale = 1.0 / static_cast<double>(grid_size());
  for (double& v : out) v *= scale;
  return out;
}

std::vector<Complex> SpectralTransform2D::differentiate(
    const std::vector<Complex>& spectrum, int ox, int oy) const {
  std::vector<Complex> out(spectrum.size());
  const int nyh = ny_half();
  auto ipow = [](double k, int order) {
    Complex f{1.0, 0.0};
    for (int n = 0; n < order; ++n) f *= Complex{0.0, k};
    return f;
  };
  for (int i = 0; i < nx_; ++i) {
    const bool zero_x = (ox % 2 == 1) && nyquist_x(i);
    const Complex fx = ipow(kx_[i], ox);
    for (int j = 0; j < nyh; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * nyh + j;
      if (zero_x || ((oy % 2 == 1) && nyquist_y(j))) {
        out[idx] = 0.0;
      } else {
        out[idx] = spectrum[idx] * fx * ipow(ky_[j], oy);
      }
    }
  }
  return out;
}

std::vector<double> SpectralTransform2D::derivative(std::span<const double> f,
                                                    int ox, int oy) const {
  return inverse(differentiate(forward(f), ox, oy));
}

std::vector<double> SpectralTransform2D::laplacian(
    std::span<const double> f) const {
  auto spec = forward(f);
  const int nyh = ny_half();
  for (int i = 0; i < nx_; ++i) {
    for (int j = 0; j < nyh; ++j) {
      spec[static_cast<std::size_t>(i) * nyh + j] *=
          -(kx_[i] * kx_[i] + ky_[j] * ky_[j]);
    }
  }
  return inverse(std::move(spec));
}

bool SpectralTransform2D::retained_by_dealias(int i, int j) const noexcept {
  return 3 * std::abs(mode_x(i)) < nx_ && 3 * std::abs(mode_y(j)) < ny_;
}

void SpectralTransform2D::dealias(std::vector<Complex>& spectrum) const {
  const int nyh = ny_half();
  for (int i = 0; i < nx_; ++i) {
    for (int j = 0; j < nyh; ++j) {
      if (!retained_by_dealias(i, j)) {
        spectrum[static_cast<std::size_t>(i) * nyh + j] = 0.0;
      }
    }
  }
}

double SpectralTransform2D::max_biharmonic_eigenvalue(
    bool dealiased) const noexcept {
  double best = 0.0;
  for (int i = 0; i < nx_; ++i) {
    for (int j = 0; j < ny_half(); ++j) {
      if (dealiased && !retained_by_dealias(i, j)) continue;
      const double k2 = kx_[i] * kx_[i] + ky_[j] * ky_[j];
      best = std::max(best, k2 * k2);
    }
  }
  return best;
}

}  // namespace l2flow
