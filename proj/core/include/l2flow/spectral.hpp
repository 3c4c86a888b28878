#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

struct fftw_plan_s;

namespace l2flow {

using Complex = std::complex<double>;

/// Real 2D discrete Fourier transform on a periodic Nx x Ny grid of size
/// Lx x Ly, with spectral differentiation helpers.
///
/// Grid data is row-major with x as the slow index: f[i * ny + j].
/// Spectra hold nx * (ny / 2 + 1) coefficients (half plane in y).
/// Plans are built with FFTW_ESTIMATE so the same plan, and therefore the
/// same rounding, is used on every run. Execution is thread-safe.
class SpectralTransform2D {
 public:
  SpectralTransform2D(int nx, int ny, double lx, double ly);
  ~SpectralTransform2D();

  SpectralTransform2D(const SpectralTransform2D&) = delete;
  SpectralTransform2D& operator=(const SpectralTransform2D&) = delete;

  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  int ny_half() const noexcept { return ny_ / 2 + 1; }
  std::size_t grid_size() const noexcept {
    return static_cast<std::size_t>(nx_) * ny_;
  }
  std::size_t spectrum_size() const noexcept {
    return static_cast<std::size_t>(nx_) * ny_half();
  }

  std::vector<Complex> forward(std::span<const double> f) const;
  /// Inverse transform including the 1/(nx*ny) normalization.
  std::vector<double> inverse(std::vector<Complex> spectrum) const;

  /// Signed integer mode numbers.
  int mode_x(int i) const noexcept { return i <= nx_ / 2 ? i : i - nx_; }
  int mode_y(int j) const noexcept { return j; }
  /// Angular wavenumbers 2*pi*k/L.
  double kx(int i) const noexcept { return kx_[i]; }
  double ky(int j) const noexcept { return ky_[j]; }
  bool nyquist_x(int i) const noexcept { return 2 * i == nx_; }
  bool nyquist_y(int j) const noexcept { return 2 * j == ny_; }

  /// Multiplies by (i kx)^ox (i ky)^oy. Odd-order derivatives drop the
  /// Nyquist mode so that real data stays real.
  std::vector<Complex> differentiate(const std::vector<Complex>& spectrum,
                                     int ox, int oy) const;
  std::vector<double> derivative(std::span<const double> f, int ox,
                                 int oy) const;
  /// -(kx^2 + ky^2), Nyquist modes kept.
  std::vector<double> laplacian(std::span<const double> f) const;

  /// 2/3-rule truncation: zero every mode with 3|k| >= n in either direction.
  void dealias(std::vector<Complex>& spectrum) const;
  bool retained_by_dealias(int i, int j) const noexcept;

  /// Largest eigenvalue of the spectral biharmonic operator, optionally
  /// restricted to the modes kept by dealias().
  double max_biharmonic_eigenvalue(bool dealiased) const noexcept;

 private:
  int nx_;
  int ny_;
  std::vector<double> kx_;
  std::vector<double> ky_;
  fftw_plan_s* r2c_ = nullptr;
  fftw_plan_s* c2r_ = nullptr;
};

}  // namespace l2flow
