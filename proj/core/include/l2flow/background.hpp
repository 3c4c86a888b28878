#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "l2flow/spectral.hpp"

namespace l2flow {

enum class BackgroundKind { FlatTorus, SphereAxisym };

class Background;
using BackgroundPtr = std::shared_ptr<const Background>;

/// Fixed reference surface g0 together with its grid.
///
/// FlatTorus: periodic x in [0, Lx), y in [0, Ly), grid points x_i = i Lx/Nx.
/// Fields are stored row-major, f[i * Ny + j].
///
/// SphereAxisym: unit round sphere restricted to functions of the polar angle,
/// on the staggered grid theta_j = (j + 1/2) pi / N, which never touches the
/// poles. Quadrature uses exact spherical-zone areas, so the constant field
/// integrates to 4 pi up to rounding.
///
/// Tensors on either background are expressed in the g0-orthonormal frame:
/// (d/dx, d/dy) on the torus and (d/dtheta, (1/sin theta) d/dphi) on the
/// sphere. In that frame a conformal metric e^{2u} g0 is e^{2u} times identity.
class Background {
 public:
  static BackgroundPtr flat_torus(double lx, double ly, int nx, int ny);
  static BackgroundPtr sphere_axisym(int ntheta);

  BackgroundKind kind() const noexcept { return kind_; }
  bool is_torus() const noexcept { return kind_ == BackgroundKind::FlatTorus; }
  bool is_sphere() const noexcept {
    return kind_ == BackgroundKind::SphereAxisym;
  }

  /// Grid shape; the sphere is nx = N_theta, ny = 1.
  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  int ntheta() const noexcept { return nx_; }
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(nx_) * ny_;
  }

  double lx() const noexcept { return lx_; }
  double ly() const noexcept { return ly_; }
  double hx() const noexcept { return hx_; }
  double hy() const noexcept { return hy_; }
  double dtheta() const noexcept { return hx_; }
  double min_spacing() const noexcept;

  /// Background scalar curvature and Euler characteristic.
  double s0() const noexcept { return s0_; }
  int chi() const noexcept { return chi_; }
  /// Exact background area.
  double area() const noexcept { return area_; }

  double x(int i) const noexcept { return i * hx_; }
  double y(int j) const noexcept { return j * hy_; }
  double theta(int j) const noexcept { return (j + 0.5) * hx_; }

  /// Quadrature weights: integrate0(f) = sum_k w_k f_k.
  std::span<const double> weights() const noexcept { return weights_; }

  // Sphere-only grid data.
  std::span<const double> sin_theta() const noexcept { return sin_theta_; }
  std::span<const double> cot_theta() const noexcept { return cot_theta_; }
  /// sin(theta) at the N+1 cell faces; zero at both poles.
  std::span<const double> sin_faces() const noexcept { return sin_faces_; }
  /// Zone areas divided by 2 pi: cos(theta_{j-1/2}) - cos(theta_{j+1/2}).
  std::span<const double> zone_areas() const noexcept { return zone_areas_; }

  /// Torus-only spectral machinery. Throws on the sphere.
  const SpectralTransform2D& spectral() const;

  /// Upper bound for the spectrum of the discrete background biharmonic
  /// operator (restricted to dealiased modes on the torus when asked).
  double max_biharmonic_eigenvalue(bool dealiased) const;

  bool same_grid(const Background& other) const noexcept;
  std::string describe() const;

 private:
  Background() = default;

  BackgroundKind kind_ = BackgroundKind::FlatTorus;
  int nx_ = 0;
  int ny_ = 0;
  double lx_ = 0.0;
  double ly_ = 0.0;
  double hx_ = 0.0;
  double hy_ = 0.0;
  double s0_ = 0.0;
  int chi_ = 0;
  double area_ = 0.0;
  std::vector<double> weights_;
  std::vector<double> sin_theta_;
  std::vector<double> cot_theta_;
  std::vector<double> sin_faces_;
  std::vector<double> zone_areas_;
  std::unique_ptr<SpectralTransform2D> spectral_;
};

}  // namespace l2flow
