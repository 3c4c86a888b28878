#include "l2flow/background.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "l2flow/error.hpp"

namespace l2flow {

BackgroundPtr Background::flat_torus(double lx, double ly, int nx, int ny) {
  if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly)) {
    throw Error("torus side lengths must be positive and finite");
  }
  if (nx < 8 || ny < 8 || nx % 2 != 0 || ny % 2 != 0) {
    throw Error("torus resolution must be even and >= 8 in each direction");
  }
  std::shared_ptr<Background> bg(new Background());
  bg->kind_ = BackgroundKind::FlatTorus;
  bg->nx_ = nx;
  bg->ny_ = ny;
  bg->lx_ = lx;
  bg->ly_ = ly;
  bg->hx_ = lx / nx;
  bg->hy_ = ly / ny;
  bg->s0_ = 0.0;
  bg->chi_ = 0;
  bg->area_ = lx * ly;
  bg->weights_.assign(bg->size(), bg->hx_ * bg->hy_);
  bg->spectral_ = std::make_unique<SpectralTransform2D>(nx, ny, lx, ly);
  return bg;
}

BackgroundPtr Background::sphere_axisym(int ntheta) {
  if (ntheta < 16) throw Error("sphere resolution must be >= 16");
  std::shared_ptr<Background> bg(new Background());
  bg->kind_ = BackgroundKind::SphereAxisym;
  bg->nx_ = ntheta;
  bg->ny_ = 1;
  bg->lx_ = std::numbers::pi;
  bg->ly_ = 2.0 * std::numbers::pi;
  bg->hx_ = std::numbers::pi / ntheta;
  bg->hy_ = 0.0;
  bg->s0_ = 2.0;
  bg->chi_ = 2;
  bg->area_ = 4.0 * std::numbers::pi;

  const double h = bg->hx_;
  bg->sin_faces_.resize(ntheta + 1);
  bg->sin_faces_.front() = 0.0;
  bg->sin_faces_.back() = 0.0;
  for (int j = 1; j < ntheta; ++j) bg->sin_faces_[j] = std::sin(j * h);

  bg->sin_theta_.resize(ntheta);
  bg->cot_theta_.resize(ntheta);
  bg->zone_areas_.resize(ntheta);
  bg->weights_.resize(ntheta);
  // 2 sin(theta_j) sin(h/2) = cos(theta_j - h/2) - cos(theta_j + h/2), written
  // in product form to avoid cancellation near the poles.
  const double half = std::sin(0.5 * h);
  for (int j = 0; j < ntheta; ++j) {
    const double th = bg->theta(j);
    bg->sin_theta_[j] = std::sin(th);
    bg->cot_theta_[j] = std::cos(th) / std::sin(th);
    bg->zone_areas_[j] = 2.0 * bg->sin_theta_[j] * half;
    bg->weights_[j] = 2.0 * std::numbers::pi * bg->zone_areas_[j];
  }
  return bg;
}

double Background::min_spacing() const noexcept {
  return is_torus() ? std::min(hx_, hy_) : hx_;
}

const SpectralTransform2D& Background::spectral() const {
  if (!spectral_) throw Error("spectral transform requires a torus background");
  return *spectral_;
}

double Background::max_biharmonic_eigenvalue(bool dealiased) const {
  if (is_torus()) return spectral_->max_biharmonic_eigenvalue(dealiased);
  // Gershgorin bound for the flux-form Laplacian, squared.
  double lap = 0.0;
  for (int j = 0; j < nx_; ++j) {
    const double row =
        2.0 * (sin_faces_[j] + sin_faces_[j + 1]) / (hx_ * zone_areas_[j]);
    lap = std::max(lap, row);
  }
  return lap * lap;
}

bool Background::same_grid(const Background& other) const noexcept {
  if (this == &other) return true;
  return kind_ == other.kind_ && nx_ == other.nx_ && ny_ == other.ny_ &&
         lx_ == other.lx_ && ly_ == other.ly_;
}

std::string Background::describe() const {
  std::ostringstream os;
  if (is_torus()) {
    os << "torus " << lx_ << "x" << ly_ << " on " << nx_ << "x" << ny_;
  } else {
    os << "sphere (axisymmetric) N_theta=" << nx_;
  }
  return os.str();
}

}  // namespace l2flow
