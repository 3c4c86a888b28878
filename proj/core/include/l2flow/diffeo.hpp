#pragma once

#include <span>
#include <vector>

#include "l2flow/geometry.hpp"
#include "l2flow/interpolation.hpp"
#include "l2flow/tensor_geometry.hpp"

namespace l2flow {

/// Orientation-preserving map of the torus chart, p -> p + d(p), with a
/// periodic displacement d. Construction checks det(D phi) > 0 everywhere.
class GridDiffeo {
 public:
  GridDiffeo(ScalarField dx, ScalarField dy);
  static GridDiffeo identity(const BackgroundPtr& torus);

  const ScalarField& dx() const noexcept { return dx_; }
  const ScalarField& dy() const noexcept { return dy_; }
  const Background& background() const noexcept { return dx_.background(); }

  /// Image coordinates (unwrapped).
  std::vector<double> image_x() const;
  std::vector<double> image_y() const;

  /// det(I + grad d), spectral derivatives.
  ScalarField jacobian_determinant() const;

 private:
  ScalarField dx_;
  ScalarField dy_;
};

/// phi_dot = c * grad_g s, with grad_g s = e^{-2u} grad_0 s. The choice
/// c = -1/2 turns the conformal flow into the full gradient flow under
/// pullback; see full_flow_residual.
inline constexpr double kGeneratorCoefficient = -0.5;

struct DiffeoOptions {
  Interpolation interpolation = Interpolation::Trigonometric;
  double coefficient = kGeneratorCoefficient;
};

/// c * e^{-2u} grad_0 s on the grid.
FrameVector generator_field(const ConformalMetric& g,
                            double coefficient = kGeneratorCoefficient);

/// One Heun step of phi_dot = X(phi) with X taken from g at both stages.
GridDiffeo advance_diffeo(const GridDiffeo& phi, const ConformalMetric& g,
                          double dt, const DiffeoOptions& opts = {});

/// Heun step with X from g_now at the predictor and g_next at the corrector.
GridDiffeo advance_diffeo(const GridDiffeo& phi, const ConformalMetric& g_now,
                          const ConformalMetric& g_next, double dt,
                          const DiffeoOptions& opts = {});

/// (phi* g)_ij = d_i phi^a d_j phi^b g_ab(phi), g_ab = e^{2u} delta_ab.
MetricField pullback_metric(const GridDiffeo& phi, const ConformalMetric& g,
                            Interpolation interpolation = Interpolation::Trigonometric);

struct Snapshot {
  double t;
  GridDiffeo phi;
  ConformalMetric g;
};

/// Max over interior snapshots of
///   |d/dt (phi* g) + grad F(phi* g)|_max / |grad F(phi* g)|_max,
/// with a central difference in time. Snapshots must be uniformly spaced.
double full_flow_residual(std::span<const Snapshot> trajectory,
                          Interpolation interpolation = Interpolation::Trigonometric,
                          DerivativeScheme scheme = DerivativeScheme::Spectral);

struct TrajectoryConfig {
  double spacing = 1e-2;  ///< time between snapshots
  double t_first = 0.0;   ///< time of the first snapshot; phi = Id at t = 0
  int snapshots = 5;
  /// Diffeo RK4 steps per snapshot interval.
  int diffeo_steps = 4;
  /// Explicit-RK4 safety factor for the conformal factor.
  double safety = 0.5;
  DiffeoOptions diffeo;
};

/// Conformal flow from u0 (explicit RK4, step below the stability limit)
/// with phi integrated alongside by RK4 from phi = Id at t = 0. Snapshots
/// are taken at t_first + k * spacing.
std::vector<Snapshot> corrected_trajectory(const ScalarField& u0,
                                           const TrajectoryConfig& cfg);

/// |Hess_g s - 1/2 L_{grad s} g|_max, the Lie-derivative form of the Hessian.
double hessian_lie_defect(const ConformalMetric& g,
                          DerivativeScheme scheme = DerivativeScheme::Spectral);

}  // namespace l2flow
