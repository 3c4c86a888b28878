#pragma once

#include "l2flow/field.hpp"

namespace l2flow {

/// The metric g = e^{2u} g0 over a fixed background.
class ConformalMetric {
 public:
  explicit ConformalMetric(ScalarField u);

  const ScalarField& u() const noexcept { return u_; }
  const Background& background() const noexcept { return u_.background(); }
  const BackgroundPtr& background_ptr() const noexcept {
    return u_.background_ptr();
  }

  /// e^{2u}, the density of dV_g against dV_0.
  const ScalarField& area_density() const noexcept { return density_; }
  double volume() const;
  /// g in the background frame (e^{2u} times identity).
  SymTensorField tensor() const { return isotropic(density_); }

 private:
  ScalarField u_;
  ScalarField density_;
};

/// All monitored energy functionals of one metric.
struct EnergyReport {
  double F = 0.0;                ///< integral of s^2 dV
  double E = 0.0;                ///< F * vol, scale invariant
  double calabi = 0.0;           ///< integral of (s - s_bar)^2 dV
  double vol = 0.0;
  double total_curvature = 0.0;  ///< integral of s dV = 4 pi chi
  double s_bar = 0.0;
  double max_abs_s = 0.0;
};

/// s = e^{-2u} (s0 - 2 Delta_0 u).
ScalarField scalar_curvature(const ConformalMetric& g);

/// Delta_g f = e^{-2u} Delta_0 f.
ScalarField laplacian(const ConformalMetric& g, const ScalarField& f);

/// Integral of f dV_g.
double integrate(const ConformalMetric& g, const ScalarField& f);

/// Covariant Hessian of f with respect to g, frame components.
SymTensorField hessian(const ConformalMetric& g, const ScalarField& f);

/// g^{ij} A_ij.
ScalarField trace(const ConformalMetric& g, const SymTensorField& a);

/// <A, B>_g = g^{ik} g^{jl} A_ij B_kl pointwise.
ScalarField inner(const ConformalMetric& g, const SymTensorField& a,
                  const SymTensorField& b);

/// Integral of <A, B>_g dV_g.
double integrate_inner(const ConformalMetric& g, const SymTensorField& a,
                       const SymTensorField& b);

/// Divergence g^{ik} nabla_k A_ij as a frame one-form.
FrameVector divergence(const ConformalMetric& g, const SymTensorField& a);

EnergyReport energies(const ConformalMetric& g);

/// The gradient tensor of F on a surface: -Delta s g + Hess s - s^2 g / 4.
///
/// This is the normalization of the flow equations; the L2 first variation of
/// F is twice this tensor, dF[h] = 2 integral <grad F, h> dV.
SymTensorField grad_F_surface(const ConformalMetric& g);

/// a = Delta_g s + s^2 / 4; the conformal flow is d/dt g = a g.
ScalarField conformal_rhs_trace(const ConformalMetric& g);

/// Integral of (Delta s + s^2/2)^2 / 2 + |Hess s - (Delta s / 2) g|^2.
/// Along the conformal flow dF/dt = -2 * dissipation.
double dissipation(const ConformalMetric& g);

/// Volume-normalized counterpart: the trace term becomes
/// (Delta s + s^2/2 - F/(2 vol))^2 / 2. Along the normalized flow
/// dF/dt = -2 * vn_dissipation.
double vn_dissipation(const ConformalMetric& g);

}  // namespace l2flow
