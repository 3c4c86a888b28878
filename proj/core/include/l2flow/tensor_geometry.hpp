#pragma once

#include <vector>

#include "l2flow/field.hpp"

namespace l2flow {

/// How coordinate derivatives are taken in the tensor calculus.
///
/// Spectral is the default. CentralDifference is the periodic second-order
/// stencil (f[i+1] - f[i-1]) / 2h; it gives a refinement study with a known
/// order when cross-checking against the spectral conformal formulas.
enum class DerivativeScheme { Spectral, CentralDifference };

/// A general Riemannian metric on the torus chart, g_ij(x, y).
/// Construction validates pointwise positive definiteness.
class MetricField {
 public:
  explicit MetricField(SymTensorField g);

  const SymTensorField& components() const noexcept { return g_; }
  const Background& background() const noexcept { return g_.background(); }
  const BackgroundPtr& background_ptr() const noexcept {
    return g_.background_ptr();
  }
  /// sqrt(det g), the density of dV_g.
  ScalarField volume_density() const;
  double volume() const;

 private:
  SymTensorField g_;
};

struct CurvatureTensors {
  /// R_ijkl = g(R(d_i, d_j) d_k, d_l), flattened as ((i*2 + j)*2 + k)*2 + l.
  std::vector<ScalarField> riemann;
  SymTensorField ricci;
  ScalarField scalar;
  /// Check-R_ij = R_ipqr R_j^pqr.
  SymTensorField check_R;
  /// |Rm|^2 = R_ijkl R^ijkl.
  ScalarField riemann_norm_sq;

  const ScalarField& R(int i, int j, int k, int l) const {
    return riemann[((i * 2 + j) * 2 + k) * 2 + l];
  }
};

CurvatureTensors curvature_tensors(
    const MetricField& g, DerivativeScheme scheme = DerivativeScheme::Spectral);

/// Max over points and index tuples of |R_ijkl - s/2 (g_il g_jk - g_ik g_jl)|.
double curvature_identity_defect(const MetricField& g,
                                 const CurvatureTensors& curv);

/// delta d r for the Ricci tensor r viewed as a T*M-valued one-form.
///
/// (dr)_kij = nabla_k r_ij - nabla_i r_kj and delta is the formal L2 adjoint
/// of d under the full-contraction inner product on 3-tensors, which gives
/// (delta w)_ij = -2 g^kl nabla_k w_lij. This factor is what makes the general
/// gradient reduce to the conformal surface formula (see tests).
SymTensorField codifferential_exterior_ricci(
    const MetricField& g, DerivativeScheme scheme = DerivativeScheme::Spectral);

/// delta d r - Check-R + |Rm|^2 g / 4.
SymTensorField grad_F_general(
    const MetricField& g, DerivativeScheme scheme = DerivativeScheme::Spectral);

/// F = integral of s^2 dV_g.
double energy_F(const MetricField& g,
                DerivativeScheme scheme = DerivativeScheme::Spectral);

/// Integral of g^ik g^jl A_ij B_kl dV_g.
double integrate_inner(const MetricField& g, const SymTensorField& a,
                       const SymTensorField& b);

/// g^ik nabla_k A_ij.
FrameVector divergence(const MetricField& g, const SymTensorField& a,
                       DerivativeScheme scheme = DerivativeScheme::Spectral);

/// (L_X g)_ij = X^k d_k g_ij + g_kj d_i X^k + g_ik d_j X^k.
SymTensorField lie_derivative(
    const MetricField& g, const FrameVector& x,
    DerivativeScheme scheme = DerivativeScheme::Spectral);

/// Central difference (F(g + eps h) - F(g - eps h)) / (2 eps).
double directional_derivative_F(
    const MetricField& g, const SymTensorField& h, double eps,
    DerivativeScheme scheme = DerivativeScheme::Spectral);

}  // namespace l2flow
