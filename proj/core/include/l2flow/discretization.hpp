#pragma once

#include "l2flow/field.hpp"

namespace l2flow {

/// Background Laplacian Delta_0.
///
/// Torus: exact spectral Laplacian. Sphere: conservative centered scheme
/// (1/sin)(sin f')' with zero flux through the poles, which is the
/// reflection condition f'(0) = f'(pi) = 0; second order in dtheta.
ScalarField laplacian0(const ScalarField& f);

/// |grad_0 f|^2 pointwise.
ScalarField gradient0_squared(const ScalarField& f);

/// Integral of f against the background area form.
double integrate0(const ScalarField& f);

/// First and second background derivatives of one field, expressed in the
/// background orthonormal frame. On the sphere c2 of the gradient and the
/// off-diagonal Hessian entry vanish identically.
struct BackgroundDerivatives {
  FrameVector gradient;
  SymTensorField hessian;
  ScalarField laplacian;
};

BackgroundDerivatives derivatives0(const ScalarField& f);

/// Frame components of grad_0 f.
FrameVector gradient0(const ScalarField& f);

/// Solves (I + tau Delta_0^2) v = f. Spectral on the torus, banded
/// (pentadiagonal) elimination on the sphere. tau >= 0.
ScalarField solve_shifted_biharmonic(const ScalarField& f, double tau);

/// 2/3-rule low-pass on the torus; identity on the sphere.
ScalarField dealias(const ScalarField& f);

}  // namespace l2flow
