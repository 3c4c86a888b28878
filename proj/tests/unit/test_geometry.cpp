#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "l2flow/discretization.hpp"
#include "l2flow/geometry.hpp"
#include "l2flow/tensor_geometry.hpp"

namespace {

using namespace l2flow;
constexpr double kPi = std::numbers::pi;

BackgroundPtr torus(int n) { return Background::flat_torus(2.0 * kPi, 2.0 * kPi, n, n); }

ScalarField generic_torus_u(const BackgroundPtr& bg) {
  return ScalarField::sample_torus(bg, [](double x, double y) {
    return 0.2 * std::cos(x) * std::sin(y) + 0.1 * std::sin(2 * x + y) - 0.05 * std::cos(3 * y);
  });
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

TEST(ScalarCurvature, Examples) {
  EXPECT_LT(scalar_curvature(ConformalMetric(ScalarField::constant(torus(16), 0.0))).max_abs(), 1e-15);
  const auto sph = Background::sphere_axisym(64);
  const auto s = scalar_curvature(ConformalMetric(ScalarField::constant(sph, 0.0)));
  EXPECT_LT(max_abs_difference(s, ScalarField::constant(sph, 2.0)), 1e-13);
  const auto sc = scalar_curvature(ConformalMetric(ScalarField::constant(sph, 0.3)));
  EXPECT_LT(max_abs_difference(sc, ScalarField::constant(sph, 2.0 * std::exp(-0.6))), 1e-13);
}

TEST(ScalarCurvature, MatchesCoordinateTensorOracle) {
  const auto bg = torus(64);
  const ConformalMetric g(ScalarField::sample_torus(bg, [](double x, double) { return 0.1 * std::cos(x); }));
  const MetricField m(g.tensor());
  EXPECT_LT(max_abs_difference(scalar_curvature(g), curvature_tensors(m).scalar), 1e-6);
  // The central-difference coordinate path converges to it at second order.
  double prev = 0.0;
  for (int n : {64, 128}) {
    const auto b = torus(n);
    const ConformalMetric gn(ScalarField::sample_torus(b, [](double x, double) { return 0.1 * std::cos(x); }));
    const double err = max_abs_difference(
        scalar_curvature(gn),
        curvature_tensors(MetricField(gn.tensor()), DerivativeScheme::CentralDifference).scalar);
    if (prev > 0.0) {
      EXPECT_NEAR(std::log2(prev / err), 2.0, 0.15);
    }
    prev = err;
  }
}

TEST(Energies, RoundSphere) {
  const auto e = energies(ConformalMetric(ScalarField::constant(Background::sphere_axisym(64), 0.0)));
  EXPECT_NEAR(e.F, 16.0 * kPi, 16.0 * kPi * 1e-12);
  EXPECT_NEAR(e.vol, 4.0 * kPi, 4.0 * kPi * 1e-12);
  EXPECT_NEAR(e.E, 64.0 * kPi * kPi, 64.0 * kPi * kPi * 1e-12);
  EXPECT_NEAR(e.total_curvature, 8.0 * kPi, 8.0 * kPi * 1e-12);
  EXPECT_LT(e.calabi, 1e-20);
}

TEST(Energies, FlatTorusAndSmallMode) {
  const auto flat = energies(ConformalMetric(ScalarField::constant(torus(16), 0.0)));
  EXPECT_EQ(flat.F, 0.0);
  EXPECT_EQ(flat.E, 0.0);
  EXPECT_EQ(flat.calabi, 0.0);
  EXPECT_EQ(flat.total_curvature, 0.0);
  const auto e = energies(ConformalMetric(ScalarField::sample_torus(torus(32), [](double x, double) { return 1e-2 * std::cos(x); })));
  EXPECT_LT(std::abs(e.total_curvature), 1e-8);
  EXPECT_NEAR(e.calabi, e.F, 1e-12 * e.F);
}

TEST(Energies, ReportInvariants) {
  for (const auto& u : {generic_torus_u(torus(32)),
                        ScalarField::sample_sphere(Background::sphere_axisym(128), [](double th) {
                          return 0.3 * std::cos(th) + 0.2 * std::cos(2 * th);
                        })}) {
    const auto e = energies(ConformalMetric(u));
    EXPECT_GE(e.calabi, 0.0);
    EXPECT_GE(e.F, 0.0);
    EXPECT_GT(e.vol, 0.0);
    EXPECT_GE(e.E, e.total_curvature * e.total_curvature * (1.0 - 1e-12));
    EXPECT_NEAR(e.calabi, e.F - e.total_curvature * e.total_curvature / e.vol, 1e-8 * e.F);
  }
}

TEST(Energies, GaussBonnet) {
  EXPECT_LT(std::abs(energies(ConformalMetric(generic_torus_u(torus(32)))).total_curvature), 1e-8);
  const auto sph = Background::sphere_axisym(256);
  const auto e = energies(ConformalMetric(ScalarField::sample_sphere(sph, [](double th) {
    return 0.4 * std::cos(th) - 0.3 * std::cos(th) * std::cos(th);
  })));
  EXPECT_LT(rel(e.total_curvature, 8.0 * kPi), 1e-6);
}

TEST(Energies, ScalingLaw) {
  const auto u = generic_torus_u(torus(32));
  const double c = 0.35;
  const auto e0 = energies(ConformalMetric(u));
  const auto e1 = energies(ConformalMetric(u + c));
  EXPECT_LT(rel(e1.F, std::exp(-2 * c) * e0.F), 1e-12);
  EXPECT_LT(rel(e1.vol, std::exp(2 * c) * e0.vol), 1e-12);
  EXPECT_LT(rel(e1.E, e0.E), 1e-12);
}

TEST(Energies, ScaleInvariantEnergyBound) {
  const auto sph = Background::sphere_axisym(128);
  const auto bound = 64.0 * kPi * kPi;
  const auto round = energies(ConformalMetric(ScalarField::constant(sph, 0.0)));
  EXPECT_LT(rel(round.E, bound), 1e-10);
  const auto bumpy = energies(ConformalMetric(ScalarField::sample_sphere(sph, [](double th) { return 0.1 * std::cos(th) * std::cos(th); })));
  EXPECT_GT(bumpy.E - bound, 1e-6);
}

TEST(Hessian, ConformalTorusAgainstChristoffelFormula) {
  const double a = 0.3;
  const auto bg = torus(32);
  const ConformalMetric g(ScalarField::sample_torus(bg, [a](double x, double) { return a * std::cos(x); }));
  const auto f = ScalarField::sample_torus(bg, [](double, double y) { return std::sin(y); });
  const auto h = hessian(g, f);
  EXPECT_LT(h.c11.max_abs(), 1e-12);
  EXPECT_LT(max_abs_difference(h.c12, ScalarField::sample_torus(bg, [a](double x, double y) { return a * std::sin(x) * std::cos(y); })), 1e-12);
  EXPECT_LT(max_abs_difference(h.c22, -f), 1e-12);
}

TEST(GradFSurface, FlatAndRound) {
  EXPECT_LT(grad_F_surface(ConformalMetric(ScalarField::constant(torus(16), 0.0))).max_abs(), 1e-15);
  const auto sph = Background::sphere_axisym(64);
  const ConformalMetric g(ScalarField::constant(sph, 0.0));
  const auto grad = grad_F_surface(g);
  EXPECT_LT(max_abs_difference(grad, -1.0 * g.tensor()), 1e-8);
}

TEST(GradFSurface, TraceIdentity) {
  // tr grad F = -Delta s - s^2 / 2. Spectral on the torus; on the sphere the
  // Hessian stencil and the flux-form Laplacian agree to second order.
  const auto u = generic_torus_u(torus(32));
  const ConformalMetric gt(u);
  const auto st = scalar_curvature(gt);
  const auto et = -laplacian(gt, st) + (-0.5) * (st * st);
  EXPECT_LT(max_abs_difference(trace(gt, grad_F_surface(gt)), et), 1e-10 * (1.0 + et.max_abs()));
  double prev = 0.0;
  for (int n : {64, 128, 256}) {
    const ConformalMetric g(ScalarField::sample_sphere(Background::sphere_axisym(n), [](double th) { return 0.2 * std::cos(th); }));
    const auto s = scalar_curvature(g);
    const double err = max_abs_difference(trace(g, grad_F_surface(g)), -laplacian(g, s) + (-0.5) * (s * s));
    if (prev > 0.0) {
      EXPECT_NEAR(std::log2(prev / err), 2.0, 0.1);
    }
    prev = err;
  }
}

TEST(GradFSurface, DivergenceFree) {
  const ConformalMetric gt(generic_torus_u(torus(64)));
  const auto dt = divergence(gt, grad_F_surface(gt));
  EXPECT_LT(std::max(dt.c1.max_abs(), dt.c2.max_abs()), 1e-8);
  // Sphere: second order in the area-weighted norm and away from the poles.
  // The pole cells alone converge at first order, where cot(theta) ~ 2 / h
  // multiplies the O(h^2) mismatch of the two Hessian diagonal entries.
  double prev_l2 = 0.0, prev_in = 0.0;
  for (int n : {128, 256, 512}) {
    const auto bg = Background::sphere_axisym(n);
    const ConformalMetric g(ScalarField::sample_sphere(bg, [](double th) {
      return 0.2 * std::cos(th) + 0.1 * std::cos(2 * th);
    }));
    const auto d = divergence(g, grad_F_surface(g));
    EXPECT_EQ(d.c2.max_abs(), 0.0);
    const double l2 = std::sqrt(integrate(g, d.c1 * d.c1));
    double in = 0.0;
    for (int j = 0; j < n; ++j) {
      const double th = bg->theta(j);
      if (th > 0.1 * kPi && th < 0.9 * kPi) in = std::max(in, std::abs(d.c1[j]));
    }
    if (prev_l2 > 0.0) {
      EXPECT_GT(std::log2(prev_l2 / l2), 1.9);
      EXPECT_GT(std::log2(prev_in / in), 1.9);
    }
    prev_l2 = l2;
    prev_in = in;
  }
}

TEST(GradFSurface, FirstVariationCarriesFactorTwo) {
  const auto bg = torus(32);
  const auto u = generic_torus_u(bg);
  const ConformalMetric g(u);
  const auto psi = ScalarField::sample_torus(bg, [](double x, double y) { return std::sin(x + y) + 0.5 * std::cos(2 * x); });
  const double eps = 1e-5;
  // u -> u + eps * psi / 2 moves g by eps * psi * g.
  const double fd = (energies(ConformalMetric(u + (0.5 * eps) * psi)).F -
                     energies(ConformalMetric(u + (-0.5 * eps) * psi)).F) /
                    (2.0 * eps);
  const double predicted = 2.0 * integrate_inner(g, grad_F_surface(g), psi * g.tensor());
  EXPECT_LT(rel(fd, predicted), 1e-7);
  // Homothety: d/dlambda F(lambda g) = -F, and the trace integral is -F/2.
  const double tr = integrate(g, trace(g, grad_F_surface(g)));
  EXPECT_LT(rel(tr, -0.5 * energies(g).F), 1e-10);
}

TEST(ConformalRhsTrace, Examples) {
  EXPECT_LT(conformal_rhs_trace(ConformalMetric(ScalarField::constant(torus(16), 0.0))).max_abs(), 1e-15);
  const auto sph = Background::sphere_axisym(64);
  const auto a = conformal_rhs_trace(ConformalMetric(ScalarField::constant(sph, 0.0)));
  EXPECT_LT(max_abs_difference(a, ScalarField::constant(sph, 1.0)), 1e-12);
}

TEST(ConformalRhsTrace, LinearizationAtSmallAmplitude) {
  const double eps = 1e-6;
  const auto bg = torus(32);
  const auto u = ScalarField::sample_torus(bg, [eps](double x, double) { return eps * std::cos(x); });
  const auto linear = -2.0 * laplacian0(laplacian0(u));
  EXPECT_LT(max_abs_difference(conformal_rhs_trace(ConformalMetric(u)), linear), 1e-4 * eps);
}

TEST(Dissipation, Examples) {
  EXPECT_EQ(dissipation(ConformalMetric(ScalarField::constant(torus(16), 0.0))), 0.0);
  const ConformalMetric round(ScalarField::constant(Background::sphere_axisym(64), 0.0));
  EXPECT_NEAR(dissipation(round), 8.0 * kPi, 8.0 * kPi * 1e-12);
  EXPECT_NEAR(vn_dissipation(round), 0.0, 1e-10);
  EXPECT_NEAR(vn_dissipation(ConformalMetric(ScalarField::constant(Background::sphere_axisym(64), 0.4))), 0.0, 1e-10);
  const ConformalMetric generic(generic_torus_u(torus(32)));
  EXPECT_GT(dissipation(generic), 0.0);
  EXPECT_GT(vn_dissipation(generic), 0.0);
}

TEST(Dissipation, InstantaneousEnergyIdentity) {
  // dF/dt along u_dot = a/2 equals -2 D, and along the normalized RHS -2 D_vn.
  const auto u = generic_torus_u(torus(32));
  const ConformalMetric g(u);
  const auto a = conformal_rhs_trace(g);
  // |a| ~ 80 here, so eps is kept small to bound the O(eps^2 |a|^2) truncation.
  const double eps = 1e-7;
  auto dF = [&](const ScalarField& dir) {
    return (energies(ConformalMetric(u + eps * dir)).F - energies(ConformalMetric(u + (-eps) * dir)).F) / (2 * eps);
  };
  EXPECT_LT(rel(dF(0.5 * a), -2.0 * dissipation(g)), 1e-8);
  const auto e = energies(g);
  const auto a_vn = 0.5 * a + (-0.125 * e.F / e.vol);
  EXPECT_LT(rel(dF(a_vn), -2.0 * vn_dissipation(g)), 1e-8);
}

}  // namespace
