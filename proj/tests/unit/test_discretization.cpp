#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "l2flow/discretization.hpp"
#include "l2flow/error.hpp"

namespace {

using namespace l2flow;
constexpr double kPi = std::numbers::pi;

BackgroundPtr torus(int n, double l = 2.0 * kPi) { return Background::flat_torus(l, l, n, n); }

double p2(double theta) {
  const double c = std::cos(theta);
  return 0.5 * (3.0 * c * c - 1.0);
}

TEST(Background, InvariantsAndArea) {
  const auto t = Background::flat_torus(3.0, 5.0, 16, 8);
  EXPECT_EQ(t->s0(), 0.0);
  EXPECT_EQ(t->chi(), 0);
  EXPECT_NEAR(integrate0(ScalarField::constant(t, 1.0)), 15.0, 15.0 * 1e-10);
  const auto s = Background::sphere_axisym(256);
  EXPECT_EQ(s->s0(), 2.0);
  EXPECT_EQ(s->chi(), 2);
  EXPECT_NEAR(integrate0(ScalarField::constant(s, 1.0)) / (4.0 * kPi), 1.0, 1e-6);
  for (int j = 0; j < s->nx(); ++j) {
    EXPECT_GT(s->theta(j), 0.0);
    EXPECT_LT(s->theta(j), kPi);
  }
}

TEST(Background, RejectsInvalidSizes) {
  EXPECT_THROW(Background::flat_torus(1.0, 1.0, 6, 8), Error);
  EXPECT_THROW(Background::flat_torus(1.0, 1.0, 9, 8), Error);
  EXPECT_THROW(Background::sphere_axisym(15), Error);
}

TEST(ScalarFieldTest, RejectsNonFinite) {
  const auto t = torus(8);
  std::vector<double> v(64, 0.0);
  v[5] = std::nan("");
  try {
    ScalarField f(t, v);
    FAIL() << "expected an error";
  } catch (const NonFiniteField& e) {
    EXPECT_STREQ(e.what(), "non-finite field");
  }
  EXPECT_THROW(ScalarField(t, std::vector<double>(10, 0.0)), Error);
}

TEST(Laplacian0, ConstantsAreHarmonic) {
  for (const auto& bg : {torus(16), Background::sphere_axisym(64)}) {
    EXPECT_LT(laplacian0(ScalarField::constant(bg, 3.7)).max_abs(), 1e-12);
  }
}

TEST(Laplacian0, TorusEigenfunction) {
  const auto t = torus(32);
  const auto f = ScalarField::sample_torus(t, [](double x, double) { return std::cos(x); });
  EXPECT_LT(max_abs_difference(laplacian0(f), -f), 1e-12);
}

double sphere_eigen_residual(int n, int l) {
  const auto s = Background::sphere_axisym(n);
  const auto f = ScalarField::sample_sphere(s, [l](double th) {
    return l == 1 ? std::cos(th) : p2(th);
  });
  return max_abs_difference(laplacian0(f), (-l * (l + 1.0)) * f);
}

TEST(Laplacian0, SphereDegreeOneConvergesAtSecondOrder) {
  const double r1 = sphere_eigen_residual(64, 1);
  const double r2 = sphere_eigen_residual(128, 1);
  EXPECT_LT(r1, 1e-3);
  EXPECT_NEAR(std::log2(r1 / r2), 2.0, 0.2);
}

TEST(Laplacian0, SphereP2AgainstFineReference) {
  // Reference operator output on 4096 points, averaged onto the 128-point
  // grid (each coarse point sits midway between two fine points).
  const auto fine_bg = Background::sphere_axisym(4096);
  const auto fine = laplacian0(ScalarField::sample_sphere(fine_bg, p2));
  const auto coarse_bg = Background::sphere_axisym(128);
  const auto coarse = laplacian0(ScalarField::sample_sphere(coarse_bg, p2));
  double worst = 0.0;
  for (int j = 0; j < 128; ++j) {
    const double ref = 0.5 * (fine[32 * j + 15] + fine[32 * j + 16]);
    worst = std::max(worst, std::abs(coarse[j] - ref));
  }
  EXPECT_LT(worst, 2e-3);
  EXPECT_LT(sphere_eigen_residual(4096, 2), 1e-5);
  const double r1 = sphere_eigen_residual(128, 2);
  const double r2 = sphere_eigen_residual(256, 2);
  EXPECT_NEAR(std::log2(r1 / r2), 2.0, 0.2);
}

TEST(Gradient0Squared, Examples) {
  const auto t = torus(32);
  EXPECT_LT(gradient0_squared(ScalarField::constant(t, 2.0)).max_abs(), 1e-14);
  const auto f = ScalarField::sample_torus(t, [](double x, double) { return std::sin(x); });
  const auto expected = ScalarField::sample_torus(t, [](double x, double) { return std::cos(x) * std::cos(x); });
  EXPECT_LT(max_abs_difference(gradient0_squared(f), expected), 1e-12);

  double prev = 0.0;
  for (int n : {64, 128}) {
    const auto s = Background::sphere_axisym(n);
    const auto g = ScalarField::sample_sphere(s, [](double th) { return std::cos(th); });
    const auto e = ScalarField::sample_sphere(s, [](double th) { return std::sin(th) * std::sin(th); });
    const double err = max_abs_difference(gradient0_squared(g), e);
    EXPECT_LT(err, 1e-3);
    if (prev > 0.0) {
      EXPECT_NEAR(std::log2(prev / err), 2.0, 0.3);
    }
    prev = err;
  }
}

TEST(Integrate0, Examples) {
  EXPECT_NEAR(integrate0(ScalarField::constant(torus(16), 1.0)), 4.0 * kPi * kPi, 1e-10);
  const auto s = Background::sphere_axisym(128);
  EXPECT_NEAR(integrate0(ScalarField::constant(s, 1.0)), 4.0 * kPi, 4.0 * kPi * 1e-6);
  EXPECT_LT(std::abs(integrate0(ScalarField::sample_sphere(s, [](double th) { return std::cos(th); }))), 1e-10);
  // Smooth axisymmetric data converges at second order.
  const auto s2 = Background::sphere_axisym(256);
  auto cos2 = [](double th) { return std::cos(th) * std::cos(th); };
  const double e1 = std::abs(integrate0(ScalarField::sample_sphere(s, cos2)) - 4.0 * kPi / 3.0);
  const double e2 = std::abs(integrate0(ScalarField::sample_sphere(s2, cos2)) - 4.0 * kPi / 3.0);
  EXPECT_NEAR(std::log2(e1 / e2), 2.0, 0.2);
}

TEST(Integrate0, DivergenceTheorem) {
  const auto t = torus(32);
  const auto f = ScalarField::sample_torus(t, [](double x, double y) { return std::exp(std::sin(x) * std::cos(2 * y)); });
  EXPECT_LT(std::abs(integrate0(laplacian0(f))), 1e-8 * f.max_abs());
  const auto s = Background::sphere_axisym(64);
  const auto g = ScalarField::sample_sphere(s, [](double th) { return std::exp(std::cos(th)) + std::cos(3 * th); });
  EXPECT_LT(std::abs(integrate0(laplacian0(g))), 1e-8 * g.max_abs());
}

TEST(Derivatives0, SphereHessianOfCosTheta) {
  const auto s = Background::sphere_axisym(256);
  const auto f = ScalarField::sample_sphere(s, [](double th) { return std::cos(th); });
  const auto d = derivatives0(f);
  // Hess cos(theta) = -cos(theta) g0 on the unit sphere.
  EXPECT_LT(max_abs_difference(d.hessian.c11, -f), 1e-4);
  EXPECT_LT(max_abs_difference(d.hessian.c22, -f), 1e-4);
  EXPECT_EQ(d.hessian.c12.max_abs(), 0.0);
}

ScalarField apply_shifted_biharmonic(const ScalarField& v, double tau) {
  return v + tau * laplacian0(laplacian0(v));
}

TEST(ShiftedBiharmonic, InvertsOperatorOnBothBackgrounds) {
  const auto t = torus(32);
  const auto f = ScalarField::sample_torus(t, [](double x, double y) { return std::sin(2 * x) + std::cos(x + 3 * y); });
  const auto v = solve_shifted_biharmonic(f, 0.37);
  // Delta^2 reaches 100 on these modes, which sets the rounding scale.
  EXPECT_LT(max_abs_difference(apply_shifted_biharmonic(v, 0.37), f), 1e-11);

  const auto s = Background::sphere_axisym(64);
  const auto g = ScalarField::sample_sphere(s, [](double th) { return std::exp(std::cos(th)); });
  const auto w = solve_shifted_biharmonic(g, 1e-3);
  EXPECT_LT(max_abs_difference(apply_shifted_biharmonic(w, 1e-3), g), 1e-9);
}

TEST(Dealias, RemovesUpperThirdOnly) {
  const auto t = torus(24);
  const auto low = ScalarField::sample_torus(t, [](double x, double y) { return std::cos(7 * x) * std::sin(2 * y); });
  EXPECT_LT(max_abs_difference(dealias(low), low), 1e-14);
  const auto high = ScalarField::sample_torus(t, [](double, double y) { return std::sin(9 * y); });
  EXPECT_LT(dealias(high).max_abs(), 1e-14);
  const auto s = Background::sphere_axisym(32);
  const auto g = ScalarField::sample_sphere(s, [](double th) { return std::cos(th); });
  EXPECT_EQ(max_abs_difference(dealias(g), g), 0.0);
}

}  // namespace
