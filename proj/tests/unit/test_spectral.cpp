#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "l2flow/spectral.hpp"

namespace {

using l2flow::SpectralTransform2D;
constexpr double kPi = std::numbers::pi;

std::vector<double> sample(int nx, int ny, double lx, double ly, auto f) {
  std::vector<double> out(static_cast<std::size_t>(nx) * ny);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) out[i * ny + j] = f(i * lx / nx, j * ly / ny);
  }
  return out;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

TEST(Spectral, ForwardInverseRoundTrip) {
  SpectralTransform2D sp(16, 12, 2.0, 3.0);
  const auto f = sample(16, 12, 2.0, 3.0, [](double x, double y) {
    return std::exp(std::sin(kPi * x) * std::cos(2.0 * kPi * y / 3.0));
  });
  EXPECT_LT(max_diff(sp.inverse(sp.forward(f)), f), 1e-14);
}

TEST(Spectral, SingleModeDerivativesAreExact) {
  const double lx = 2.0 * kPi, ly = 4.0 * kPi;
  SpectralTransform2D sp(32, 32, lx, ly);
  const auto f = sample(32, 32, lx, ly, [](double x, double y) { return std::sin(3 * x + 0.5 * y); });
  const auto fx = sample(32, 32, lx, ly, [](double x, double y) { return 3 * std::cos(3 * x + 0.5 * y); });
  const auto fyy = sample(32, 32, lx, ly, [](double x, double y) { return -0.25 * std::sin(3 * x + 0.5 * y); });
  EXPECT_LT(max_diff(sp.derivative(f, 1, 0), fx), 1e-12);
  EXPECT_LT(max_diff(sp.derivative(f, 0, 2), fyy), 1e-12);
  const auto lap = sp.laplacian(f);
  for (std::size_t k = 0; k < f.size(); ++k) EXPECT_NEAR(lap[k], -9.25 * f[k], 1e-11);
}

TEST(Spectral, DealiasKeepsLowModesAndDropsHighOnes) {
  SpectralTransform2D sp(24, 24, 2.0 * kPi, 2.0 * kPi);
  const auto low = sample(24, 24, 2.0 * kPi, 2.0 * kPi, [](double x, double y) { return std::cos(7 * x - 5 * y); });
  auto spec = sp.forward(low);
  sp.dealias(spec);
  EXPECT_LT(max_diff(sp.inverse(spec), low), 1e-13);
  const auto high = sample(24, 24, 2.0 * kPi, 2.0 * kPi, [](double x, double) { return std::cos(8 * x); });
  spec = sp.forward(high);
  sp.dealias(spec);
  for (double v : sp.inverse(spec)) EXPECT_LT(std::abs(v), 1e-14);
}

TEST(Spectral, BiharmonicEigenvalueBound) {
  SpectralTransform2D sp(32, 32, 2.0 * kPi, 2.0 * kPi);
  // Largest |k|^2 is 16^2 + 16^2; after the 2/3 rule it is 10^2 + 10^2.
  EXPECT_DOUBLE_EQ(sp.max_biharmonic_eigenvalue(false), 512.0 * 512.0);
  EXPECT_DOUBLE_EQ(sp.max_biharmonic_eigenvalue(true), 200.0 * 200.0);
}

TEST(Spectral, OddDerivativeOfNyquistModeIsDropped) {
  SpectralTransform2D sp(8, 8, 2.0 * kPi, 2.0 * kPi);
  const auto f = sample(8, 8, 2.0 * kPi, 2.0 * kPi, [](double x, double) { return std::cos(4 * x); });
  for (double v : sp.derivative(f, 1, 0)) EXPECT_EQ(v, 0.0);
}

}  // namespace
