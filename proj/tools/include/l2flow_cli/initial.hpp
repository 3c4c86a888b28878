#pragma once

#include <cstdint>
#include <random>

#include "l2flow/field.hpp"
#include "l2flow_cli/config.hpp"

namespace l2flow::cli {

/// Standard normal deviates by Box-Muller on mt19937_64, so the stream is
/// identical across standard libraries for a given seed.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}
  double operator()();

 private:
  double uniform_open();  // (0, 1]
  std::mt19937_64 engine_;
};

BackgroundPtr make_background(const BackgroundConfig& cfg);

/// P_l(x) by the three-term recurrence.
double legendre_p(int l, double x);

/// Zero-mean field with Gaussian mode coefficients weighted by
/// exp(-|k|^2 / k0^2), |k| the integer mode number, rescaled so that
/// max |u| = amplitude. Torus: Fourier modes; sphere: Legendre degrees l >= 1.
/// Modes up to 4 k0 are drawn in a fixed order whatever the resolution;
/// those the grid cannot carry are dropped after drawing.
ScalarField random_smooth(const BackgroundPtr& background, std::uint64_t seed,
                          double amplitude, double k0);

/// Initial conformal factor for the experiment. For from_checkpoint the
/// background comes from the checkpoint file.
ScalarField synthesize_initial(const ExperimentConfig& cfg);

}  // namespace l2flow::cli
