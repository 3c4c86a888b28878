#include "l2flow_cli/initial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "l2flow_cli/checkpoint.hpp"

namespace l2flow::cli {

double NormalStream::uniform_open() {
  // 53 random bits, shifted off zero.
  return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double NormalStream::operator()() {
  const double r = std::sqrt(-2.0 * std::log(uniform_open()));
  return r * std::cos(2.0 * std::numbers::pi * uniform_open());
}

BackgroundPtr make_background(const BackgroundConfig& cfg) {
  if (cfg.type == BackgroundType::Sphere) {
    return Background::sphere_axisym(cfg.ntheta);
  }
  const double two_pi = 2.0 * std::numbers::pi;
  return Background::flat_torus(cfg.lx > 0.0 ? cfg.lx : two_pi,
                                cfg.ly > 0.0 ? cfg.ly : two_pi, cfg.nx, cfg.ny);
}

double legendre_p(int l, double x) {
  if (l == 0) return 1.0;
  double p0 = 1.0;
  double p1 = x;
  for (int n = 1; n < l; ++n) {
    const double p2 = ((2.0 * n + 1.0) * x * p1 - n * p0) / (n + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

namespace {

ScalarField rescale_to_amplitude(const ScalarField& u, double amplitude) {
  const double m = u.max_abs();
  if (m == 0.0) return u;
  const double c = amplitude / m;
  return u.map([c](double x) { return c * x; });
}

ScalarField random_torus(const BackgroundPtr& bg, NormalStream& normal,
                         double amplitude, double k0) {
  const int kmax = static_cast<int>(std::ceil(4.0 * k0));
  const double kx_unit = 2.0 * std::numbers::pi / bg->lx();
  const double ky_unit = 2.0 * std::numbers::pi / bg->ly();
  std::vector<double> u(static_cast<std::size_t>(bg->nx()) * bg->ny(), 0.0);
  for (int mx = 0; mx <= kmax; ++mx) {
    for (int my = -kmax; my <= kmax; ++my) {
      if (mx == 0 && my <= 0) continue;
      const double a = normal();
      const double b = normal();
      if (3 * mx >= bg->nx() || 3 * std::abs(my) >= bg->ny()) continue;
      const double w = std::exp(-(mx * mx + my * my) / (k0 * k0));
      for (int i = 0; i < bg->nx(); ++i) {
        for (int j = 0; j < bg->ny(); ++j) {
          const double phase = mx * kx_unit * bg->x(i) + my * ky_unit * bg->y(j);
          u[static_cast<std::size_t>(i) * bg->ny() + j] +=
              w * (a * std::cos(phase) + b * std::sin(phase));
        }
      }
    }
  }
  return rescale_to_amplitude(ScalarField(bg, std::move(u)), amplitude);
}

ScalarField random_sphere(const BackgroundPtr& bg, NormalStream& normal,
                          double amplitude, double k0) {
  const int lmax = static_cast<int>(std::ceil(4.0 * k0));
  std::vector<double> coeff(static_cast<std::size_t>(lmax) + 1, 0.0);
  for (int l = 1; l <= lmax; ++l) coeff[l] = normal() * std::exp(-l * l / (k0 * k0));
  std::vector<double> u(static_cast<std::size_t>(bg->nx()), 0.0);
  for (int j = 0; j < bg->nx(); ++j) {
    const double c = std::cos(bg->theta(j));
    // Degrees l >= 1 only, so the field has zero mean.
    for (int l = 1; l <= lmax; ++l) u[j] += coeff[l] * legendre_p(l, c);
  }
  return rescale_to_amplitude(ScalarField(bg, std::move(u)), amplitude);
}

}  // namespace

ScalarField random_smooth(const BackgroundPtr& background, std::uint64_t seed,
                          double amplitude, double k0) {
  NormalStream normal(seed);
  return background->is_torus() ? random_torus(background, normal, amplitude, k0)
                                 : random_sphere(background, normal, amplitude, k0);
}

ScalarField synthesize_initial(const ExperimentConfig& cfg) {
  validate(cfg);
  const InitConfig& in = cfg.init;
  if (in.kind == InitKind::FromCheckpoint) {
    const auto path = in.checkpoint.is_absolute() ? in.checkpoint
                                                  : cfg.source_dir / in.checkpoint;
    return read_checkpoint(path).state.metric.u();
  }
  const BackgroundPtr bg = make_background(cfg.background);
  if (in.kind == InitKind::RandomSmooth) {
    return random_smooth(bg, *in.seed, in.scale * in.amplitude, in.k0);
  }
  if (in.kind == InitKind::LegendreModes) {
    const auto modes = in.legendre;
    const double scale = in.scale;
    return ScalarField::sample_sphere(bg, [&modes, scale](double theta) {
      const double c = std::cos(theta);
      double u = 0.0;
      for (const auto& m : modes) u += scale * m.amplitude * legendre_p(m.l, c);
      return u;
    });
  }
  const double kx_unit = 2.0 * std::numbers::pi / bg->lx();
  const double ky_unit = 2.0 * std::numbers::pi / bg->ly();
  for (const auto& m : in.fourier) {
    if (3 * std::abs(m.kx) >= bg->nx() || 3 * std::abs(m.ky) >= bg->ny()) {
      throw ConfigError("init.modes: mode (" + std::to_string(m.kx) + ", " +
                        std::to_string(m.ky) + ") is not resolved by the grid");
    }
  }
  const auto modes = in.fourier;
  const double scale = in.scale;
  return ScalarField::sample_torus(bg, [&](double x, double y) {
    double u = 0.0;
    for (const auto& m : modes) {
      u += scale * m.amplitude *
           std::cos(m.kx * kx_unit * x + m.ky * ky_unit * y + m.phase);
    }
    return u;
  });
}

}  // namespace l2flow::cli
