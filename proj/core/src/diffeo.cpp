#include "l2flow/diffeo.hpp"

#include <algorithm>
#include <cmath>

#include "l2flow/discretization.hpp"
#include "l2flow/error.hpp"
#include "l2flow/flow.hpp"

namespace l2flow {
namespace {

struct Positions {
  std::vector<double> x;
  std::vector<double> y;
};

struct Velocity {
  std::vector<double> vx;
  std::vector<double> vy;
};

class VectorInterpolator {
 public:
  VectorInterpolator(const FrameVector& v, Interpolation method)
      : c1_(v.c1, method), c2_(v.c2, method) {}
  Velocity operator()(const Positions& p) const {
    return {c1_.evaluate(p.x, p.y), c2_.evaluate(p.x, p.y)};
  }

 private:
  PeriodicInterpolator c1_;
  PeriodicInterpolator c2_;
};

Positions positions(const GridDiffeo& phi) {
  return {phi.image_x(), phi.image_y()};
}

Positions displaced(const Positions& p, double a, const Velocity& v) {
  Positions out = p;
  for (std::size_t k = 0; k < out.x.size(); ++k) {
    out.x[k] += a * v.vx[k];
    out.y[k] += a * v.vy[k];
  }
  return out;
}

GridDiffeo from_positions(const GridDiffeo& like, const Positions& p) {
  const Background& bg = like.background();
  std::vector<double> dx(p.x.size()), dy(p.y.size());
  const int ny = bg.ny();
  for (std::size_t k = 0; k < dx.size(); ++k) {
    const int i = static_cast<int>(k) / ny;
    const int j = static_cast<int>(k) % ny;
    dx[k] = p.x[k] - bg.x(i);
    dy[k] = p.y[k] - bg.y(j);
  }
  return GridDiffeo(like.dx().with_values(std::move(dx)),
                    like.dy().with_values(std::move(dy)));
}

std::vector<double> rk4_combine(const std::vector<double>& base, double h,
                                const std::vector<double>& k1,
                                const std::vector<double>& k2,
                                const std::vector<double>& k3,
                                const std::vector<double>& k4) {
  std::vector<double> out = base;
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] += h / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
  }
  return out;
}

ScalarField rk4_conformal(const ScalarField& u, double dt) {
  auto stage = [&](const std::vector<double>& v) {
    return rhs(ConformalMetric(u.with_values(v)), false).data();
  };
  auto shifted = [&](double a, const std::vector<double>& k) {
    std::vector<double> out = u.data();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += a * k[i];
    return out;
  };
  const auto k1 = stage(u.data());
  const auto k2 = stage(shifted(0.5 * dt, k1));
  const auto k3 = stage(shifted(0.5 * dt, k2));
  const auto k4 = stage(shifted(dt, k3));
  return u.with_values(rk4_combine(u.data(), dt, k1, k2, k3, k4));
}

// Advances u over `span` with equal explicit steps below the RK4 limit.
ScalarField advance_conformal(const ScalarField& u, double span, double safety) {
  const Background& bg = u.background();
  const double kappa = std::exp(-4.0 * u.min());
  const double limit = safety * 2.0 / (kappa * bg.max_biharmonic_eigenvalue(true));
  const int n = std::max(1, static_cast<int>(std::ceil(span / limit)));
  ScalarField out = u;
  for (int k = 0; k < n; ++k) out = rk4_conformal(out, span / n);
  return out;
}

}  // namespace

GridDiffeo::GridDiffeo(ScalarField dx, ScalarField dy)
    : dx_(std::move(dx)), dy_(std::move(dy)) {
  if (!dx_.background().is_torus()) throw Error("diffeomorphisms require a torus");
  require_same_grid(dx_, dy_);
  if (jacobian_determinant().min() <= 0.0) {
    throw Error("diffeomorphism degenerated");
  }
}

GridDiffeo GridDiffeo::identity(const BackgroundPtr& torus) {
  return GridDiffeo(ScalarField::constant(torus, 0.0),
                    ScalarField::constant(torus, 0.0));
}

std::vector<double> GridDiffeo::image_x() const {
  const Background& bg = background();
  std::vector<double> out(dx_.data());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] += bg.x(static_cast<int>(k) / bg.ny());
  }
  return out;
}

std::vector<double> GridDiffeo::image_y() const {
  const Background& bg = background();
  std::vector<double> out(dy_.data());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] += bg.y(static_cast<int>(k) % bg.ny());
  }
  return out;
}

ScalarField GridDiffeo::jacobian_determinant() const {
  const auto gx = gradient0(dx_);
  const auto gy = gradient0(dy_);
  std::vector<double> det(dx_.size());
  for (std::size_t k = 0; k < det.size(); ++k) {
    det[k] = (1.0 + gx.c1[k]) * (1.0 + gy.c2[k]) - gx.c2[k] * gy.c1[k];
  }
  return dx_.with_values(std::move(det));
}

FrameVector generator_field(const ConformalMetric& g, double coefficient) {
  if (!g.background().is_torus()) throw Error("diffeomorphisms require a torus");
  const ScalarField s = scalar_curvature(g);
  const FrameVector ds = gradient0(s);
  const ScalarField scale = g.u().map(
      [coefficient](double u) { return coefficient * std::exp(-2.0 * u); });
  return {scale * ds.c1, scale * ds.c2};
}

GridDiffeo advance_diffeo(const GridDiffeo& phi, const ConformalMetric& g,
                          double dt, const DiffeoOptions& opts) {
  return advance_diffeo(phi, g, g, dt, opts);
}

GridDiffeo advance_diffeo(const GridDiffeo& phi, const ConformalMetric& g_now,
                          const ConformalMetric& g_next, double dt,
                          const DiffeoOptions& opts) {
  require_same_grid(phi.dx(), g_now.u());
  require_same_grid(phi.dx(), g_next.u());
  const VectorInterpolator x_now(generator_field(g_now, opts.coefficient),
                                 opts.interpolation);
  const VectorInterpolator x_next(generator_field(g_next, opts.coefficient),
                                  opts.interpolation);
  const Positions p = positions(phi);
  const Velocity k1 = x_now(p);
  const Velocity k2 = x_next(displaced(p, dt, k1));
  Positions out = p;
  for (std::size_t k = 0; k < out.x.size(); ++k) {
    out.x[k] += 0.5 * dt * (k1.vx[k] + k2.vx[k]);
    out.y[k] += 0.5 * dt * (k1.vy[k] + k2.vy[k]);
  }
  return from_positions(phi, out);
}

MetricField pullback_metric(const GridDiffeo& phi, const ConformalMetric& g,
                            Interpolation interpolation) {
  require_same_grid(phi.dx(), g.u());
  const ScalarField det = phi.jacobian_determinant();
  if (det.min() <= 0.0) throw Error("diffeomorphism degenerated");
  const Positions p = positions(phi);
  const PeriodicInterpolator u(g.u(), interpolation);
  const std::vector<double> u_at = u.evaluate(p.x, p.y);
  const auto ddx = gradient0(phi.dx());
  const auto ddy = gradient0(phi.dy());
  const std::size_t n = u_at.size();
  std::vector<double> g11(n), g12(n), g22(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double j11 = 1.0 + ddx.c1[k];  // d phi^x / dx
    const double j12 = ddx.c2[k];        // d phi^x / dy
    const double j21 = ddy.c1[k];
    const double j22 = 1.0 + ddy.c2[k];
    const double e = std::exp(2.0 * u_at[k]);
    g11[k] = e * (j11 * j11 + j21 * j21);
    g12[k] = e * (j11 * j12 + j21 * j22);
    g22[k] = e * (j12 * j12 + j22 * j22);
  }
  const ScalarField& like = g.u();
  return MetricField(SymTensorField{like.with_values(std::move(g11)),
                                    like.with_values(std::move(g12)),
                                    like.with_values(std::move(g22))});
}

double full_flow_residual(std::span<const Snapshot> trajectory,
                          Interpolation interpolation, DerivativeScheme scheme) {
  if (trajectory.size() < 3) {
    throw Error("full-flow residual needs at least 3 snapshots");
  }
  const double spacing = trajectory[1].t - trajectory[0].t;
  if (!(spacing > 0.0)) throw Error("snapshot times must increase");
  for (std::size_t k = 1; k < trajectory.size(); ++k) {
    const double d = trajectory[k].t - trajectory[k - 1].t;
    if (std::abs(d - spacing) > 1e-9 * spacing) {
      throw Error("inconsistent snapshot spacing");
    }
  }
  std::vector<SymTensorField> pulled;
  pulled.reserve(trajectory.size());
  for (const auto& snap : trajectory) {
    pulled.push_back(pullback_metric(snap.phi, snap.g, interpolation).components());
  }
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < trajectory.size(); ++k) {
    const SymTensorField dgdt =
        (0.5 / spacing) * (pulled[k + 1] - pulled[k - 1]);
    const SymTensorField grad = grad_F_general(MetricField(pulled[k]), scheme);
    const double scale = grad.max_abs();
    const double defect = (dgdt + grad).max_abs();
    if (scale == 0.0) {
      worst = std::max(worst, defect);
    } else {
      worst = std::max(worst, defect / scale);
    }
  }
  return worst;
}

std::vector<Snapshot> corrected_trajectory(const ScalarField& u0,
                                           const TrajectoryConfig& cfg) {
  if (!u0.background().is_torus()) throw Error("diffeomorphisms require a torus");
  if (!(cfg.spacing > 0.0)) throw Error("snapshot spacing must be positive");
  if (cfg.snapshots < 1 || cfg.diffeo_steps < 1) {
    throw Error("snapshot and step counts must be positive");
  }
  if (!(cfg.safety > 0.0 && cfg.safety <= 1.0)) {
    throw Error("safety must lie in (0, 1]");
  }
  if (!(cfg.t_first >= 0.0)) throw Error("first snapshot time must be >= 0");
  const Interpolation method = cfg.diffeo.interpolation;
  const double c = cfg.diffeo.coefficient;
  const double h = cfg.spacing / cfg.diffeo_steps;

  GridDiffeo phi = GridDiffeo::identity(u0.background_ptr());
  ScalarField u = u0;
  auto advance = [&](double h) {
    const ScalarField u_mid = advance_conformal(u, 0.5 * h, cfg.safety);
    const ScalarField u_end = advance_conformal(u_mid, 0.5 * h, cfg.safety);
    const VectorInterpolator x0(generator_field(ConformalMetric(u), c), method);
    const VectorInterpolator xm(generator_field(ConformalMetric(u_mid), c), method);
    const VectorInterpolator x1(generator_field(ConformalMetric(u_end), c), method);
    const Positions p = positions(phi);
    const Velocity k1 = x0(p);
    const Velocity k2 = xm(displaced(p, 0.5 * h, k1));
    const Velocity k3 = xm(displaced(p, 0.5 * h, k2));
    const Velocity k4 = x1(displaced(p, h, k3));
    const Positions next{rk4_combine(p.x, h, k1.vx, k2.vx, k3.vx, k4.vx),
                         rk4_combine(p.y, h, k1.vy, k2.vy, k3.vy, k4.vy)};
    phi = from_positions(phi, next);
    u = u_end;
  };
  if (cfg.t_first > 0.0) {
    const int lead = static_cast<int>(std::ceil(cfg.t_first / h));
    for (int k = 0; k < lead; ++k) advance(cfg.t_first / lead);
  }

  std::vector<Snapshot> out;
  out.reserve(static_cast<std::size_t>(cfg.snapshots));
  out.push_back({cfg.t_first, phi, ConformalMetric(u)});
  for (int snap = 1; snap < cfg.snapshots; ++snap) {
    for (int step = 0; step < cfg.diffeo_steps; ++step) advance(h);
    out.push_back({cfg.t_first + snap * cfg.spacing, phi, ConformalMetric(u)});
  }
  return out;
}

double hessian_lie_defect(const ConformalMetric& g, DerivativeScheme scheme) {
  if (!g.background().is_torus()) throw Error("Lie derivative requires a torus");
  const ScalarField s = scalar_curvature(g);
  const SymTensorField hess = hessian(g, s);
  const FrameVector grad = generator_field(g, 1.0);
  const SymTensorField lie = lie_derivative(MetricField(g.tensor()), grad, scheme);
  return (hess - 0.5 * lie).max_abs();
}

}  // namespace l2flow
