#include "l2flow/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "l2flow/discretization.hpp"
#include "l2flow/error.hpp"

namespace l2flow {
namespace {

ScalarField exp_scaled(const ScalarField& u, double c) {
  return u.map([c](double x) { return std::exp(c * x); });
}

struct TracelessHessian {
  ScalarField trace_term;  // Delta_g s
  ScalarField norm_sq;     // |Hess s - (Delta s / 2) g|^2_g
};

// Pointwise pieces shared by the two dissipation functionals.
TracelessHessian traceless_hessian(const ConformalMetric& g,
                                   const ScalarField& s) {
  const SymTensorField h = hessian(g, s);
  const ScalarField inv4 = exp_scaled(g.u(), -4.0);
  std::vector<double> nsq(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double diff = h.c11[k] - h.c22[k];
    nsq[k] = inv4[k] * (0.5 * diff * diff + 2.0 * h.c12[k] * h.c12[k]);
  }
  return {laplacian(g, s), s.with_values(std::move(nsq))};
}

double dissipation_with_shift(const ConformalMetric& g, double shift) {
  const ScalarField s = scalar_curvature(g);
  const TracelessHessian th = traceless_hessian(g, s);
  std::vector<double> density(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double tr = th.trace_term[k] + 0.5 * s[k] * s[k] - shift;
    density[k] = 0.5 * tr * tr + th.norm_sq[k];
  }
  return integrate(g, s.with_values(std::move(density)));
}

}  // namespace

ConformalMetric::ConformalMetric(ScalarField u)
    : u_(std::move(u)), density_(exp_scaled(u_, 2.0)) {}

double ConformalMetric::volume() const { return integrate0(density_); }

ScalarField scalar_curvature(const ConformalMetric& g) {
  const ScalarField lap = laplacian0(g.u());
  const double s0 = g.background().s0();
  std::vector<double> s(lap.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    s[k] = std::exp(-2.0 * g.u()[k]) * (s0 - 2.0 * lap[k]);
  }
  return lap.with_values(std::move(s));
}

ScalarField laplacian(const ConformalMetric& g, const ScalarField& f) {
  return exp_scaled(g.u(), -2.0) * laplacian0(f);
}

double integrate(const ConformalMetric& g, const ScalarField& f) {
  return integrate0(g.area_density() * f);
}

SymTensorField hessian(const ConformalMetric& g, const ScalarField& f) {
  // Conformal change of the Levi-Civita connection:
  // Hess_g f = Hess_0 f - (du (x) df + df (x) du) + <du, df>_0 g0.
  const BackgroundDerivatives df = derivatives0(f);
  const FrameVector du = gradient0(g.u());
  const std::size_t n = f.size();
  std::vector<double> h11(n), h12(n), h22(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double u1 = du.c1[k], u2 = du.c2[k];
    const double f1 = df.gradient.c1[k], f2 = df.gradient.c2[k];
    const double dot = u1 * f1 + u2 * f2;
    h11[k] = df.hessian.c11[k] - 2.0 * u1 * f1 + dot;
    h12[k] = df.hessian.c12[k] - u1 * f2 - u2 * f1;
    h22[k] = df.hessian.c22[k] - 2.0 * u2 * f2 + dot;
  }
  return {f.with_values(std::move(h11)), f.with_values(std::move(h12)),
          f.with_values(std::move(h22))};
}

ScalarField trace(const ConformalMetric& g, const SymTensorField& a) {
  return exp_scaled(g.u(), -2.0) * (a.c11 + a.c22);
}

ScalarField inner(const ConformalMetric& g, const SymTensorField& a,
                  const SymTensorField& b) {
  const ScalarField inv4 = exp_scaled(g.u(), -4.0);
  return inv4 * (a.c11 * b.c11 + 2.0 * (a.c12 * b.c12) + a.c22 * b.c22);
}

double integrate_inner(const ConformalMetric& g, const SymTensorField& a,
                       const SymTensorField& b) {
  return integrate(g, inner(g, a, b));
}

FrameVector divergence(const ConformalMetric& g, const SymTensorField& a) {
  // div_g A = e^{-2u} (div_0 A - tr_0(A) du) in two dimensions.
  const Background& bg = g.background();
  const FrameVector du = gradient0(g.u());
  const ScalarField tr0 = a.c11 + a.c22;
  const ScalarField inv2 = exp_scaled(g.u(), -2.0);
  if (bg.is_torus()) {
    const FrameVector d11 = gradient0(a.c11);
    const FrameVector d12 = gradient0(a.c12);
    const FrameVector d22 = gradient0(a.c22);
    ScalarField div1 = d11.c1 + d12.c2;
    ScalarField div2 = d12.c1 + d22.c2;
    return {inv2 * (div1 - tr0 * du.c1), inv2 * (div2 - tr0 * du.c2)};
  }
  // Axisymmetric, diagonal A: (div_0 A)_theta = A_tt' + cot (A_tt - A_pp).
  const ScalarField dtt = gradient0(a.c11).c1;
  std::vector<double> div(a.c11.size());
  const auto cot = bg.cot_theta();
  for (std::size_t k = 0; k < div.size(); ++k) {
    div[k] = dtt[k] + cot[k] * (a.c11[k] - a.c22[k]);
  }
  // The phi component carries only the off-diagonal entry.
  const ScalarField dtp = gradient0(a.c12).c1;
  std::vector<double> div_phi(a.c11.size());
  for (std::size_t k = 0; k < div.size(); ++k) {
    div_phi[k] = dtp[k] + 2.0 * cot[k] * a.c12[k];
  }
  return {inv2 * (a.c11.with_values(std::move(div)) - tr0 * du.c1),
          inv2 * a.c11.with_values(std::move(div_phi))};
}

EnergyReport energies(const ConformalMetric& g) {
  const ScalarField s = scalar_curvature(g);
  EnergyReport r;
  r.vol = g.volume();
  r.F = integrate(g, s * s);
  r.E = r.F * r.vol;
  r.total_curvature = integrate(g, s);
  r.s_bar = r.total_curvature / r.vol;
  const double sb = r.s_bar;
  r.calabi = integrate(g, s.map([sb](double x) { return (x - sb) * (x - sb); }));
  r.max_abs_s = s.max_abs();
  return r;
}

SymTensorField grad_F_surface(const ConformalMetric& g) {
  const ScalarField s = scalar_curvature(g);
  const ScalarField lap_s = laplacian(g, s);
  const SymTensorField h = hessian(g, s);
  std::vector<double> iso(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    iso[k] = (-lap_s[k] - 0.25 * s[k] * s[k]) * g.area_density()[k];
  }
  return h + isotropic(s.with_values(std::move(iso)));
}

ScalarField conformal_rhs_trace(const ConformalMetric& g) {
  const ScalarField s = scalar_curvature(g);
  const ScalarField lap_s = laplacian(g, s);
  std::vector<double> a(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    a[k] = lap_s[k] + 0.25 * s[k] * s[k];
  }
  return s.with_values(std::move(a));
}

double dissipation(const ConformalMetric& g) {
  return dissipation_with_shift(g, 0.0);
}

double vn_dissipation(const ConformalMetric& g) {
  const EnergyReport e = energies(g);
  return dissipation_with_shift(g, 0.5 * e.F / e.vol);
}

}  // namespace l2flow
