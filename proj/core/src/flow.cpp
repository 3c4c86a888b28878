#include "l2flow/flow.hpp"

#include <algorithm>
#include <cmath>

#include "l2flow/discretization.hpp"
#include "l2flow/error.hpp"

namespace l2flow {
namespace {

constexpr double kMaxIncrement = 0.1;
constexpr double kStabilizationMargin = 1.1;
constexpr double kGrowth = 1.2;
constexpr int kGrowthAfter = 10;
constexpr double kCollapseFraction = 1e-14;

double max_exp_minus_4u(const ScalarField& u) {
  return std::exp(-4.0 * u.min());
}

std::vector<double> axpy(const std::vector<double>& x, double a,
                         const std::vector<double>& y) {
  std::vector<double> out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = x[k] + a * y[k];
  return out;
}

void require_finite(const std::vector<double>& v) {
  for (double x : v) {
    if (!std::isfinite(x)) throw NonFiniteField();
  }
}

// Constant shift c with integral e^{2(u+c)} dV0 = target.
std::vector<double> project_volume(std::vector<double> u, const Background& bg,
                                   double target) {
  const auto w = bg.weights();
  double vol = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) vol += w[k] * std::exp(2.0 * u[k]);
  const double shift = 0.5 * std::log(target / vol);
  for (double& x : u) x += shift;
  return u;
}

// Proposed u^{n+1} for a given dt; throws NonFiniteField on overflow.
std::vector<double> propose(const FlowState& state, const FlowConfig& cfg,
                            double dt) {
  const ScalarField& u = state.metric.u();
  std::vector<double> next;
  if (cfg.scheme == Scheme::SemiImplicit) {
    const ScalarField r = rhs(state.metric, cfg.normalized);
    const double c = 0.5 * kStabilizationMargin * max_exp_minus_4u(u);
    const ScalarField delta = solve_shifted_biharmonic(dt * r, dt * c);
    next = axpy(u.data(), 1.0, delta.data());
  } else {
    auto stage = [&](const std::vector<double>& v) {
      return rhs(ConformalMetric(u.with_values(v)), cfg.normalized).data();
    };
    const auto k1 = stage(u.data());
    const auto k2 = stage(axpy(u.data(), 0.5 * dt, k1));
    const auto k3 = stage(axpy(u.data(), 0.5 * dt, k2));
    const auto k4 = stage(axpy(u.data(), dt, k3));
    next = u.data();
    for (std::size_t k = 0; k < next.size(); ++k) {
      next[k] += dt / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
    }
  }
  require_finite(next);
  if (cfg.normalized) {
    next = project_volume(std::move(next), u.background(),
                          state.metric.volume());
    require_finite(next);
  }
  return next;
}

double explicit_limit(const ScalarField& u, const FlowConfig& cfg) {
  const Background& bg = u.background();
  const double lambda = bg.max_biharmonic_eigenvalue(bg.is_torus());
  return cfg.safety * 2.0 / (max_exp_minus_4u(u) * lambda);
}

}  // namespace

void FlowConfig::validate() const {
  if (!(dt_init > 0.0)) throw Error("flow.dt_init must be positive");
  if (!(dt_max >= dt_init)) throw Error("flow.dt_max must be >= flow.dt_init");
  if (!(t_end > 0.0)) throw Error("flow.t_end must be positive");
  if (!(safety > 0.0 && safety <= 1.0)) {
    throw Error("flow.safety must lie in (0, 1]");
  }
  if (record_every < 1) throw Error("flow.record_every must be >= 1");
  if (stop_calabi_below && !(*stop_calabi_below >= 0.0)) {
    throw Error("flow.stop_calabi_below must be non-negative");
  }
}

ScalarField rhs(const ConformalMetric& g, bool normalized) {
  const ScalarField s = scalar_curvature(g);
  const ScalarField lap_s = laplacian(g, s);
  double shift = 0.0;
  if (normalized) {
    const double f = integrate(g, s * s);
    shift = 0.125 * f / g.volume();
  }
  std::vector<double> out(s.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = 0.5 * lap_s[k] + 0.125 * s[k] * s[k] - shift;
  }
  return dealias(s.with_values(std::move(out)));
}

FlowState initial_state(ScalarField u0, const FlowConfig& cfg) {
  cfg.validate();
  return FlowState{0.0, ConformalMetric(std::move(u0)), 0, cfg.dt_init, 0, 0.0};
}

FlowState step(const FlowState& state, const FlowConfig& cfg) {
  const ScalarField& u = state.metric.u();
  double dt = state.dt;
  for (;;) {
    if (dt < kCollapseFraction * cfg.dt_init) {
      throw StepSizeCollapse(state.t, dt);
    }
    double dt_try = std::min(dt, cfg.t_end - state.t);
    if (cfg.scheme == Scheme::ExplicitRK4) {
      dt_try = std::min(dt_try, explicit_limit(u, cfg));
    }
    bool accepted = false;
    std::vector<double> next;
    try {
      next = propose(state, cfg, dt_try);
      double worst = 0.0;
      for (std::size_t k = 0; k < next.size(); ++k) {
        worst = std::max(worst, std::abs(next[k] - u[k]));
      }
      accepted = worst <= kMaxIncrement;
    } catch (const NonFiniteField&) {
      accepted = false;
    }
    if (!accepted) {
      dt *= 0.5;
      continue;
    }
    FlowState out{state.t + dt_try, ConformalMetric(u.with_values(std::move(next))),
                  state.step_count + 1, dt, state.accepted_streak + 1, dt_try};
    if (dt < state.dt) out.accepted_streak = 1;
    if (out.accepted_streak >= kGrowthAfter) {
      out.dt = std::min(kGrowth * out.dt, cfg.dt_max);
      out.accepted_streak = 0;
    }
    return out;
  }
}

DiagnosticsRecord diagnose(const FlowState& state, const FlowConfig& cfg) {
  const EnergyReport e = energies(state.metric);
  DiagnosticsRecord r;
  r.t = state.t;
  r.vol = e.vol;
  r.F = e.F;
  r.E = e.E;
  r.calabi = e.calabi;
  r.total_curvature = e.total_curvature;
  r.dissipation = cfg.normalized ? vn_dissipation(state.metric)
                                 : dissipation(state.metric);
  r.max_abs_s = e.max_abs_s;
  r.dt_used = state.last_dt;
  return r;
}

RunResult run(ScalarField u0, const FlowConfig& cfg, const RecordSink& sink) {
  return run(initial_state(std::move(u0), cfg), cfg, sink);
}

RunResult run(FlowState start, const FlowConfig& cfg, const RecordSink& sink) {
  cfg.validate();
  RunResult result{{}, std::move(start), std::nullopt, false};
  FlowState& state = result.final;
  auto emit = [&] {
    result.records.push_back(diagnose(state, cfg));
    if (sink) sink(result.records.back(), state);
  };
  emit();
  long last_recorded = state.step_count;
  const double t_done = cfg.t_end * (1.0 - 1e-14);
  while (state.t < t_done) {
    try {
      state = step(state, cfg);
    } catch (const StepSizeCollapse& e) {
      result.failure = FlowFailure{state.t, e.what()};
      break;
    }
    bool stop = false;
    if (cfg.stop_calabi_below) {
      stop = energies(state.metric).calabi < *cfg.stop_calabi_below;
      result.reached_calabi_target = stop;
    }
    if (state.step_count % cfg.record_every == 0) {
      emit();
      last_recorded = state.step_count;
    }
    if (stop) break;
  }
  if (last_recorded != state.step_count) emit();
  return result;
}

DecayFit fit_decay_rate(std::span<const DiagnosticsRecord> records,
                        TimeWindow window) {
  std::vector<double> ts, ys;
  for (const auto& r : records) {
    if (r.t < window.t_lo || r.t > window.t_hi) continue;
    if (!(r.calabi > 0.0)) throw Error("calabi must be positive on fit window");
    ts.push_back(r.t);
    ys.push_back(std::log(r.calabi));
  }
  if (ts.size() < 4) throw Error("decay fit needs at least 4 records in window");
  const double n = static_cast<double>(ts.size());
  double mt = 0.0, my = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    mt += ts[k];
    my += ys[k];
  }
  mt /= n;
  my /= n;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    stt += (ts[k] - mt) * (ts[k] - mt);
    sty += (ts[k] - mt) * (ys[k] - my);
    syy += (ys[k] - my) * (ys[k] - my);
  }
  if (stt == 0.0) throw Error("decay fit window has no time spread");
  const double slope = sty / stt;
  const double r2 = syy > 0.0 ? (sty * sty) / (stt * syy) : 1.0;
  return {-slope, r2};
}

}  // namespace l2flow
