#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "l2flow/geometry.hpp"

namespace l2flow {

enum class Scheme { SemiImplicit, ExplicitRK4 };

struct FlowConfig {
  /// Volume-normalized flow when true, plain conformal flow otherwise.
  bool normalized = false;
  Scheme scheme = Scheme::SemiImplicit;
  double dt_init = 1e-4;
  double dt_max = 1e-2;
  double t_end = 1.0;
  /// Fraction of the explicit stability limit used by ExplicitRK4.
  double safety = 0.9;
  int record_every = 1;
  std::optional<double> stop_calabi_below;

  /// Throws Error on inconsistent settings.
  void validate() const;
};

struct FlowState {
  double t = 0.0;
  ConformalMetric metric;
  long step_count = 0;
  /// Controller step size for the next attempt.
  double dt = 0.0;
  /// Accepted steps since the controller last changed dt.
  int accepted_streak = 0;
  /// Size of the most recent accepted step (0 before the first one).
  double last_dt = 0.0;
};

struct DiagnosticsRecord {
  double t = 0.0;
  double vol = 0.0;
  double F = 0.0;
  double E = 0.0;
  double calabi = 0.0;
  double total_curvature = 0.0;
  /// dissipation() for the conformal flow, vn_dissipation() when normalized.
  double dissipation = 0.0;
  double max_abs_s = 0.0;
  double dt_used = 0.0;
};

/// du/dt for g = e^{2u} g0 under d/dt g = (Delta s + s^2/4 [- F/(4 vol)]) g,
/// i.e. u' = a/2 [- F/(8 vol)]. Dealiased on the torus.
ScalarField rhs(const ConformalMetric& g, bool normalized);

FlowState initial_state(ScalarField u0, const FlowConfig& cfg);

/// One accepted step, retrying with halved dt as needed.
///
/// SemiImplicit: (I + dt c Delta_0^2)(u' - u) = dt rhs(u) with
/// c = 0.55 max e^{-4u}. ExplicitRK4: classical RK4 restricted to
/// dt <= safety * 2 / (max e^{-4u} * lambda_max(Delta_0^2)).
/// A step is rejected if max|u' - u| > 0.1 or non-finite values appear.
/// The normalized flow is projected back onto the volume of the previous
/// step by a constant shift of u.
///
/// Throws StepSizeCollapse when dt falls below 1e-14 * dt_init.
FlowState step(const FlowState& state, const FlowConfig& cfg);

DiagnosticsRecord diagnose(const FlowState& state, const FlowConfig& cfg);

struct FlowFailure {
  double t = 0.0;
  std::string message;
};

struct RunResult {
  std::vector<DiagnosticsRecord> records;
  FlowState final;
  std::optional<FlowFailure> failure;
  bool reached_calabi_target = false;
};

/// Called for every emitted record, in order.
using RecordSink =
    std::function<void(const DiagnosticsRecord&, const FlowState&)>;

/// Integrates to t_end or until calabi < stop_calabi_below. Records the
/// initial state, every record_every accepted steps, and the final state.
/// Step failures end the run and are reported in RunResult::failure.
RunResult run(ScalarField u0, const FlowConfig& cfg,
              const RecordSink& sink = {});
RunResult run(FlowState start, const FlowConfig& cfg,
              const RecordSink& sink = {});

struct TimeWindow {
  double t_lo = 0.0;
  double t_hi = 0.0;
};

struct DecayFit {
  double rate = 0.0;  ///< -d log(calabi)/dt; positive means decay
  double r_squared = 0.0;
};

/// Least-squares fit of log(calabi) against t over records in the window.
DecayFit fit_decay_rate(std::span<const DiagnosticsRecord> records,
                        TimeWindow window);

}  // namespace l2flow
