// One PASS/FAIL line per acceptance criterion. With --criterion N only that
// criterion runs; the exit status is nonzero if any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "l2flow/flow.hpp"
#include "l2flow/geometry.hpp"
#include "l2flow_cli/commands.hpp"
#include "l2flow_cli/config.hpp"
#include "l2flow_cli/initial.hpp"

namespace {

using namespace l2flow;
using namespace l2flow::cli;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;
constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

const char* kTorusRandom =
    "background.type = torus\nbackground.nx = 64\nbackground.ny = 64\n"
    "init.kind = random_smooth\ninit.seed = 42\ninit.amplitude = 0.3\n"
    "flow.normalized = false\nflow.dt_init = 1e-4\nflow.dt_max = 1e-2\n"
    "flow.t_end = 1\nflow.record_every = 10\n";

ExperimentConfig config(const std::string& text) {
  ExperimentConfig cfg = parse_config(text);
  validate(cfg);
  return cfg;
}

Outcome gauss_bonnet() {
  Outcome o{true, {}};
  {
    const auto cfg = config(kTorusRandom);
    const auto t0 = Clock::now();
    const RunResult r = run(synthesize_initial(cfg), cfg.flow);
    const double secs = seconds_since(t0);
    double worst = 0.0;
    for (const auto& rec : r.records) worst = std::max(worst, std::abs(rec.total_curvature));
    const bool ok = !r.failure && r.final.t == 1.0 && worst < 1e-6 && secs < 60.0;
    o.pass &= ok;
    o.detail += fmt("torus max|int s|=%.3g over %zu records (%.1fs)", worst, r.records.size(), secs);
  }
  {
    const auto cfg = config(
        "background.type = sphere\nbackground.ntheta = 256\n"
        "init.kind = legendre_modes\ninit.modes = 2 0.2\n"
        "flow.dt_init = 1e-5\nflow.dt_max = 1e-3\nflow.t_end = 1\nflow.record_every = 20\n");
    const auto t0 = Clock::now();
    const RunResult r = run(synthesize_initial(cfg), cfg.flow);
    const double secs = seconds_since(t0);
    double worst = 0.0;
    for (const auto& rec : r.records)
      worst = std::max(worst, std::abs(rec.total_curvature - 8 * kPi) / (8 * kPi));
    const bool ok = !r.failure && r.final.t == 1.0 && worst < 1e-4 && secs < 60.0;
    o.pass &= ok;
    o.detail += fmt("; sphere max rel err=%.3g over %zu records (%.1fs)", worst, r.records.size(), secs);
  }
  return o;
}

struct DissipationStudy {
  bool finished = false;
  bool monotone = true;
  bool fixed_dt = true;
  double residual = 0.0;
};

DissipationStudy dissipation_study(double dt) {
  auto cfg = config(kTorusRandom);
  cfg.flow.dt_init = cfg.flow.dt_max = dt;
  cfg.flow.record_every = 1;
  const RunResult r = run(synthesize_initial(cfg), cfg.flow);
  DissipationStudy s;
  s.finished = !r.failure && r.final.t == 1.0;
  const auto& rec = r.records;
  for (std::size_t k = 1; k < rec.size(); ++k) {
    if (!(rec[k].F < rec[k - 1].F)) s.monotone = false;
    if (std::abs(rec[k].dt_used - dt) > 1e-12 * dt && k + 1 < rec.size()) s.fixed_dt = false;
  }
  for (std::size_t k = 1; k + 1 < rec.size(); ++k) {
    const double dFdt = (rec[k + 1].F - rec[k - 1].F) / (rec[k + 1].t - rec[k - 1].t);
    const double d2 = 2.0 * rec[k].dissipation;
    s.residual = std::max(s.residual, std::abs(dFdt + d2) / d2);
  }
  return s;
}

Outcome dissipation_identity() {
  const DissipationStudy a = dissipation_study(1e-4);
  const DissipationStudy b = dissipation_study(5e-5);
  const bool ok = a.finished && b.finished && a.fixed_dt && b.fixed_dt && a.monotone &&
                  b.monotone && a.residual < 1e-2 && b.residual < a.residual;
  return {ok, fmt("F decreasing=%s; residual dt=1e-4: %.3g (tol 1e-2), dt=5e-5: %.3g",
                  a.monotone && b.monotone ? "yes" : "no", a.residual, b.residual)};
}

Outcome homothety() {
  const auto cfg = config(
      "background.type = sphere\nbackground.ntheta = 16\n"
      "init.kind = legendre_modes\ninit.modes =\n"
      "flow.scheme = rk4\nflow.dt_init = 1e-3\nflow.dt_max = 1e-3\nflow.t_end = 1\n");
  const RunResult r = run(synthesize_initial(cfg), cfg.flow);
  if (r.failure) return {false, "run failed: " + r.failure->message};
  // Spatially constant u: u' = e^{-4u} / 2, so w = e^{2u} obeys w' = 1/w.
  const double w = std::sqrt(3.0);
  const auto& dens = r.final.metric.area_density().values();
  double err_w = 0.0;
  for (double d : dens) err_w = std::max(err_w, std::abs(d - w) / w);
  const auto& last = r.records.back();
  const double err_v = std::abs(last.vol - 4 * kPi * w) / (4 * kPi * w);
  const double err_f = std::abs(last.F - 16 * kPi / w) / (16 * kPi / w);
  // Volume growth against the flux of F through the run.
  double vdot = 0.0;
  for (std::size_t k = 1; k + 1 < r.records.size(); ++k) {
    const auto& p = r.records[k - 1];
    const auto& n = r.records[k + 1];
    const auto& m = r.records[k];
    // Second-order three-point derivative; RK4 steps are not uniform.
    const double h1 = m.t - p.t, h2 = n.t - m.t;
    const double rate = (h1 * h1 * n.vol - h2 * h2 * p.vol + (h2 * h2 - h1 * h1) * m.vol) /
                        (h1 * h2 * (h1 + h2));
    vdot = std::max(vdot, std::abs(rate - 0.25 * r.records[k].F) / (0.25 * r.records[k].F));
  }
  const bool ok = r.final.t == 1.0 && err_w < 1e-6 && err_v < 1e-6 && err_f < 1e-6 && vdot < 1e-6;
  return {ok, fmt("e^{2u}(1)=%.12g vs sqrt(3): rel %.2g; vol rel %.2g; F rel %.2g; "
                  "Vdot=F/4 rel %.2g; [info] vs 1+t: rel %.3g",
                  dens.front(), err_w, err_v, err_f, vdot, std::abs(dens.front() - 2.0) / 2.0)};
}

Outcome normalized_volume() {
  auto cfg = config(
      "background.type = sphere\nbackground.ntheta = 256\n"
      "init.kind = legendre_modes\ninit.modes = 2 0.2\n"
      "flow.normalized = true\nflow.dt_init = 1e-5\nflow.dt_max = 1e-3\nflow.t_end = 1\n"
      "flow.record_every = 20\n");
  ScalarField u0 = synthesize_initial(cfg);
  // Start on the unit-sphere volume so the conserved value is 4 pi.
  const double shift = 0.5 * std::log(4 * kPi / ConformalMetric(u0).volume());
  u0 = u0 + shift;
  const RunResult r = run(u0, cfg.flow);
  if (r.failure) return {false, "run failed: " + r.failure->message};
  double worst = 0.0;
  for (const auto& rec : r.records) worst = std::max(worst, std::abs(rec.vol - 4 * kPi) / (4 * kPi));
  const bool ok = r.final.t == 1.0 && worst < 1e-6;
  return {ok, fmt("max |vol-4pi|/4pi=%.3g over %zu records, final calabi %.3g", worst,
                  r.records.size(), r.records.back().calabi)};
}

Outcome exponential_convergence() {
  Outcome o{true, {}};
  {
    const auto cfg = config(
        "background.resolution = 32\ninit.kind = fourier_modes\ninit.modes = 1 0 1e-3\n"
        "flow.normalized = true\nflow.dt_init = 1e-3\nflow.dt_max = 1e-2\nflow.t_end = 4\n"
        "flow.record_every = 5\n");
    const auto t0 = Clock::now();
    const RunResult r = run(synthesize_initial(cfg), cfg.flow);
    const double secs = seconds_since(t0);
    const DecayFit fit = fit_decay_rate(r.records, {0.5, 4.0});
    const bool ok = !r.failure && fit.rate >= 1.9 && fit.rate <= 2.1 && fit.r_squared > 0.999 &&
                    secs < 120.0;
    o.pass &= ok;
    o.detail += fmt("torus rate=%.5g r2=%.7g (%.1fs)", fit.rate, fit.r_squared, secs);
  }
  {
    const auto cfg = config(
        "background.type = sphere\nbackground.ntheta = 128\n"
        "init.kind = legendre_modes\ninit.modes = 2 1e-2\n"
        "flow.normalized = true\nflow.dt_init = 1e-5\nflow.dt_max = 1e-3\nflow.t_end = 0.3\n"
        "flow.record_every = 5\n");
    const ScalarField u0 = synthesize_initial(cfg);
    const double e0 = energies(ConformalMetric(u0)).E;
    const auto t0 = Clock::now();
    const RunResult r = run(u0, cfg.flow);
    const double secs = seconds_since(t0);
    const DecayFit fit = fit_decay_rate(r.records, {0.05, 0.3});
    const bool ok = !r.failure && e0 < 144 * kPi * kPi && fit.rate >= 38.0 && fit.rate <= 42.0 &&
                    secs < 120.0;
    o.pass &= ok;
    o.detail += fmt("; sphere E0/144pi^2=%.4g rate=%.5g r2=%.7g (%.1fs)", e0 / (144 * kPi * kPi),
                    fit.rate, fit.r_squared, secs);
  }
  return o;
}

Outcome energy_inequality() {
  const auto torus = Background::flat_torus(2 * kPi, 2 * kPi, 32, 32);
  const auto sphere = Background::sphere_axisym(64);
  double torus_margin = INFINITY, sphere_margin = INFINITY;
  for (int k = 0; k < 100; ++k) {
    const double amplitude = 0.05 + 0.01 * k;
    const double k0 = 1.0 + 0.02 * k;
    const auto et = energies(ConformalMetric(random_smooth(torus, 1000 + k, amplitude, k0)));
    torus_margin = std::min(torus_margin, et.E);
    const auto es = energies(ConformalMetric(random_smooth(sphere, 2000 + k, amplitude, k0)));
    sphere_margin = std::min(sphere_margin, es.E - 64 * kPi * kPi);
  }
  const ConformalMetric round(ScalarField::constant(sphere, 0.0));
  const double e_round = energies(round).E;
  const double e_err = std::abs(e_round - 64 * kPi * kPi) / (64 * kPi * kPi);
  const double grad_err = max_abs_difference(grad_F_surface(round), -1.0 * round.tensor());
  const bool ok = torus_margin >= -1e-8 && sphere_margin >= -1e-8 && e_err < 1e-10 && grad_err < 1e-8;
  return {ok, fmt("min E-(4pi chi)^2: torus %.4g, sphere %.4g; round sphere E rel %.2g, "
                  "|grad F + g| %.2g",
                  torus_margin, sphere_margin, e_err, grad_err)};
}

Outcome gradient_crosscheck() {
  const XcheckReport r = run_xcheck(64);
  const bool ok = r.gradient_order >= 1.7 && r.divergence_order >= 1.7;
  return {ok, fmt("discrepancy %.3g -> %.3g (order %.3f); divergence %.3g -> %.3g (order %.3f)",
                  r.coarse.gradient_discrepancy, r.fine.gradient_discrepancy, r.gradient_order,
                  r.coarse.divergence_residual, r.fine.divergence_residual, r.divergence_order)};
}

Outcome variational_oracle() {
  const GradcheckReport r = run_gradcheck(32, 1e-5, 7, 20);
  const bool ok = r.pairs == 20 && r.max_rel_error < 1e-3 && r.homothety_rel_error < 1e-6;
  return {ok, fmt("%d pairs max rel err %.3g (tol 1e-3); homothety rel err %.3g (tol 1e-6)",
                  r.pairs, r.max_rel_error, r.homothety_rel_error)};
}

Outcome diffeo_correction() {
  const auto cfg = config(
      "background.resolution = 32\ninit.kind = fourier_modes\n"
      "init.modes = 1 0 0.1; 0 1 0.07 -0.5pi\n"
      "diffeo.spacing = 0.01\ndiffeo.snapshots = 5\ndiffeo.steps = 4\n");
  const DiffeoReport r = run_diffeo_check(cfg);
  const double hl = *std::max_element(r.hessian_lie.begin(), r.hessian_lie.end());
  const bool ok = r.f_invariance < 1e-4 && r.residual < 5e-2 && r.observed_order >= 1.7 &&
                  r.hessian_lie.size() == 5 && hl < 1e-8;
  return {ok, fmt("F invariance %.3g; residual %.3g; order %.3f (%.3g -> %.3g at t=%.3g); "
                  "Hessian/Lie max %.3g over %zu snapshots",
                  r.f_invariance, r.residual, r.observed_order, r.residual_window,
                  r.residual_window_half, r.center_time, hl, r.hessian_lie.size())};
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "l2flow_acceptance_determinism";
  fs::remove_all(root);
  std::ostringstream log;
  std::string text[2];
  for (int k = 0; k < 2; ++k) {
    const fs::path dir = root / (k == 0 ? "a" : "b");
    auto cfg = config(kTorusRandom);
    set_config_value(cfg, "output.directory", dir.string());
    if (cmd_run(cfg, log) != kExitOk) return {false, "cmd_run failed: " + log.str()};
    std::ifstream in(dir / "series.csv", std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    text[k] = ss.str();
  }
  fs::remove_all(root);
  const bool ok = !text[0].empty() && text[0] == text[1];
  return {ok, fmt("series.csv %zu bytes, identical=%s", text[0].size(), ok ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria = {
      gauss_bonnet,           dissipation_identity, homothety,         normalized_volume,
      exponential_convergence, energy_inequality,   gradient_crosscheck, variational_oracle,
      diffeo_correction,      determinism};
  std::vector<int> selected;
  for (int a = 1; a < argc; ++a) {
    const std::string arg = argv[a];
    if (arg == "--criterion" && a + 1 < argc) {
      selected.push_back(std::atoi(argv[++a]));
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]...\n", argv[0]);
      return 2;
    }
  }
  if (selected.empty())
    for (int n = 1; n <= static_cast<int>(criteria.size()); ++n) selected.push_back(n);

  bool all = true;
  for (int n : selected) {
    if (n < 1 || n > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "no criterion %d\n", n);
      return 2;
    }
    Outcome o;
    try {
      o = criteria[n - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d: %s  %s\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    all &= o.pass;
  }
  return all ? 0 : 1;
}
