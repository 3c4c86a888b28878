#pragma once

#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "l2flow/tensor_geometry.hpp"
#include "l2flow_cli/config.hpp"

namespace l2flow::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitCollapse = 2,
  kExitCheckFailed = 3,
  kExitRuntime = 4,
};

/// Runs the flow and writes series.csv, final_checkpoint.json and
/// summary.svg under cfg.output.directory.
int cmd_run(const ExperimentConfig& cfg, std::ostream& log);

struct GradcheckReport {
  int pairs = 0;
  double max_rel_error = 0.0;
  double homothety_rel_error = 0.0;
};

/// Random general metrics g and directions h on an n x n torus:
/// directional_derivative_F(g, h) against 2 * integral <grad F, h> dV.
GradcheckReport run_gradcheck(int resolution, double eps, std::uint64_t seed,
                              int pairs = 20);
int cmd_gradcheck(int resolution, double eps, std::uint64_t seed,
                  std::ostream& log);

struct XcheckLevel {
  int resolution = 0;
  double gradient_discrepancy = 0.0;  ///< |grad_F_general - grad_F_surface|
  double divergence_residual = 0.0;   ///< |div grad_F_general|
  double identity_defect = 0.0;       ///< 2D algebraic curvature identity
};

struct XcheckReport {
  XcheckLevel coarse;
  XcheckLevel fine;
  double gradient_order = 0.0;
  double divergence_order = 0.0;
};

/// Central-difference tensor calculus at n and 2n on
/// u = 0.1 cos x + 0.07 sin y, compared with the spectral conformal formulas.
XcheckReport run_xcheck(int resolution,
                        DerivativeScheme scheme = DerivativeScheme::CentralDifference);
int cmd_xcheck(int resolution, std::ostream& log);

struct DiffeoReport {
  double spacing = 0.0;
  int snapshots = 0;
  double f_invariance = 0.0;      ///< max relative |F(phi* g) - F(g)|
  double residual = 0.0;  ///< full_flow_residual over all snapshots
  /// Order study: three-snapshot windows centred on the middle snapshot
  /// time, at spacing and spacing / 2.
  double center_time = 0.0;
  double residual_window = 0.0;
  double residual_window_half = 0.0;
  double observed_order = 0.0;
  std::vector<double> hessian_lie;  ///< relative defect per snapshot
};

DiffeoReport run_diffeo_check(const ExperimentConfig& cfg);
int cmd_diffeo_check(const ExperimentConfig& cfg, std::ostream& log);

struct SweepRow {
  double scale = 0.0;
  double e0 = 0.0;
  bool below_threshold = false;
  bool converged = false;
  double decay_rate = std::numeric_limits<double>::quiet_NaN();
  double r_squared = std::numeric_limits<double>::quiet_NaN();
  double final_max_dev_s = std::numeric_limits<double>::quiet_NaN();
  double t_final = 0.0;
  std::string status = "ok";
};

struct SweepReport {
  double threshold = 0.0;  ///< 16 pi^2 (|chi| + 1)^2
  std::vector<SweepRow> rows;
};

/// Worker count for sweeps: L2FLOW_THREADS if set, else the hardware count.
int sweep_threads();

SweepReport run_sweep(const ExperimentConfig& cfg, int threads);
int cmd_sweep(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace l2flow::cli
