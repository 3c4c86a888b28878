#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "l2flow/error.hpp"
#include "l2flow/flow.hpp"

namespace l2flow::cli {

/// Bad or inconsistent configuration; maps to exit code 1.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class BackgroundType { Torus, Sphere };
enum class InitKind { FourierModes, LegendreModes, RandomSmooth, FromCheckpoint };

struct FourierMode {
  int kx = 0;
  int ky = 0;
  double amplitude = 0.0;
  double phase = 0.0;
};

struct LegendreMode {
  int l = 0;
  double amplitude = 0.0;
};

struct BackgroundConfig {
  BackgroundType type = BackgroundType::Torus;
  double lx = 0.0;  // defaults to 2 pi
  double ly = 0.0;
  int nx = 64;
  int ny = 64;
  int ntheta = 128;
};

struct InitConfig {
  InitKind kind = InitKind::FourierModes;
  std::vector<FourierMode> fourier;
  std::vector<LegendreMode> legendre;
  std::optional<unsigned long long> seed;
  double amplitude = 0.1;  ///< random_smooth: max |u|
  double k0 = 2.0;         ///< random_smooth spectral width
  /// Multiplies every mode amplitude; sweeps vary this.
  double scale = 1.0;
  std::filesystem::path checkpoint;
};

struct OutputConfig {
  std::filesystem::path directory = "out";
  int checkpoint_every = 0;  ///< steps; 0 writes only the final checkpoint
  bool plot = true;
};

struct DiffeoCheckConfig {
  double spacing = 1e-2;
  double t_first = 0.0;
  int snapshots = 5;
  int steps = 4;
};

struct SweepConfig {
  std::vector<double> scales;
  double fit_fraction = 0.5;  ///< fit the Calabi decay on the last fraction
};

struct ExperimentConfig {
  BackgroundConfig background;
  InitConfig init;
  FlowConfig flow;
  OutputConfig output;
  DiffeoCheckConfig diffeo;
  SweepConfig sweep;
  /// Every key as read, for echoing into checkpoints.
  std::map<std::string, std::string> raw;
  std::filesystem::path source_dir = ".";
};

/// Flat "section.key = value" text, '#' starts a comment.
ExperimentConfig parse_config(const std::string& text,
                              const std::filesystem::path& source_dir = ".");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Applies a key as if it appeared in the file (command-line overrides).
void set_config_value(ExperimentConfig& cfg, const std::string& key,
                      const std::string& value);

/// Throws ConfigError on an inconsistent configuration.
void validate(const ExperimentConfig& cfg);

}  // namespace l2flow::cli
