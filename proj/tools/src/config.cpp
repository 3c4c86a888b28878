#include "l2flow_cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace l2flow::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Accepts plain numbers and multiples of pi written as "2pi" or "pi".
double parse_real(const std::string& key, const std::string& v) {
  std::string s = trim(v);
  double factor = 1.0;
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    factor = std::numbers::pi;
    s = trim(s.substr(0, s.size() - 2));
    if (s.empty()) return factor;
  }
  double out = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
  return out * factor;
}

long long parse_int(const std::string& key, const std::string& v) {
  const std::string s = trim(v);
  long long out = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
  return out;
}

int parse_int32(const std::string& key, const std::string& v) {
  const long long x = parse_int(key, v);
  if (x < -2147483647LL || x > 2147483647LL) {
    throw ConfigError(key + ": integer out of range");
  }
  return static_cast<int>(x);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

// "kx ky amplitude [phase]; ..."
std::vector<FourierMode> parse_fourier(const std::string& key,
                                       const std::string& v) {
  std::vector<FourierMode> out;
  for (const auto& entry : split(v, ';')) {
    std::vector<std::string> f = split(entry, ' ');
    if (f.size() != 3 && f.size() != 4) {
      throw ConfigError(key + ": each mode is 'kx ky amplitude [phase]'");
    }
    FourierMode m;
    m.kx = parse_int32(key, f[0]);
    m.ky = parse_int32(key, f[1]);
    m.amplitude = parse_real(key, f[2]);
    if (f.size() == 4) m.phase = parse_real(key, f[3]);
    out.push_back(m);
  }
  return out;
}

// "l amplitude; ..."
std::vector<LegendreMode> parse_legendre(const std::string& key,
                                         const std::string& v) {
  std::vector<LegendreMode> out;
  for (const auto& entry : split(v, ';')) {
    std::vector<std::string> f = split(entry, ' ');
    if (f.size() != 2) throw ConfigError(key + ": each mode is 'l amplitude'");
    out.push_back({parse_int32(key, f[0]), parse_real(key, f[1])});
  }
  return out;
}

Scheme parse_scheme(const std::string& key, const std::string& v) {
  if (v == "semi_implicit") return Scheme::SemiImplicit;
  if (v == "rk4") return Scheme::ExplicitRK4;
  throw ConfigError(key + ": expected semi_implicit or rk4, got '" + v + "'");
}

}  // namespace

void set_config_value(ExperimentConfig& cfg, const std::string& key,
                      const std::string& value) {
  const std::string& v = value;
  auto& bg = cfg.background;
  auto& in = cfg.init;
  auto& fl = cfg.flow;
  if (key == "background.type") {
    if (v == "torus") {
      bg.type = BackgroundType::Torus;
    } else if (v == "sphere") {
      bg.type = BackgroundType::Sphere;
    } else {
      throw ConfigError(key + ": expected torus or sphere, got '" + v + "'");
    }
  } else if (key == "background.lx") {
    bg.lx = parse_real(key, v);
  } else if (key == "background.ly") {
    bg.ly = parse_real(key, v);
  } else if (key == "background.nx") {
    bg.nx = parse_int32(key, v);
  } else if (key == "background.ny") {
    bg.ny = parse_int32(key, v);
  } else if (key == "background.ntheta") {
    bg.ntheta = parse_int32(key, v);
  } else if (key == "background.resolution") {
    bg.nx = bg.ny = bg.ntheta = parse_int32(key, v);
  } else if (key == "init.kind") {
    if (v == "fourier_modes") {
      in.kind = InitKind::FourierModes;
    } else if (v == "legendre_modes") {
      in.kind = InitKind::LegendreModes;
    } else if (v == "random_smooth") {
      in.kind = InitKind::RandomSmooth;
    } else if (v == "from_checkpoint") {
      in.kind = InitKind::FromCheckpoint;
    } else {
      throw ConfigError(key + ": unknown initial data kind '" + v + "'");
    }
  } else if (key == "init.modes") {
    // Two fields per entry means Legendre; init.kind is checked in validate().
    in.fourier.clear();
    in.legendre.clear();
    const auto entries = split(v, ';');
    if (!entries.empty() && split(entries.front(), ' ').size() == 2) {
      in.legendre = parse_legendre(key, v);
    } else {
      in.fourier = parse_fourier(key, v);
    }
  } else if (key == "init.seed") {
    const long long s = parse_int(key, v);
    if (s < 0) throw ConfigError(key + ": seed must be non-negative");
    in.seed = static_cast<unsigned long long>(s);
  } else if (key == "init.amplitude") {
    in.amplitude = parse_real(key, v);
  } else if (key == "init.k0") {
    in.k0 = parse_real(key, v);
  } else if (key == "init.scale") {
    in.scale = parse_real(key, v);
  } else if (key == "init.checkpoint") {
    in.checkpoint = v;
  } else if (key == "flow.normalized") {
    fl.normalized = parse_bool(key, v);
  } else if (key == "flow.scheme") {
    fl.scheme = parse_scheme(key, v);
  } else if (key == "flow.dt_init") {
    fl.dt_init = parse_real(key, v);
  } else if (key == "flow.dt_max") {
    fl.dt_max = parse_real(key, v);
  } else if (key == "flow.t_end") {
    fl.t_end = parse_real(key, v);
  } else if (key == "flow.safety") {
    fl.safety = parse_real(key, v);
  } else if (key == "flow.record_every") {
    fl.record_every = parse_int32(key, v);
  } else if (key == "flow.stop_calabi_below") {
    fl.stop_calabi_below = parse_real(key, v);
  } else if (key == "output.directory") {
    cfg.output.directory = v;
  } else if (key == "output.checkpoint_every") {
    cfg.output.checkpoint_every = parse_int32(key, v);
  } else if (key == "output.plot") {
    cfg.output.plot = parse_bool(key, v);
  } else if (key == "diffeo.spacing") {
    cfg.diffeo.spacing = parse_real(key, v);
  } else if (key == "diffeo.t_first") {
    cfg.diffeo.t_first = parse_real(key, v);
  } else if (key == "diffeo.snapshots") {
    cfg.diffeo.snapshots = parse_int32(key, v);
  } else if (key == "diffeo.steps") {
    cfg.diffeo.steps = parse_int32(key, v);
  } else if (key == "sweep.scales") {
    cfg.sweep.scales.clear();
    for (const auto& s : split(v, ',')) cfg.sweep.scales.push_back(parse_real(key, s));
  } else if (key == "sweep.fit_fraction") {
    cfg.sweep.fit_fraction = parse_real(key, v);
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
  cfg.raw[key] = v;
}

ExperimentConfig parse_config(const std::string& text,
                              const std::filesystem::path& source_dir) {
  ExperimentConfig cfg;
  cfg.source_dir = source_dir;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    }
    if (cfg.raw.count(key) != 0) {
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" +
                        key + "'");
    }
    set_config_value(cfg, key, value);
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path());
}

void validate(const ExperimentConfig& cfg) {
  const auto& bg = cfg.background;
  const auto& in = cfg.init;
  const bool torus = bg.type == BackgroundType::Torus;
  if (torus) {
    if (bg.nx < 8 || bg.ny < 8 || bg.nx % 2 != 0 || bg.ny % 2 != 0) {
      throw ConfigError("background.nx/ny must be even and at least 8");
    }
    if (bg.lx < 0.0 || bg.ly < 0.0) {
      throw ConfigError("background.lx/ly must be positive");
    }
  } else if (bg.ntheta < 16) {
    throw ConfigError("background.ntheta must be at least 16");
  }
  switch (in.kind) {
    case InitKind::FourierModes:
      if (!torus) throw ConfigError("fourier_modes requires a torus background");
      if (!in.legendre.empty()) {
        throw ConfigError("init.modes: Fourier modes are 'kx ky amplitude [phase]'");
      }
      break;
    case InitKind::LegendreModes:
      if (torus) throw ConfigError("legendre_modes requires a sphere background");
      if (!in.fourier.empty()) {
        throw ConfigError("init.modes: Legendre modes are 'l amplitude'");
      }
      for (const auto& m : in.legendre) {
        if (m.l < 0) throw ConfigError("init.modes: degree must be non-negative");
      }
      break;
    case InitKind::RandomSmooth:
      if (!in.seed) throw ConfigError("init.seed is required for random_smooth");
      if (!(in.amplitude >= 0.0)) throw ConfigError("init.amplitude must be >= 0");
      if (!(in.k0 > 0.0)) throw ConfigError("init.k0 must be positive");
      break;
    case InitKind::FromCheckpoint:
      if (in.checkpoint.empty()) {
        throw ConfigError("init.checkpoint is required for from_checkpoint");
      }
      break;
  }
  if (cfg.output.checkpoint_every < 0) {
    throw ConfigError("output.checkpoint_every must be >= 0");
  }
  if (!(cfg.diffeo.spacing > 0.0) || !(cfg.diffeo.t_first >= 0.0) ||
      cfg.diffeo.snapshots < 3 ||
      cfg.diffeo.steps < 1) {
    throw ConfigError("diffeo: spacing > 0, snapshots >= 3, steps >= 1 required");
  }
  if (!(cfg.sweep.fit_fraction > 0.0 && cfg.sweep.fit_fraction <= 1.0)) {
    throw ConfigError("sweep.fit_fraction must lie in (0, 1]");
  }
  try {
    cfg.flow.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace l2flow::cli
