#include "l2flow_cli/checkpoint.hpp"

#include <fstream>

#include <json.hpp>

#include "l2flow_cli/config.hpp"

namespace l2flow::cli {

using nlohmann::json;

namespace {

json background_json(const Background& bg) {
  if (bg.is_torus()) {
    return {{"type", "torus"}, {"lx", bg.lx()}, {"ly", bg.ly()},
            {"nx", bg.nx()}, {"ny", bg.ny()}};
  }
  return {{"type", "sphere"}, {"ntheta", bg.nx()}};
}

BackgroundPtr background_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "torus") {
    return Background::flat_torus(j.at("lx").get<double>(), j.at("ly").get<double>(),
                                  j.at("nx").get<int>(), j.at("ny").get<int>());
  }
  if (type == "sphere") return Background::sphere_axisym(j.at("ntheta").get<int>());
  throw ConfigError("checkpoint: unknown background type '" + type + "'");
}

}  // namespace

void write_checkpoint(const std::filesystem::path& path,
                      const std::map<std::string, std::string>& config_echo,
                      const FlowState& state) {
  json j;
  j["format_version"] = kCheckpointFormatVersion;
  j["config_echo"] = config_echo;
  j["t"] = state.t;
  j["step_count"] = state.step_count;
  j["dt"] = state.dt;
  j["accepted_streak"] = state.accepted_streak;
  j["last_dt"] = state.last_dt;
  j["background"] = background_json(state.metric.background());
  j["u"] = state.metric.u().data();
  std::ofstream out(path);
  if (!out) throw Error("cannot write checkpoint '" + path.string() + "'");
  out << j.dump(1) << '\n';
  if (!out) throw Error("failed writing checkpoint '" + path.string() + "'");
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open checkpoint '" + path.string() + "'");
  try {
    const json j = json::parse(in);
    const int version = j.at("format_version").get<int>();
    if (version != kCheckpointFormatVersion) {
      throw ConfigError("checkpoint: unsupported format_version " +
                        std::to_string(version));
    }
    const BackgroundPtr bg = background_from_json(j.at("background"));
    ScalarField u(bg, j.at("u").get<std::vector<double>>());
    FlowState state{j.at("t").get<double>(), ConformalMetric(std::move(u)),
                    j.at("step_count").get<long>(), j.at("dt").get<double>(),
                    j.at("accepted_streak").get<int>(),
                    j.value("last_dt", 0.0)};
    return {j.at("config_echo").get<std::map<std::string, std::string>>(),
            std::move(state)};
  } catch (const json::exception& e) {
    throw ConfigError("checkpoint '" + path.string() + "': " + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("checkpoint '" + path.string() + "': " + e.what());
  }
}

}  // namespace l2flow::cli
