#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "l2flow/flow.hpp"

namespace l2flow::cli {

inline constexpr int kCheckpointFormatVersion = 1;

struct Checkpoint {
  std::map<std::string, std::string> config_echo;
  FlowState state;
};

void write_checkpoint(const std::filesystem::path& path,
                      const std::map<std::string, std::string>& config_echo,
                      const FlowState& state);

/// Throws ConfigError on a malformed file or unsupported version.
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace l2flow::cli
