#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "cogradar/ddpg.hpp"
#include "cogradar/runner.hpp"

namespace cogradar {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct CheckpointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Binary dump of a training session plus the resolved config it ran with.
void save_checkpoint(const std::string& path, const TrainingSession& session, const std::string& config_text);

struct LoadedCheckpoint {
  TrainingSession session;
  std::string config_text;
};

LoadedCheckpoint load_checkpoint(const std::string& path);

/// Throws CheckpointError unless the stored networks have the shapes `cfg`
/// would build.
void check_compatible(const DdpgAgent& agent, const DdpgConfig& cfg);

}  // namespace cogradar
