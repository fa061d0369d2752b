#include "cogradar/checkpoint.hpp"

#include <cereal/archives/portable_binary.hpp>
#include <cereal/types/array.hpp>
#include <cereal/types/deque.hpp>
#include <cereal/types/optional.hpp>
#include <cereal/types/string.hpp>
#include <cereal/types/vector.hpp>

#include <array>
#include <cstring>
#include <fstream>

namespace cogradar {

namespace {
constexpr std::array<char, 8> kMagic{'C', 'G', 'R', 'D', 'C', 'K', 'P', 'T'};
}

void save_checkpoint(const std::string& path, const TrainingSession& session, const std::string& config_text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw CheckpointError(path + ": cannot open for writing");
    os.write(kMagic.data(), kMagic.size());
    cereal::PortableBinaryOutputArchive ar(os);
    ar(kCheckpointVersion, config_text);
    ar(const_cast<TrainingSession&>(session));
    if (!os) throw CheckpointError(path + ": write failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw CheckpointError(path + ": cannot move into place");
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw CheckpointError(path + ": cannot open checkpoint");
  std::array<char, 8> magic{};
  is.read(magic.data(), magic.size());
  if (!is || magic != kMagic) throw CheckpointError(path + ": not a checkpoint file");
  LoadedCheckpoint out;
  try {
    cereal::PortableBinaryInputArchive ar(is);
    std::uint32_t version = 0;
    ar(version);
    if (version != kCheckpointVersion)
      throw CheckpointError(path + ": unsupported checkpoint version " + std::to_string(version));
    ar(out.config_text);
    ar(out.session);
  } catch (const cereal::Exception& e) {
    throw CheckpointError(path + ": truncated or corrupt checkpoint (" + e.what() + ")");
  }
  return out;
}

void check_compatible(const DdpgAgent& agent, const DdpgConfig& cfg) {
  auto shape = [](std::size_t in, const std::vector<std::size_t>& hidden, std::size_t out) {
    std::vector<std::size_t> s{in};
    s.insert(s.end(), hidden.begin(), hidden.end());
    s.push_back(out);
    return s;
  };
  if (agent.actor().sizes() != shape(cfg.state_dim, cfg.actor_hidden, cfg.action_dim))
    throw CheckpointError("checkpoint actor shape does not match the config");
  if (agent.critic().sizes() != shape(cfg.state_dim + cfg.action_dim, cfg.critic_hidden, 1))
    throw CheckpointError("checkpoint critic shape does not match the config");
}

}  // namespace cogradar
