#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "cogradar/ddpg.hpp"
#include "cogradar/env.hpp"
#include "cogradar/runner.hpp"

namespace cogradar {

/// Invalid or unknown configuration entry. what() names the field.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScanReference {
  double tau_beam = 1e-3;  // s
  double range = 3000.0;   // m
  double snr = 100.0;      // linear
};

/// Every tunable of a run. Derived quantities (network shapes, scan
/// constant, normalizer scales) are filled in by the *_config() accessors.
struct RunConfig {
  EnvConfig env;
  ScanReference scan_reference;
  DdpgConfig ddpg;
  ObsNormalizer norm;
  TrainConfig train;
  std::uint64_t seed = 1;
  std::int64_t episodes = 1;
  std::int64_t eval_slots = 20000;
  double fraction = 0.5;

  RunConfig() { ddpg.mask_by_state = true; }

  EnvConfig env_config() const;
  DdpgConfig ddpg_config() const;
  ObsNormalizer normalizer() const;
  TrainConfig train_config() const;
};

/// Applies `section.key=value`. Throws ConfigError on unknown keys or
/// values outside their documented range.
void apply_setting(RunConfig& cfg, const std::string& dotted_key, const std::string& value);

/// Cross-field checks, run after all settings are applied.
void validate(const RunConfig& cfg);

/// Parses an INI file on top of the defaults.
RunConfig load_config(const std::string& path);
RunConfig load_config_text(const std::string& text);

/// Resolved snapshot in the same INI format; loading it reproduces `cfg`.
void write_config(std::ostream& os, const RunConfig& cfg);
std::string config_to_string(const RunConfig& cfg);

/// All known `section.key` names in snapshot order.
std::vector<std::string> config_keys();

}  // namespace cogradar
