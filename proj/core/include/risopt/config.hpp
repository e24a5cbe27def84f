#pragma once

#include <string>

#include "risopt/channel.hpp"
#include "risopt/harness.hpp"

namespace risopt {

struct RunConfig {
  SystemConfig system;
  SweepSpec sweep;
};

/// Parses a flat key-value configuration file (`key = value`, `#` comments).
/// Unknown keys are rejected; absent keys keep their defaults. `b`, `L` and
/// `seed` populate both the system and sweep sections. kappa values accept
/// the literal string `inf`; `n_grid` entries are `<N_y>x<N_z>` pairs and
/// list values are comma separated.
RunConfig load_config_file(const std::string& path);

/// Parses `text` as the contents of a configuration file.
RunConfig parse_config(const std::string& text);

/// Applies one key-value pair; shared by the parser and CLI overrides.
void apply_config_key(RunConfig& cfg, const std::string& key, const std::string& value);

}  // namespace risopt
