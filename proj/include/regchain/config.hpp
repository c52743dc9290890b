#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "regchain/engine.hpp"

namespace regchain {

struct RunManifest {
  std::string command;
  std::string configJson;
  std::uint64_t seed = 0;
  std::string version;
  std::string started, finished;
  std::vector<std::string> outputs;

  std::string to_json() const;
};

std::string config_json(const GameConfig& cfg);
std::string utc_now();
std::string library_version();

}  // namespace regchain
