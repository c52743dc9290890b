#include "regchain/config.hpp"

#include <sodium.h>

#include <boost/version.hpp>
#include <chrono>
#include <ctime>
#include <json.hpp>

namespace regchain {

std::string config_json(const GameConfig& c) {
  nlohmann::ordered_json j;
  j["alphaR"] = c.alphaR;
  j["E"] = c.E == kInfiniteDepth ? nlohmann::ordered_json("inf") : nlohmann::ordered_json(c.E);
  j["rho"] = c.rho;
  j["releaseModelR"] = c.releaseModelR == ReleaseModel::SR ? "SR" : "IR";
  j["strategyR"] = c.strategyR;
  j["strategyUR"] = c.strategyUR;
  j["lambdaLegal"] = c.lambdaLegal;
  j["maxEpochs"] = c.maxEpochs;
  j["seed"] = c.seed;
  j["cap"] = c.cap;
  j["tieToLegal"] = c.tieToLegal;
  return j.dump();
}

std::string utc_now() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string library_version() {
  return std::string("regchain 0.1.0; libsodium ") + sodium_version_string() + "; boost " + BOOST_LIB_VERSION;
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["config"] = configJson.empty() ? nlohmann::ordered_json::object() : nlohmann::ordered_json::parse(configJson);
  j["seed"] = seed;
  j["versions"] = version;
  j["started"] = started;
  j["finished"] = finished;
  j["outputs"] = outputs;
  return j.dump(2);
}

}  // namespace regchain
