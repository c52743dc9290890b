#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "regchain/chain.hpp"

namespace regchain {

enum class ReleaseModel : std::uint8_t { IR, SR };

struct GameConfig {
  double alphaR = 0.5;
  unsigned E = 3;  // kInfiniteDepth for E = infinity
  double rho = 0.0;
  ReleaseModel releaseModelR = ReleaseModel::IR;
  std::string strategyR = "reg-frontier";
  std::string strategyUR = "leg-frontier";
  double lambdaLegal = 0.5;
  std::uint64_t maxEpochs = 1000;
  std::uint64_t seed = 1;
  std::size_t cap = 10000;
  // LegFrontier on equal legal/dubious heights
  bool tieToLegal = true;
};

void validate(const GameConfig& cfg);

struct IllegalAction : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Action {
  enum class Type : std::uint8_t { ExtendOwn, Capitulate, ReleaseUpTo, Adopt, Idle };
  Type type = Type::Idle;
  std::size_t arg = 0;
  std::string str() const;
};

struct RewardLedger {
  std::uint64_t confirmedR = 0;
  std::uint64_t confirmedUR = 0;
  std::uint64_t ocfClaimsR = 0;
  std::uint64_t ocfClaimsUR = 0;
  double ocfValueR = 0.0;
  double ocfValueUR = 0.0;
  std::uint64_t epochs = 0;
  std::uint64_t legalConfirmed = 0;
  std::uint64_t orphaned = 0;
  double lastOcf = 0.0;  // fee carried by the last confirmed block, not yet claimed

  std::uint64_t total() const { return confirmedR + confirmedUR; }
};

void settle_rewards(const std::vector<Block>& confirmed, RewardLedger& ledger);

struct EpisodeStats {
  double gR = 0, gUR = 0, tF = 0, ocfPaid = 0;
  std::uint64_t epochs = 0;
  RewardLedger ledger;
};

EpisodeStats stats_of(const RewardLedger& ledger);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 eng_;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

Player draw_owner(Rng& rng, double alphaR);

struct GameCtx {
  BlockTree& tree;
  const GameConfig& cfg;
  Rng& kindRng;
  std::uint64_t epoch;

  std::uint64_t mine(Player p, BlockKind kind, bool released = true);
};

class Strategy {
 public:
  virtual ~Strategy() = default;
  virtual std::string name() const = 0;
  // the player won the epoch and appends exactly one block
  virtual Action act(GameCtx& g) = 0;
  // runs after every block, owner is who produced it
  virtual Action react(GameCtx& g, Player owner) {
    (void)g;
    (void)owner;
    return {};
  }
};

std::unique_ptr<Strategy> make_strategy(Player p, const std::string& id, const GameConfig& cfg);

struct TraceRecord {
  std::uint64_t epoch;
  Player owner;
  Action action;
  Action reaction;
  std::size_t bOther, bLegal, pending, released;
  std::uint64_t confirmedR, confirmedUR;
};
using TraceSink = std::function<void(const TraceRecord&)>;

class Game {
 public:
  explicit Game(const GameConfig& cfg, std::uint64_t seed);
  explicit Game(const GameConfig& cfg) : Game(cfg, cfg.seed) {}

  // one epoch
  void step();
  EpisodeStats run(const TraceSink& sink = {});

  const BlockTree& tree() const { return tree_; }
  const RewardLedger& ledger() const { return ledger_; }
  std::uint64_t epoch() const { return epoch_; }

 private:
  void settle();
  void close_fork();

  GameConfig cfg_;
  BlockTree tree_;
  Rng ownerRng_;
  Rng kindRng_;
  std::unique_ptr<Strategy> strat_[2];
  RewardLedger ledger_;
  std::uint64_t epoch_ = 0;
  TraceSink sink_;
};

EpisodeStats run_episode(const GameConfig& cfg, std::uint64_t seed, const TraceSink& sink = {});
inline EpisodeStats run_episode(const GameConfig& cfg) { return run_episode(cfg, cfg.seed); }

}  // namespace regchain
