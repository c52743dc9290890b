#include "regchain/engine.hpp"

#include <cmath>
#include <stdexcept>

namespace regchain {

void validate(const GameConfig& cfg) {
  if (!(cfg.alphaR >= 0.0 && cfg.alphaR <= 1.0)) throw std::invalid_argument("alphaR must be in [0,1]");
  if (!(cfg.rho >= 0.0) || !std::isfinite(cfg.rho)) throw std::invalid_argument("rho must be >= 0");
  if (!(cfg.lambdaLegal >= 0.0 && cfg.lambdaLegal <= 1.0)) throw std::invalid_argument("lambdaLegal must be in [0,1]");
  if (cfg.E != kInfiniteDepth && cfg.maxEpochs < cfg.E) throw std::invalid_argument("maxEpochs must be >= E");
  if (cfg.cap < 1) throw std::invalid_argument("cap must be >= 1");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  return splitmix64(splitmix64(seed) ^ (trial * 0xd1b54a32d192ed03ULL));
}

Player draw_owner(Rng& rng, double alphaR) { return rng.bernoulli(alphaR) ? Player::R : Player::UR; }

void settle_rewards(const std::vector<Block>& confirmed, RewardLedger& ledger) {
  for (const Block& b : confirmed) {
    bool r = b.notarizer == Player::R;
    (r ? ledger.confirmedR : ledger.confirmedUR) += 1;
    if (ledger.lastOcf > 0) {
      (r ? ledger.ocfClaimsR : ledger.ocfClaimsUR) += 1;
      (r ? ledger.ocfValueR : ledger.ocfValueUR) += ledger.lastOcf;
    }
    ledger.lastOcf = b.kind == BlockKind::Regulated ? b.ocf : 0.0;
    if (b.kind != BlockKind::Dubious) ++ledger.legalConfirmed;
  }
}

EpisodeStats stats_of(const RewardLedger& l) {
  EpisodeStats s;
  s.ledger = l;
  s.epochs = l.epochs;
  double n = static_cast<double>(l.total());
  if (n > 0) {
    s.gR = (static_cast<double>(l.confirmedR) + l.ocfValueR) / n;
    s.gUR = (static_cast<double>(l.confirmedUR) + l.ocfValueUR) / n;
    s.tF = static_cast<double>(l.legalConfirmed) / n;
    s.ocfPaid = (l.ocfValueR + l.ocfValueUR) / n;
  }
  return s;
}

std::uint64_t GameCtx::mine(Player p, BlockKind kind, bool released) {
  Side side = p == Player::R ? Side::Legal : Side::Other;
  double ocf = p == Player::R && kind == BlockKind::Regulated ? cfg.rho : 0.0;
  return tree.extend_branch(side, kind, ocf, p, released);
}

Game::Game(const GameConfig& cfg, std::uint64_t seed)
    : cfg_(cfg), tree_(cfg.cap, false), ownerRng_(seed), kindRng_(splitmix64(seed ^ 0x5bd1e995ULL)) {
  validate(cfg_);
  strat_[0] = make_strategy(Player::R, cfg_.strategyR, cfg_);
  strat_[1] = make_strategy(Player::UR, cfg_.strategyUR, cfg_);
}

void Game::settle() {
  if (tree_.confirmed().empty()) return;
  settle_rewards(tree_.confirmed(), ledger_);
  tree_.clear_confirmed();
}

void Game::step() {
  ++epoch_;
  GameCtx ctx{tree_, cfg_, kindRng_, epoch_};
  Player owner = draw_owner(ownerRng_, cfg_.alphaR);
  int o = owner == Player::R ? 0 : 1;
  Action a = strat_[o]->act(ctx);
  Action r = strat_[1 - o]->react(ctx, owner);
  strat_[o]->react(ctx, owner);
  tree_.finalize(cfg_.E);
  settle();
  ledger_.epochs = epoch_;
  if (sink_) {
    auto [bo, bl] = tree_.fork_heights();
    sink_(TraceRecord{epoch_, owner, a, r, bo, bl, tree_.pending().size(), tree_.released(), ledger_.confirmedR,
                      ledger_.confirmedUR});
  }
}

void Game::close_fork() {
  tree_.release_all();
  auto [bo, bl] = tree_.fork_heights();
  if (bo > bl)
    tree_.adopt(Side::Legal);
  else
    tree_.adopt(Side::Other);
}

EpisodeStats Game::run(const TraceSink& sink) {
  sink_ = sink;
  const std::uint64_t hard = 2 * cfg_.maxEpochs;
  while (epoch_ < cfg_.maxEpochs) step();
  auto open = [&] {
    auto [bo, bl] = tree_.fork_heights();
    return bo > 0 || bl > 0;
  };
  while (open() && epoch_ < hard) step();
  if (open()) close_fork();
  tree_.settle_pending();
  settle();
  ledger_.orphaned = tree_.orphan_count();
  sink_ = {};
  return stats_of(ledger_);
}

EpisodeStats run_episode(const GameConfig& cfg, std::uint64_t seed, const TraceSink& sink) {
  Game g(cfg, seed);
  return g.run(sink);
}

}  // namespace regchain
