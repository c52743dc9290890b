#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "regchain/engine.hpp"

namespace regchain {

namespace {

Action extend() { return {Action::Type::ExtendOwn, 0}; }

std::size_t legal_len(const BlockTree& t) { return t.visible(Side::Legal); }
std::size_t other_len(const BlockTree& t) { return t.branch(Side::Other).size(); }

class RegFrontier : public Strategy {
 public:
  explicit RegFrontier(bool dubious_ok) : dubiousOk_(dubious_ok) {}
  std::string name() const override { return dubiousOk_ ? "rdub-frontier" : "reg-frontier"; }
  Action act(GameCtx& g) override {
    g.mine(Player::R, BlockKind::Regulated);
    return extend();
  }
  Action react(GameCtx& g, Player) override {
    const auto& t = g.tree;
    if (other_len(t) > t.branch(Side::Legal).size() && (dubiousOk_ || !t.has_dubious(Side::Other))) {
      g.tree.adopt(Side::Legal);
      return {Action::Type::Adopt, 0};
    }
    return {};
  }

 private:
  bool dubiousOk_;
};

class Withhold : public Strategy {
 public:
  explicit Withhold(std::size_t lead) : lead_(lead) {}
  std::string name() const override { return "withhold:" + std::to_string(lead_); }
  Action act(GameCtx& g) override {
    auto& t = g.tree;
    std::size_t a = t.branch(Side::Legal).size(), b = other_len(t);
    if (a > 0 && a == b && t.released() == a) {
      g.mine(Player::R, BlockKind::Regulated);
      t.release_all();
      return {Action::Type::ReleaseUpTo, a + 1};
    }
    g.mine(Player::R, BlockKind::Regulated, false);
    return extend();
  }
  Action react(GameCtx& g, Player owner) override {
    if (owner != Player::UR) return {};
    auto& t = g.tree;
    std::size_t a = t.branch(Side::Legal).size(), b = other_len(t);
    if (b > a) {
      t.adopt(Side::Legal);
      return {Action::Type::Adopt, 0};
    }
    if (a - b < lead_) {
      t.release_all();
      return {Action::Type::ReleaseUpTo, a};
    }
    t.release(b);
    return {Action::Type::ReleaseUpTo, b};
  }

 private:
  std::size_t lead_;
};

class Follower : public Strategy {
 public:
  Follower(bool dubious, double lambda) : dubious_(dubious), lambda_(lambda) {}
  std::string name() const override { return dubious_ ? "dub-frontier" : "leg-frontier"; }
  Action act(GameCtx& g) override {
    auto& t = g.tree;
    Action a = extend();
    if (other_len(t) > 0) {
      bool switch_legal = legal_len(t) > other_len(t);
      if (!dubious_) switch_legal = switch_legal || t.has_dubious(Side::Other) ||
                                    (g.cfg.tieToLegal && legal_len(t) == other_len(t));
      if (switch_legal) {
        t.adopt(Side::Other);
        a = {Action::Type::Capitulate, t.pending().size()};
      }
    } else if (legal_len(t) > 0) {
      t.adopt(Side::Other);
    }
    BlockKind k = BlockKind::Legal;
    if (dubious_ && !g.kindRng.bernoulli(lambda_)) k = BlockKind::Dubious;
    g.mine(Player::UR, k);
    return a;
  }
  Action react(GameCtx& g, Player) override {
    auto& t = g.tree;
    if (legal_len(t) > other_len(t)) {
      t.adopt(Side::Other);
      return {Action::Type::Adopt, 0};
    }
    return {};
  }

 private:
  bool dubious_;
  double lambda_;
};

// When no fork is open: fork below the top run of regulated blocks, at most
// `depth` deep. Keeps extending the fork while fewer than `giveUp` behind.
class AttackInterior : public Strategy {
 public:
  AttackInterior(std::size_t depth, std::size_t give_up, bool cwb) : depth_(depth), giveUp_(give_up), cwb_(cwb) {}
  std::string name() const override {
    if (cwb_) return "cwb:" + std::to_string(giveUp_);
    return "attack-interior:" + std::to_string(depth_) + ":" + std::to_string(giveUp_);
  }
  Action act(GameCtx& g) override {
    auto& t = g.tree;
    if (other_len(t) > 0) {
      std::size_t l = t.branch(Side::Legal).size(), o = other_len(t);
      std::size_t behind = l > o ? l - o : 0;
      if (behind < giveUp_) {
        g.mine(Player::UR, BlockKind::Legal);
        return extend();
      }
    }
    if (other_len(t) > 0 || legal_len(t) > 0) t.adopt(Side::Other);
    const auto& p = t.pending();
    std::size_t m = 0;
    while (m < p.size() && p[p.size() - 1 - m].notarizer == Player::R) ++m;
    std::size_t d = std::min(m, depth_);
    Action a = extend();
    if (d > 0) {
      std::size_t offset = p.size() - d;
      t.reset_root_at(offset, Side::Other);
      a = {Action::Type::Capitulate, offset};
    }
    g.mine(Player::UR, BlockKind::Legal);
    return a;
  }

 private:
  std::size_t depth_, giveUp_;
  bool cwb_;
};

std::vector<std::size_t> parse_args(const std::string& id, std::string& head) {
  std::vector<std::size_t> out;
  std::stringstream ss(id);
  std::string part;
  std::getline(ss, head, ':');
  while (std::getline(ss, part, ':')) {
    std::size_t pos = 0;
    long long v = -1;
    try {
      v = std::stoll(part, &pos);
    } catch (...) {
    }
    if (v < 0 || pos != part.size()) throw std::invalid_argument("bad strategy parameter in '" + id + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

}  // namespace

std::string Action::str() const {
  switch (type) {
    case Type::ExtendOwn: return "extend";
    case Type::Capitulate: return "capitulate:" + std::to_string(arg);
    case Type::ReleaseUpTo: return "release:" + std::to_string(arg);
    case Type::Adopt: return "adopt";
    case Type::Idle: return "idle";
  }
  return "?";
}

std::unique_ptr<Strategy> make_strategy(Player p, const std::string& id, const GameConfig& cfg) {
  std::string head;
  auto args = parse_args(id, head);
  auto nargs = [&](std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi) throw std::invalid_argument("wrong parameter count in '" + id + "'");
  };
  if (p == Player::R) {
    if (head == "reg-frontier" || head == "frontier") {
      nargs(0, 0);
      return std::make_unique<RegFrontier>(false);
    }
    if (head == "rdub-frontier") {
      nargs(0, 0);
      return std::make_unique<RegFrontier>(true);
    }
    if (head == "withhold") {
      nargs(0, 1);
      std::size_t lead = args.empty() ? 2 : args[0];
      if (lead < 2) throw std::invalid_argument("withhold lead must be >= 2");
      if (cfg.releaseModelR != ReleaseModel::SR) throw std::invalid_argument("withhold needs the sr model");
      return std::make_unique<Withhold>(lead);
    }
    throw std::invalid_argument("unknown strategy for R: '" + id + "'");
  }
  if (head == "leg-frontier" || head == "frontier") {
    nargs(0, 0);
    return std::make_unique<Follower>(false, cfg.lambdaLegal);
  }
  if (head == "dub-frontier") {
    nargs(0, 0);
    return std::make_unique<Follower>(true, cfg.lambdaLegal);
  }
  if (head == "cwb") {
    nargs(1, 1);
    if (args[0] < 1) throw std::invalid_argument("cwb needs k >= 1");
    return std::make_unique<AttackInterior>(1, args[0], true);
  }
  if (head == "attack-interior") {
    nargs(1, 2);
    if (args[0] < 1) throw std::invalid_argument("attack-interior needs j >= 1");
    std::size_t k = args.size() > 1 ? args[1] : args[0] + 1;
    if (k < 1) throw std::invalid_argument("attack-interior needs k >= 1");
    return std::make_unique<AttackInterior>(args[0], k, false);
  }
  throw std::invalid_argument("unknown strategy for UR: '" + id + "'");
}

}  // namespace regchain
