#include "regchain/chain.hpp"

#include <algorithm>

namespace regchain {

const char* to_string(BlockKind k) {
  switch (k) {
    case BlockKind::Regulated: return "regulated";
    case BlockKind::Legal: return "legal";
    case BlockKind::Dubious: return "dubious";
  }
  return "?";
}

const char* to_string(Player p) { return p == Player::R ? "R" : "UR"; }
const char* to_string(Side s) { return s == Side::Legal ? "legal" : "other"; }

const char* to_string(Winner w) {
  switch (w) {
    case Winner::None: return "none";
    case Winner::Shared: return "shared";
    case Winner::Legal: return "legal";
    case Winner::Other: return "other";
  }
  return "?";
}

BlockTree::BlockTree(std::size_t cap, bool keep_archive) : cap_(cap), keep_archive_(keep_archive) {
  last_confirmed_.id = 0;
  last_confirmed_.parent = 0;
  last_confirmed_.epoch = 0;
}

Block BlockTree::make(const Block& parent, BlockKind kind, double ocf, Player who, bool released) {
  Block b;
  b.id = next_id_++;
  b.parent = parent.id;
  b.epoch = parent.epoch + 1;
  b.kind = kind;
  b.notarizer = who;
  b.ocf = kind == BlockKind::Regulated ? ocf : 0.0;
  b.released = released;
  return b;
}

const Block& BlockTree::tip(Side s) const {
  const auto& br = branch(s);
  if (!br.empty()) return br.back();
  if (!pending_.empty()) return pending_.back();
  return last_confirmed_;
}

bool BlockTree::has_dubious(Side s) const {
  const auto& br = branch(s);
  return std::any_of(br.begin(), br.end(), [](const Block& b) { return b.kind == BlockKind::Dubious; });
}

std::uint64_t BlockTree::extend_branch(Side side, BlockKind kind, double ocf) {
  return extend_branch(side, kind, ocf, side == Side::Legal ? Player::R : Player::UR);
}

std::uint64_t BlockTree::extend_branch(Side side, BlockKind kind, double ocf, Player who, bool released) {
  if (side == Side::Legal && kind == BlockKind::Dubious) throw KindMismatch("dubious block on the legal branch");
  if (kind != BlockKind::Regulated && ocf > 0) throw KindMismatch("ocf on a non-regulated block");
  Block b = make(tip(side), kind, ocf, who, side == Side::Other || released);
  if (side == Side::Legal) {
    if (b.released && released_ == legal_.size()) ++released_;
    legal_.push_back(b);
  } else {
    other_.push_back(b);
  }
  if (legal_.size() > cap_ || other_.size() > cap_) throw BranchOverflow("branch longer than cap");
  return b.id;
}

std::pair<std::size_t, std::size_t> BlockTree::fork_heights() const { return {other_.size(), legal_.size()}; }

void BlockTree::confirm(const Block& b) {
  last_confirmed_ = b;
  confirmed_.push_back(b);
}

void BlockTree::orphan(std::vector<Block>& br) {
  orphan_count_ += br.size();
  if (keep_archive_) orphans_.insert(orphans_.end(), br.begin(), br.end());
  br.clear();
}

Winner BlockTree::confirm_if_depth_reached(unsigned E) {
  if (E == kInfiniteDepth) {
    if (pending_.size() > cap_) {
      confirm(pending_.front());
      pending_.pop_front();
      return Winner::Shared;
    }
    return Winner::None;
  }
  std::size_t vl = released_, vo = other_.size();
  std::size_t longest = pending_.size() + std::max(vl, vo);
  if (longest < E) return Winner::None;
  if (!pending_.empty()) {
    confirm(pending_.front());
    pending_.pop_front();
    return Winner::Shared;
  }
  if (vl >= vo) {
    confirm(legal_.front());
    legal_.erase(legal_.begin());
    --released_;
    orphan(other_);
    return Winner::Legal;
  }
  confirm(other_.front());
  other_.erase(other_.begin());
  orphan(legal_);
  released_ = 0;
  return Winner::Other;
}

std::size_t BlockTree::finalize(unsigned E) {
  std::size_t n = 0;
  while (confirm_if_depth_reached(E) != Winner::None) ++n;
  return n;
}

void BlockTree::reset_root(std::uint64_t target, Side abandoning) {
  auto& own = abandoning == Side::Legal ? legal_ : other_;
  for (std::size_t i = 0; i < own.size(); ++i) {
    if (own[i].id != target) continue;
    if (i + 1 == own.size()) throw NoOp("capitulation to own frontier");
    throw UnknownBlock("target on own branch");
  }
  const auto& opp = branch(opposite(abandoning));
  std::size_t offset = 0;
  bool found = target == last_confirmed_.id;
  for (std::size_t i = 0; !found && i < pending_.size(); ++i)
    if (pending_[i].id == target) offset = i + 1, found = true;
  for (std::size_t i = 0; !found && i < opp.size(); ++i)
    if (opp[i].id == target) offset = pending_.size() + i + 1, found = true;
  if (!found) throw UnknownBlock("block not in the non-final tree");
  reset_root_at(offset, abandoning);
}

void BlockTree::reset_root_at(std::size_t offset, Side abandoning) {
  Side opp_side = opposite(abandoning);
  auto& own = abandoning == Side::Legal ? legal_ : other_;
  auto& opp = opp_side == Side::Legal ? legal_ : other_;
  std::size_t visible_opp = visible(opp_side);
  if (offset > pending_.size() + visible_opp) throw UnknownBlock("capitulation target out of range");
  orphan(own);
  if (abandoning == Side::Legal) released_ = 0;
  if (offset <= pending_.size()) {
    std::size_t moved = pending_.size() - offset;
    opp.insert(opp.begin(), pending_.begin() + static_cast<std::ptrdiff_t>(offset), pending_.end());
    pending_.erase(pending_.begin() + static_cast<std::ptrdiff_t>(offset), pending_.end());
    if (opp_side == Side::Legal) released_ += moved;
  } else {
    std::size_t k = offset - pending_.size();
    pending_.insert(pending_.end(), opp.begin(), opp.begin() + static_cast<std::ptrdiff_t>(k));
    opp.erase(opp.begin(), opp.begin() + static_cast<std::ptrdiff_t>(k));
    if (opp_side == Side::Legal) released_ -= k;
  }
}

void BlockTree::adopt(Side side) {
  reset_root_at(pending_.size() + visible(opposite(side)), side);
}

void BlockTree::release(std::size_t count) {
  count = std::min(count, legal_.size());
  for (std::size_t i = released_; i < count; ++i) legal_[i].released = true;
  released_ = std::max(released_, count);
}

std::vector<Block> BlockTree::drain_confirmed() {
  std::vector<Block> out;
  out.swap(confirmed_);
  return out;
}

void BlockTree::settle_pending() {
  while (!pending_.empty()) {
    confirm(pending_.front());
    pending_.pop_front();
  }
}

}  // namespace regchain
