#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace regchain {

enum class BlockKind : std::uint8_t { Regulated, Legal, Dubious };
enum class Player : std::uint8_t { R, UR };
enum class Side : std::uint8_t { Legal, Other };

// result of one finalization step
enum class Winner : std::uint8_t { None, Shared, Legal, Other };

const char* to_string(BlockKind k);
const char* to_string(Player p);
const char* to_string(Side s);
const char* to_string(Winner w);

inline Side opposite(Side s) { return s == Side::Legal ? Side::Other : Side::Legal; }

struct ChainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct KindMismatch : ChainError {
  using ChainError::ChainError;
};
struct UnknownBlock : ChainError {
  using ChainError::ChainError;
};
struct NoOp : ChainError {
  using ChainError::ChainError;
};
struct BranchOverflow : ChainError {
  using ChainError::ChainError;
};

struct Block {
  std::uint64_t id = 0;
  std::uint64_t parent = 0;
  std::uint64_t epoch = 0;
  BlockKind kind = BlockKind::Regulated;
  Player notarizer = Player::R;
  double ocf = 0.0;
  bool released = true;
};

constexpr unsigned kInfiniteDepth = 0;

// Width-two fork above the root. pending holds non-final blocks both sides
// share; the root is the last pending block (or the last confirmed one).
// The legal side is the chain the regulated executor builds on.
class BlockTree {
 public:
  explicit BlockTree(std::size_t cap = 10000, bool keep_archive = true);

  std::uint64_t extend_branch(Side side, BlockKind kind, double ocf);
  std::uint64_t extend_branch(Side side, BlockKind kind, double ocf, Player who,
                              bool released = true);

  // (b_other, b_legal)
  std::pair<std::size_t, std::size_t> fork_heights() const;

  // E = kInfiniteDepth confirms shared blocks only past the cap.
  Winner confirm_if_depth_reached(unsigned E);
  // repeats confirm_if_depth_reached until nothing moves
  std::size_t finalize(unsigned E);

  // The side abandons its branch and the target becomes the root.
  void reset_root(std::uint64_t target, Side abandoning);
  // Same, addressing the target by its offset in the opponent's non-final
  // chain (0 = last confirmed block).
  void reset_root_at(std::size_t offset, Side abandoning);

  // side takes over the released part of the opposite chain
  void adopt(Side side);
  void release(std::size_t count);
  void release_all() { release(legal_.size()); }

  const std::deque<Block>& pending() const { return pending_; }
  const std::vector<Block>& branch(Side s) const { return s == Side::Legal ? legal_ : other_; }
  std::size_t released() const { return released_; }
  std::size_t visible(Side s) const { return s == Side::Legal ? released_ : other_.size(); }
  // non-final chain length seen from a side
  std::size_t chain_length(Side s) const { return pending_.size() + branch(s).size(); }
  bool has_dubious(Side s) const;
  const Block& tip(Side s) const;
  const Block& last_confirmed() const { return last_confirmed_; }
  std::uint64_t root() const { return pending_.empty() ? last_confirmed_.id : pending_.back().id; }

  const std::vector<Block>& confirmed() const { return confirmed_; }
  std::vector<Block> drain_confirmed();
  void clear_confirmed() { confirmed_.clear(); }
  const std::vector<Block>& orphans() const { return orphans_; }
  std::uint64_t orphan_count() const { return orphan_count_; }

  // moves everything still pending to confirmed (end of an episode)
  void settle_pending();

 private:
  void orphan(std::vector<Block>& b);
  void confirm(const Block& b);
  Block make(const Block& parent, BlockKind kind, double ocf, Player who, bool released);

  std::size_t cap_;
  bool keep_archive_;
  std::uint64_t next_id_ = 1;
  Block last_confirmed_{};
  std::deque<Block> pending_;
  std::vector<Block> legal_;
  std::vector<Block> other_;
  std::size_t released_ = 0;
  std::vector<Block> confirmed_;
  std::vector<Block> orphans_;
  std::uint64_t orphan_count_ = 0;
};

}  // namespace regchain
