#include <doctest.h>

#include <random>

#include "regchain/chain.hpp"

using namespace regchain;

namespace {

void grow(BlockTree& t, std::size_t legal, std::size_t other) {
  for (std::size_t i = 0; i < legal; ++i) t.extend_branch(Side::Legal, BlockKind::Regulated, 0.0);
  for (std::size_t i = 0; i < other; ++i) t.extend_branch(Side::Other, BlockKind::Legal, 0.0);
}

std::size_t live(const BlockTree& t) {
  return t.pending().size() + t.branch(Side::Legal).size() + t.branch(Side::Other).size();
}

}  // namespace

TEST_CASE("extend_branch heights and kinds") {
  BlockTree t;
  auto id = t.extend_branch(Side::Legal, BlockKind::Regulated, 0.0);
  CHECK(id == 1);
  CHECK(t.tip(Side::Legal).epoch == 1);
  CHECK(t.fork_heights() == std::pair<std::size_t, std::size_t>{0, 1});

  BlockTree u;
  grow(u, 3, 2);
  CHECK(u.fork_heights() == std::pair<std::size_t, std::size_t>{2, 3});
  u.extend_branch(Side::Other, BlockKind::Dubious, 0.0);
  CHECK(u.fork_heights().first == 3);
  CHECK(u.tip(Side::Other).epoch == 3);
  CHECK(u.has_dubious(Side::Other));

  CHECK_THROWS_AS(u.extend_branch(Side::Legal, BlockKind::Dubious, 0.0), KindMismatch);
  CHECK_THROWS_AS(u.extend_branch(Side::Other, BlockKind::Legal, 0.5), KindMismatch);
}

TEST_CASE("parent links are contiguous") {
  BlockTree t;
  grow(t, 4, 3);
  const auto& l = t.branch(Side::Legal);
  CHECK(l.front().parent == 0);
  for (std::size_t i = 1; i < l.size(); ++i) {
    CHECK(l[i].parent == l[i - 1].id);
    CHECK(l[i].epoch == l[i - 1].epoch + 1);
  }
  CHECK(t.branch(Side::Other).front().parent == 0);
}

TEST_CASE("fresh tree") {
  BlockTree t;
  CHECK(t.fork_heights() == std::pair<std::size_t, std::size_t>{0, 0});
  CHECK(t.confirm_if_depth_reached(3) == Winner::None);
  CHECK(t.root() == 0);
}

TEST_CASE("depth rule on a fork") {
  BlockTree t;
  grow(t, 3, 2);
  CHECK(t.confirm_if_depth_reached(3) == Winner::Legal);
  CHECK(t.branch(Side::Other).empty());
  CHECK(t.orphan_count() == 2);
  CHECK(t.confirmed().size() == 1);
  // sliding window: the rest stays non-final until deeper
  CHECK(t.confirm_if_depth_reached(3) == Winner::None);

  BlockTree u;
  grow(u, 2, 1);
  CHECK(u.confirm_if_depth_reached(5) == Winner::None);

  BlockTree v;
  grow(v, 1, 3);
  CHECK(v.confirm_if_depth_reached(3) == Winner::Other);
  CHECK(v.branch(Side::Legal).empty());
}

TEST_CASE("unreleased legal blocks do not count toward depth") {
  BlockTree t;
  for (int i = 0; i < 3; ++i) t.extend_branch(Side::Legal, BlockKind::Regulated, 0.0, Player::R, false);
  t.extend_branch(Side::Other, BlockKind::Legal, 0.0);
  CHECK(t.released() == 0);
  CHECK(t.confirm_if_depth_reached(3) == Winner::None);
  t.release(2);
  CHECK(t.released() == 2);
  CHECK(t.confirm_if_depth_reached(3) == Winner::None);
  t.release_all();
  CHECK(t.confirm_if_depth_reached(3) == Winner::Legal);
}

TEST_CASE("capitulation") {
  BlockTree t;
  grow(t, 4, 2);
  auto target = t.branch(Side::Legal)[2].id;
  t.reset_root(target, Side::Other);
  CHECK(t.pending().size() == 3);
  CHECK(t.root() == target);
  CHECK(t.fork_heights() == std::pair<std::size_t, std::size_t>{0, 1});
  CHECK(t.orphan_count() == 2);

  BlockTree u;
  grow(u, 4, 2);
  u.reset_root(0, Side::Other);
  CHECK(u.pending().empty());
  CHECK(u.fork_heights() == std::pair<std::size_t, std::size_t>{0, 4});

  BlockTree v;
  grow(v, 4, 2);
  CHECK_THROWS_AS(v.reset_root(v.branch(Side::Other).back().id, Side::Other), NoOp);
  CHECK_THROWS_AS(v.reset_root(v.branch(Side::Other).front().id, Side::Other), UnknownBlock);
  CHECK_THROWS_AS(v.reset_root(9999, Side::Other), UnknownBlock);
}

TEST_CASE("forking below the root pulls shared blocks back") {
  BlockTree t;
  grow(t, 3, 0);
  t.adopt(Side::Other);
  CHECK(t.pending().size() == 3);
  t.reset_root_at(1, Side::Other);
  CHECK(t.pending().size() == 1);
  CHECK(t.branch(Side::Legal).size() == 2);
  CHECK(t.released() == 2);
  t.extend_branch(Side::Other, BlockKind::Dubious, 0.0);
  CHECK(t.tip(Side::Other).parent == t.pending().back().id);
}

TEST_CASE("infinite depth overflows at the cap") {
  BlockTree t(5);
  for (int i = 0; i < 5; ++i) t.extend_branch(Side::Other, BlockKind::Dubious, 0.0);
  CHECK_THROWS_AS(t.extend_branch(Side::Other, BlockKind::Dubious, 0.0), BranchOverflow);
  CHECK(t.confirm_if_depth_reached(kInfiniteDepth) == Winner::None);
}

TEST_CASE("random scripts keep the invariants") {
  std::mt19937_64 g(11);
  for (int run = 0; run < 300; ++run) {
    unsigned E = 2 + g() % 6;
    BlockTree t;
    std::size_t created = 0, sinceL = 0, sinceO = 0;
    for (int step = 0; step < 50; ++step) {
      int op = static_cast<int>(g() % 10);
      if (op < 4) {
        t.extend_branch(Side::Legal, BlockKind::Regulated, 0.0);
        ++created, ++sinceL;
      } else if (op < 8) {
        t.extend_branch(Side::Other, g() % 2 ? BlockKind::Dubious : BlockKind::Legal, 0.0);
        ++created, ++sinceO;
      } else {
        Side s = op == 8 ? Side::Legal : Side::Other;
        t.adopt(s);
        sinceL = t.branch(Side::Legal).size();
        sinceO = t.branch(Side::Other).size();
      }
      CHECK(t.fork_heights() == std::pair<std::size_t, std::size_t>{sinceO, sinceL});
      std::size_t before = t.confirmed().size();
      t.finalize(E);
      std::size_t moved = t.confirmed().size() - before;
      if (moved) {
        sinceL = t.branch(Side::Legal).size();
        sinceO = t.branch(Side::Other).size();
      }
      auto [bo, bl] = t.fork_heights();
      CHECK(t.pending().size() + std::max(bo, bl) < E);
      CHECK(!(bo >= E && bl >= E));
      CHECK(created == t.confirmed().size() + t.orphan_count() + live(t));
    }
  }
}
