#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "regchain/analyzer.hpp"

using namespace regchain;

namespace {

double seconds_of(const GameConfig& cfg, std::size_t trials, bool parallel, std::vector<RewardLedger>& out) {
  auto t0 = std::chrono::steady_clock::now();
  out = run_trials(cfg, trials, parallel);
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool same(const std::vector<RewardLedger>& a, const std::vector<RewardLedger>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].confirmedR != b[i].confirmedR || a[i].confirmedUR != b[i].confirmedUR ||
        a[i].ocfClaimsR != b[i].ocfClaimsR || a[i].ocfClaimsUR != b[i].ocfClaimsUR ||
        a[i].orphaned != b[i].orphaned)
      return false;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t trials = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 20000;
  std::printf("threads=%d trials=%zu epochs=1000\n", omp_get_max_threads(), trials);
  std::printf("%-34s %10s %10s %8s %s\n", "config", "serial_s", "omp_s", "speedup", "identical");
  struct Case {
    const char* label;
    GameConfig cfg;
  } cases[3];
  cases[0].label = "ir frontier a=0.5 E=3";
  cases[1].label = "ir cwb:3 a=0.54 E=7";
  cases[1].cfg.alphaR = 0.54, cases[1].cfg.E = 7, cases[1].cfg.strategyUR = "cwb:3";
  cases[2].label = "sr withhold:2 a=0.4 E=inf";
  cases[2].cfg.alphaR = 0.4, cases[2].cfg.E = kInfiniteDepth, cases[2].cfg.releaseModelR = ReleaseModel::SR;
  cases[2].cfg.strategyR = "withhold:2", cases[2].cfg.strategyUR = "dub-frontier";
  int bad = 0;
  for (auto& c : cases) {
    std::vector<RewardLedger> a, b;
    double ts = seconds_of(c.cfg, trials, false, a);
    double tp = seconds_of(c.cfg, trials, true, b);
    bool ok = same(a, b);
    bad += !ok;
    std::printf("%-34s %10.3f %10.3f %8.2f %s\n", c.label, ts, tp, ts / tp, ok ? "yes" : "NO");
  }
  return bad ? 1 : 0;
}
