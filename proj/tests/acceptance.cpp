// One PASS/FAIL line per criterion. Usage: acceptance [name ...]
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "regchain/analyzer.hpp"
#include "regchain/exact.hpp"
#include "regchain/licensing.hpp"
#include "regchain/notarization.hpp"

using namespace regchain;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... xs) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, xs...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome poly_roots() {
  auto t0 = std::chrono::steady_clock::now();
  double ir = poly_root_ir(), sr = poly_root_sr();
  double dt = seconds_since(t0);
  bool ok = std::fabs(ir - 0.361) < 1e-3 && std::fabs(sr - 0.308) < 1e-3 && dt < 1.0;
  return {ok, fmt("root_ir=%.6f root_sr=%.6f (tol 1e-3) time=%.3fs (<1s)", ir, sr, dt)};
}

Outcome e3_oracle() {
  auto t0 = std::chrono::steady_clock::now();
  double gapHi = 0, gapLo = 0;
  for (double a : {0.46, 0.48, 0.50, 0.55}) gapHi = std::max(gapHi, std::fabs(dp_optimal_gain_E3(a) - closed_form_gain_E3(a)));
  for (double a : {0.1, 0.2, 0.3}) gapLo = std::max(gapLo, std::fabs(dp_optimal_gain_E3(a) - a));
  double dt = seconds_since(t0);
  bool ok = gapHi < 1e-9 && gapLo < 1e-9 && dt < 10.0;
  return {ok, fmt("max|dp-closed|=%.2e max|dp-alpha|=%.2e (tol 1e-9) time=%.2fs (<10s)", gapHi, gapLo, dt)};
}

Outcome fair_share() {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string d;
  for (double a : {0.2, 0.5, 0.8}) {
    GameConfig c;
    c.alphaR = a;
    c.maxEpochs = 1000;
    c.seed = 2024;
    auto led = run_trials(c, 100000);
    SweepRow row = summarize(c, led);
    std::size_t notLegal = 0;
    for (const auto& l : led) notLegal += l.legalConfirmed != l.total();
    bool pass = std::fabs(row.gR - a) < 0.01 && notLegal == 0;
    ok = ok && pass;
    d += fmt("a=%.1f gR=%.5f tF=%.6f episodes_with_tF<1=%zu; ", a, row.gR, row.tF, notLegal);
  }
  double dt = seconds_since(t0);
  ok = ok && dt < 300;
  return {ok, d + fmt("time=%.1fs (<300s)", dt)};
}

constexpr unsigned kDeepE = 100;

BestResponse ur_best(double alphaUR, double rho, std::size_t trials) {
  GameConfig c;
  c.alphaR = 1 - alphaUR;
  c.E = kDeepE;
  c.rho = rho;
  c.maxEpochs = 1000;
  c.seed = 555;
  return best_response(c, Player::UR, DeviationFamily::unregulated(), trials, 3.0);
}

Outcome ir_threshold() {
  auto lo = ur_best(0.40, 0, 4000);
  auto hi = ur_best(0.46, 0, 4000);
  auto th = h_ir_mc(kDeepE, 2000, 1000, 99, 0.005);
  bool ok = !lo.deviationWins && hi.deviationWins && th.estimate >= 0.36 && th.estimate <= 0.46;
  return {ok, fmt("E=%u aUR=0.40 best_gap=%.5f ci=%.5f wins=%d; aUR=0.46 best=%s gap=%.5f ci=%.5f wins=%d; "
                  "h_IR=%.4f in [%.4f,%.4f] (target [0.36,0.46])",
                  kDeepE, lo.gap, lo.ci, lo.deviationWins, hi.table.empty() ? "" : hi.strategy.c_str(), hi.gap, hi.ci,
                  hi.deviationWins, th.estimate, th.lo, th.hi)};
}

Outcome ocf_boundary() {
  auto none = ur_best(0.45, 0, 4000);
  bool attackPays = none.deviationWins && none.strategy != "leg-frontier";
  GameConfig c;
  c.alphaR = 0.55;
  c.E = kDeepE;
  c.maxEpochs = 1000;
  c.seed = 555;
  auto ocf = min_sufficient_ocf(c, DeviationFamily::unregulated(), 4000, 0.05, 4.0);
  double worst = -1;
  for (const auto& cand : ocf.check.table)
    if (cand.strategy != "leg-frontier") worst = std::max(worst, cand.gap);
  bool deterred = ocf.achievable && worst <= 0;
  std::string trend;
  double h = 0;
  for (unsigned E : {6u, 7u, 8u}) {
    h = h_ocf_exact(E).estimate;
    trend += fmt("E=%u:%.4f ", E, h);
  }
  bool boundary = std::fabs(h - 0.5) <= 0.01;
  return {attackPays && deterred && boundary,
          fmt("aR=0.55 rho=0 best=%s gap=%.5f ci=%.5f pays=%d; rho*=%.3f worst_gap=%.5f deterred=%d; "
              "h_ocf exact %s(target 0.50+-0.01) boundary=%d",
              none.strategy.c_str(), none.gap, none.ci, attackPays, ocf.rho, worst, deterred, trend.c_str(), boundary)};
}

Outcome sr_threshold() {
  bool match = true;
  std::string d;
  for (int i = 2; i <= 9; ++i) {
    double a = 0.05 * i;
    GameConfig c;
    c.alphaR = a;
    c.E = kInfiniteDepth;
    c.releaseModelR = ReleaseModel::SR;
    c.strategyR = "withhold:2";
    c.strategyUR = "dub-frontier";
    c.seed = 808;
    auto row = estimate_gains(c, 4000);
    double ref = sm_markov_gain(a, 2);
    bool ok = std::fabs(row.gR - ref) <= 3 * row.ci;
    match = match && ok;
    d += fmt("a=%.2f mc=%.4f markov=%.4f ci=%.4f%s; ", a, row.gR, ref, row.ci, ok ? "" : " MISS");
  }
  auto th = h_sr_mc(4000, 1000, 31, 0.005);
  auto side = [](double a) {
    GameConfig c;
    c.alphaR = a;
    c.E = kInfiniteDepth;
    c.releaseModelR = ReleaseModel::SR;
    c.strategyUR = "dub-frontier";
    c.seed = 77;
    return best_response(c, Player::R, DeviationFamily::regulated_sr(), 4000, 3.0);
  };
  auto below = side(0.28), above = side(0.38);
  bool iff = !below.deviationWins && above.deviationWins;
  bool inRange = th.estimate >= 0.30 && th.estimate <= 0.35;
  return {match && iff && inRange,
          d + fmt("withhold wins at 0.28=%d at 0.38=%d; h_SR=%.4f in [%.4f,%.4f] (target [0.30,0.35])",
                  below.deviationWins, above.deviationWins, th.estimate, th.lo, th.hi)};
}

Outcome b2_ks() {
  auto r = b2_harness(10000, 248, 4242);
  bool ok = r.same.pValue > 0.01 && r.control.pValue < 0.001;
  return {ok, fmt("samples=%zu target=2^%u mean_plain=%.1f mean_reg=%.1f same: D=%.4f p=%.4f (>0.01); "
                  "4x control: mean=%.1f D=%.4f p=%.2e (<0.001)",
                  r.samples, r.log2Target, r.meanPlain, r.meanRegulated, r.same.statistic, r.same.pValue,
                  r.meanControl, r.control.statistic, r.control.pValue)};
}

Outcome licensing() {
  auto reg = keygen(9001);
  std::size_t roundTrips = 0, mutations = 0, accepted = 0, windowOk = 0;
  Rng rng(17);
  for (int i = 0; i < 1000; ++i) {
    auto k = static_cast<std::uint64_t>(rng.uniform() * 1e9);
    RootRef root{hash(Bytes{static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(i >> 8)}), k % 10000};
    std::uint64_t E = 1 + k % 500;
    auto ann = announce_rules(reg, {"F1", "F2"}, {"A1", "A2", "A3"},
                              {{Bytes{1}, Bytes{2}, Bytes{3}}, {Bytes{4}, Bytes{5}, Bytes{6}}}, root, E);
    auto holder = keygen(k);
    Bytes wire;
    bool ok;
    if (i % 2) {
      auto l = issue_executor_license(reg, ann, holder.vk, ann.rules.digest());
      wire = l.serialize();
      auto back = ExecutorLicense::deserialize(wire);
      ok = validate_license(back, root.epoch, root, reg.vk).ok && back.serialize() == wire;
      windowOk += ok && validate_license(back, root.epoch + E, root, reg.vk).reason == LicenseStatus::Expired;
    } else {
      auto l = issue_transactor_license(reg, ann, holder.vk, {"F2"}, {"A1", "A3"});
      wire = l.serialize();
      auto back = TransactorLicense::deserialize(wire);
      ok = validate_license(back, root.epoch, root, reg.vk).ok && back.serialize() == wire;
      windowOk += ok && validate_license(back, root.epoch + E, root, reg.vk).reason == LicenseStatus::Expired;
    }
    roundTrips += ok;
    for (std::size_t p = 0; p < wire.size(); ++p) {
      Bytes m = wire;
      m[p] ^= static_cast<std::uint8_t>(1 + (p * 7 + i) % 255);
      ++mutations;
      try {
        bool v = i % 2 ? validate_license(ExecutorLicense::deserialize(m), root.epoch, root, reg.vk).ok
                       : validate_license(TransactorLicense::deserialize(m), root.epoch, root, reg.vk).ok;
        accepted += v;
      } catch (const ParseError&) {
      }
    }
  }
  bool ok = roundTrips == 1000 && accepted == 0 && windowOk == 1000;
  return {ok, fmt("round_trips=%zu/1000 mutations=%zu accepted=%zu window(e0 ok, e0+E rejected)=%zu/1000", roundTrips,
                  mutations, accepted, windowOk)};
}

const std::map<std::string, std::function<Outcome()>> kCriteria = {
    {"poly-roots", poly_roots}, {"e3-oracle", e3_oracle}, {"fair-share", fair_share}, {"ir-threshold", ir_threshold},
    {"ocf-boundary", ocf_boundary},     {"sr-threshold", sr_threshold},   {"b2-ks", b2_ks},           {"licensing", licensing},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> names;
  bool knownFail = false;  // the line still reads FAIL, only the exit code is relaxed
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--known-fail")
      knownFail = true;
    else
      names.push_back(a);
  }
  if (names.empty())
    for (const auto& [n, f] : kCriteria) names.push_back(n);
  int failed = 0;
  for (const auto& n : names) {
    auto it = kCriteria.find(n);
    if (it == kCriteria.end()) {
      std::printf("FAIL %s: unknown criterion\n", n.c_str());
      ++failed;
      continue;
    }
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = it->second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s [%.1fs]%s\n", o.pass ? "PASS" : "FAIL", n.c_str(), o.detail.c_str(), seconds_since(t0),
                !o.pass && knownFail ? " (known failure, see README)" : "");
    std::fflush(stdout);
    failed += !o.pass && !knownFail;
  }
  return failed ? 1 : 0;
}
