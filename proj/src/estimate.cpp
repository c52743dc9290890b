#include <cmath>
#include <cstdio>
#include <exception>
#include <sstream>

#include "regchain/analyzer.hpp"

namespace regchain {

std::vector<RewardLedger> run_trials(const GameConfig& cfg, std::size_t trials, bool parallel) {
  validate(cfg);
  std::vector<RewardLedger> out(trials);
  const auto n = static_cast<std::int64_t>(trials);
  std::exception_ptr err;
  auto one = [&](std::int64_t i) {
    try {
      out[static_cast<std::size_t>(i)] = run_episode(cfg, trial_seed(cfg.seed, static_cast<std::uint64_t>(i))).ledger;
    } catch (...) {
#pragma omp critical(regchain_trial_error)
      if (!err) err = std::current_exception();
    }
  };
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < n; ++i) one(i);
  } else {
    for (std::int64_t i = 0; i < n; ++i) one(i);
  }
  if (err) std::rethrow_exception(err);
  return out;
}

RatioEstimate ratio_estimate(const std::vector<double>& num, const std::vector<double>& den) {
  RatioEstimate r;
  const std::size_t n = num.size();
  double sn = 0, sd = 0;
  for (std::size_t i = 0; i < n; ++i) sn += num[i], sd += den[i];
  if (sd <= 0) return r;
  r.mean = sn / sd;
  if (n < 2) return r;
  double dbar = sd / static_cast<double>(n), ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double z = (num[i] - r.mean * den[i]) / dbar;
    ss += z * z;
  }
  r.half = 1.959963984540054 * std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
  return r;
}

RatioEstimate paired_difference(const std::vector<double>& numA, const std::vector<double>& denA,
                                const std::vector<double>& numB, const std::vector<double>& denB) {
  RatioEstimate a = ratio_estimate(numA, denA), b = ratio_estimate(numB, denB), r;
  r.mean = a.mean - b.mean;
  const std::size_t n = numA.size();
  if (n < 2) return r;
  double da = 0, db = 0;
  for (std::size_t i = 0; i < n; ++i) da += denA[i], db += denB[i];
  da /= static_cast<double>(n);
  db /= static_cast<double>(n);
  double mz = 0;
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = (numA[i] - a.mean * denA[i]) / da - (numB[i] - b.mean * denB[i]) / db;
    mz += z[i];
  }
  mz /= static_cast<double>(n);
  double ss = 0;
  for (double v : z) ss += (v - mz) * (v - mz);
  r.half = 1.959963984540054 * std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
  return r;
}

double utility(const RewardLedger& l, Player p) {
  return p == Player::R ? static_cast<double>(l.confirmedR) + l.ocfValueR
                        : static_cast<double>(l.confirmedUR) + l.ocfValueUR;
}

std::string model_name(const GameConfig& cfg) {
  if (cfg.releaseModelR == ReleaseModel::SR) return "sr";
  return cfg.rho > 0 ? "ir-ocf" : "ir";
}

std::string csv_header() { return "alphaR,E,rho,model,strategyR,strategyUR,gR,gUR,tF,ci,trials"; }

std::string to_csv(const SweepRow& r) {
  char buf[256];
  std::string e = r.E == kInfiniteDepth ? "inf" : std::to_string(r.E);
  std::snprintf(buf, sizeof buf, "%.6g,%s,%.6g,%s,%s,%s,%.6f,%.6f,%.6f,%.6f,%zu", r.alphaR, e.c_str(), r.rho,
                r.model.c_str(), r.strategyR.c_str(), r.strategyUR.c_str(), r.gR, r.gUR, r.tF, r.ci, r.trials);
  return buf;
}

SweepRow summarize(const GameConfig& cfg, const std::vector<RewardLedger>& ledgers) {
  std::vector<double> r(ledgers.size()), u(ledgers.size()), t(ledgers.size()), lg(ledgers.size());
  for (std::size_t i = 0; i < ledgers.size(); ++i) {
    r[i] = utility(ledgers[i], Player::R);
    u[i] = utility(ledgers[i], Player::UR);
    t[i] = static_cast<double>(ledgers[i].total());
    lg[i] = static_cast<double>(ledgers[i].legalConfirmed);
  }
  auto er = ratio_estimate(r, t), eu = ratio_estimate(u, t), ef = ratio_estimate(lg, t);
  SweepRow row;
  row.alphaR = cfg.alphaR;
  row.E = cfg.E;
  row.rho = cfg.rho;
  row.model = model_name(cfg);
  row.strategyR = cfg.strategyR;
  row.strategyUR = cfg.strategyUR;
  row.gR = er.mean;
  row.gUR = eu.mean;
  row.tF = ef.mean;
  row.ci = std::max(er.half, eu.half);
  row.trials = ledgers.size();
  return row;
}

SweepRow estimate_gains(const GameConfig& cfg, std::size_t trials, bool parallel) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  return summarize(cfg, run_trials(cfg, trials, parallel));
}

}  // namespace regchain
