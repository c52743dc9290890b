#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "regchain/engine.hpp"

namespace regchain {

// ---- estimation ----

// per-trial ledgers, index-ordered; parallel and serial runs are identical
std::vector<RewardLedger> run_trials(const GameConfig& cfg, std::size_t trials, bool parallel = true);

struct RatioEstimate {
  double mean = 0;
  double half = 0;  // 95% half-width
};

// pooled ratio sum(num)/sum(den) with a delta-method interval
RatioEstimate ratio_estimate(const std::vector<double>& num, const std::vector<double>& den);

// difference of two pooled ratios over paired trials
RatioEstimate paired_difference(const std::vector<double>& numA, const std::vector<double>& denA,
                                const std::vector<double>& numB, const std::vector<double>& denB);

double utility(const RewardLedger& l, Player p);

struct SweepRow {
  double alphaR = 0;
  unsigned E = 0;
  double rho = 0;
  std::string model;
  std::string strategyR, strategyUR;
  double gR = 0, gUR = 0, tF = 0;
  double ci = 0;
  std::size_t trials = 0;
};

std::string model_name(const GameConfig& cfg);
std::string csv_header();
std::string to_csv(const SweepRow& r);

SweepRow summarize(const GameConfig& cfg, const std::vector<RewardLedger>& ledgers);
SweepRow estimate_gains(const GameConfig& cfg, std::size_t trials, bool parallel = true);

// ---- best responses ----

struct DeviationFamily {
  std::string frontier;
  std::vector<std::string> members;  // frontier first

  static DeviationFamily unregulated(unsigned maxParam = 5);
  static DeviationFamily regulated_sr(unsigned maxLead = 5);
};

struct Candidate {
  std::string strategy;
  double gain = 0;
  double gap = 0;  // gain - frontier gain, paired trials
  double ci = 0;
};

struct BestResponse {
  std::string strategy;  // frontier unless some member wins beyond z half-widths
  double gain = 0;
  double frontierGain = 0;
  double gap = 0;
  double ci = 0;
  bool deviationWins = false;
  std::vector<Candidate> table;
};

BestResponse best_response(const GameConfig& base, Player deviator, const DeviationFamily& family,
                           std::size_t trials, double z = 3.0, bool parallel = true);

// ---- thresholds ----

struct NonMonotoneDetected : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoSignChange : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotAchievable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ThresholdResult {
  std::string name;
  double estimate = 0;
  double lo = 0, hi = 0;
  std::string method;
  std::string note;
};

// predicate is false below the flip point and true above it
ThresholdResult find_threshold(const std::function<bool(double)>& predicate, double lo, double hi, double tol,
                               const std::string& name = "", const std::string& method = "bisection+MC",
                               unsigned probes = 5);

double poly_root(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-12);
double poly_root_ir();  // 2a^2 - (1-a)^3
double poly_root_sr();  // a^3 - 6a^2 + 5a - 1

double closed_form_gain_E3(double alpha1);
double dp_optimal_gain_E3(double alpha1);
double dp_optimal_gain(double alpha1, unsigned E, double rho = 0.0);

// relative revenue of Withhold(L) against DubFrontier from the lead-state chain
double sm_markov_gain(double alphaR, unsigned lead = 2, unsigned truncate = 400);

struct OcfSearch {
  double rho = 0;
  bool achievable = false;
  BestResponse check;  // best response at the returned rho
};

OcfSearch min_sufficient_ocf(const GameConfig& base, const DeviationFamily& family, std::size_t trials,
                             double tol = 0.05, double cap = 4.0);

// unregulated deviation threshold in alpha_UR at depth E
ThresholdResult h_ir_exact(unsigned E);
ThresholdResult h_ir_mc(unsigned E, std::size_t trials, std::size_t epochs, std::uint64_t seed, double tol = 0.005);
// regulated threshold in alpha_R above which some rho deters every deviation
ThresholdResult h_ocf_exact(unsigned E);
ThresholdResult h_sr_mc(std::size_t trials, std::size_t epochs, std::uint64_t seed, double tol = 0.005);

struct HirPoint {
  unsigned E;
  ThresholdResult result;
};
std::vector<HirPoint> sweep_hIR_vs_E(const std::vector<unsigned>& Evalues, std::size_t trials, std::size_t epochs,
                                     std::uint64_t seed, unsigned exactUpTo = 9);

}  // namespace regchain
