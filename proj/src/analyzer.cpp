#include "regchain/analyzer.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <sstream>

#include "regchain/exact.hpp"

namespace regchain {

DeviationFamily DeviationFamily::unregulated(unsigned maxParam) {
  DeviationFamily f;
  f.frontier = "leg-frontier";
  f.members.push_back(f.frontier);
  for (unsigned k = 2; k <= maxParam; ++k) f.members.push_back("cwb:" + std::to_string(k));
  for (unsigned j = 2; j <= maxParam; ++j) f.members.push_back("attack-interior:" + std::to_string(j));
  return f;
}

DeviationFamily DeviationFamily::regulated_sr(unsigned maxLead) {
  DeviationFamily f;
  f.frontier = "rdub-frontier";
  f.members.push_back(f.frontier);
  for (unsigned l = 2; l <= maxLead; ++l) f.members.push_back("withhold:" + std::to_string(l));
  return f;
}

BestResponse best_response(const GameConfig& base, Player deviator, const DeviationFamily& family,
                           std::size_t trials, double z, bool parallel) {
  if (family.members.empty()) throw std::invalid_argument("empty deviation family");
  auto columns = [&](const std::string& s) {
    GameConfig c = base;
    (deviator == Player::R ? c.strategyR : c.strategyUR) = s;
    auto led = run_trials(c, trials, parallel);
    std::pair<std::vector<double>, std::vector<double>> out;
    for (const auto& l : led) {
      out.first.push_back(utility(l, deviator));
      out.second.push_back(static_cast<double>(l.total()));
    }
    return out;
  };
  auto front = columns(family.frontier);
  BestResponse br;
  br.frontierGain = ratio_estimate(front.first, front.second).mean;
  br.strategy = family.frontier;
  br.gain = br.frontierGain;
  const Candidate* best = nullptr;
  for (const auto& m : family.members) {
    Candidate c;
    c.strategy = m;
    if (m == family.frontier) {
      c.gain = br.frontierGain;
    } else {
      auto col = columns(m);
      c.gain = ratio_estimate(col.first, col.second).mean;
      auto d = paired_difference(col.first, col.second, front.first, front.second);
      c.gap = d.mean;
      c.ci = d.half;
    }
    br.table.push_back(c);
  }
  for (const auto& c : br.table)
    if (c.strategy != family.frontier && (!best || c.gap > best->gap)) best = &c;
  if (best) {
    br.gap = best->gap;
    br.ci = best->ci;
    br.deviationWins = best->gap > z * best->ci;
    if (br.deviationWins) {
      br.strategy = best->strategy;
      br.gain = best->gain;
    }
  }
  return br;
}

ThresholdResult find_threshold(const std::function<bool(double)>& predicate, double lo, double hi, double tol,
                               const std::string& name, const std::string& method, unsigned probes) {
  if (!(lo < hi)) throw std::invalid_argument("find_threshold needs lo < hi");
  probes = std::max(probes, 2u);
  std::vector<double> xs(probes);
  std::vector<bool> ys(probes);
  for (unsigned i = 0; i < probes; ++i) {
    xs[i] = lo + (hi - lo) * i / (probes - 1);
    ys[i] = predicate(xs[i]);
  }
  for (unsigned i = 1; i < probes; ++i)
    if (ys[i - 1] && !ys[i]) throw NonMonotoneDetected("predicate flips back between probes");
  if (ys.front() || !ys.back()) throw NoSignChange("predicate does not flip inside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  unsigned k = 1;
  while (!ys[k]) ++k;
  double a = xs[k - 1], b = xs[k];
  while (b - a > tol) {
    double m = 0.5 * (a + b);
    (predicate(m) ? b : a) = m;
  }
  ThresholdResult r;
  r.name = name;
  r.lo = a;
  r.hi = b;
  r.estimate = 0.5 * (a + b);
  r.method = method;
  return r;
}

double poly_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
  double fa = f(lo), fb = f(hi);
  if (fa == 0) return lo;
  if (fb == 0) return hi;
  if ((fa < 0) == (fb < 0)) throw NoSignChange("no sign change over the interval");
  auto done = [tol](double a, double b) { return std::fabs(b - a) <= tol; };
  auto r = boost::math::tools::bisect(f, lo, hi, done);
  return 0.5 * (r.first + r.second);
}

double poly_root_ir() {
  return poly_root([](double a) { return 2 * a * a - (1 - a) * (1 - a) * (1 - a); }, 0.0, 1.0);
}

double poly_root_sr() {
  return poly_root([](double a) { return a * a * a - 6 * a * a + 5 * a - 1; }, 0.0, 0.5);
}

double closed_form_gain_E3(double a) {
  double a2 = a * a, a3 = a2 * a, a4 = a3 * a;
  return a2 * (2 + 2 * a - 5 * a2 + 2 * a3) / (1 - a2 + 2 * a3 - a4);
}

double dp_optimal_gain(double alpha1, unsigned E, double rho) { return ExactGame(E).optimal_gain(alpha1, rho); }

double dp_optimal_gain_E3(double alpha1) {
  static const ExactGame game(3);
  return game.optimal_gain(alpha1, 0.0);
}

// states: 0, 0' (tie race), leads 1..N
double sm_markov_gain(double alpha, unsigned lead, unsigned N) {
  if (!(alpha > 0 && alpha < 0.5)) throw std::invalid_argument("sm_markov_gain needs 0 < alpha < 0.5");
  if (lead < 2) throw std::invalid_argument("lead threshold must be >= 2");
  const int S = static_cast<int>(N) + 2;
  // row 0: lead 0, row 1: tie race, row 1 + l: lead l
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(S, S);
  Eigen::VectorXd rR = Eigen::VectorXd::Zero(S), rT = Eigen::VectorXd::Zero(S);
  const double a = alpha, b = 1 - alpha;
  P(0, 2) += a;
  P(0, 0) += b;
  rT(0) += b;
  P(1, 0) += 1;
  rR(1) += 2 * a;
  rT(1) += 2;
  for (int l = 1; l <= static_cast<int>(N); ++l) {
    int row = 1 + l;
    P(row, std::min(row + 1, S - 1)) += a;
    if (l == 1) {
      P(row, 1) += b;
    } else if (l <= static_cast<int>(lead)) {
      P(row, 0) += b;
      rR(row) += b * l;
      rT(row) += b * l;
    } else {
      P(row, row - 1) += b;
      rR(row) += b;
      rT(row) += b;
    }
  }
  Eigen::MatrixXd A = P.transpose() - Eigen::MatrixXd::Identity(S, S);
  A.row(S - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(S);
  rhs(S - 1) = 1;
  Eigen::VectorXd pi = A.partialPivLu().solve(rhs);
  return pi.dot(rR) / pi.dot(rT);
}

OcfSearch min_sufficient_ocf(const GameConfig& base, const DeviationFamily& family, std::size_t trials, double tol,
                             double cap) {
  auto check = [&](double rho) {
    GameConfig c = base;
    c.rho = rho;
    return best_response(c, Player::UR, family, trials);
  };
  auto deterred = [](const BestResponse& br) {
    return std::all_of(br.table.begin(), br.table.end(), [](const Candidate& c) { return c.gap <= 0; });
  };
  OcfSearch out;
  auto at0 = check(0.0);
  if (deterred(at0)) {
    out.achievable = true;
    out.check = at0;
    return out;
  }
  auto atCap = check(cap);
  if (!deterred(atCap)) {
    out.rho = cap;
    out.check = atCap;
    return out;
  }
  double lo = 0, hi = cap;
  BestResponse atHi = atCap;
  while (hi - lo > tol) {
    double m = 0.5 * (lo + hi);
    auto br = check(m);
    if (deterred(br)) {
      hi = m;
      atHi = br;
    } else {
      lo = m;
    }
  }
  out.rho = hi;
  out.achievable = true;
  out.check = atHi;
  return out;
}

ThresholdResult h_ir_exact(unsigned E) {
  ExactGame g(E);
  auto pays = [&](double a) { return g.deviation_margin(a, 0.0) > 1e-11; };
  auto r = find_threshold(pays, 0.30, 0.60, 1e-6, "h_IR", "exact", 4);
  r.note = "E=" + std::to_string(E) + ", optimal deviation over all fork actions";
  return r;
}

ThresholdResult h_ir_mc(unsigned E, std::size_t trials, std::size_t epochs, std::uint64_t seed, double tol) {
  GameConfig c;
  c.E = E;
  c.maxEpochs = epochs;
  c.seed = seed;
  auto fam = DeviationFamily::unregulated();
  auto pays = [&](double aUR) {
    GameConfig k = c;
    k.alphaR = 1 - aUR;
    return best_response(k, Player::UR, fam, trials).gap > 0;
  };
  auto r = find_threshold(pays, 0.30, 0.50, tol, "h_IR", "bisection+MC", 5);
  r.note = "E=" + std::string(E == kInfiniteDepth ? "inf" : std::to_string(E)) + ", deviation family, in alpha_UR";
  return r;
}

ThresholdResult h_ocf_exact(unsigned E) {
  ExactGame g(E);
  auto min_margin = [&](double aUR) {
    auto m = [&](double rho) { return g.deviation_margin(aUR, rho); };
    double best = 1e300, arg = 0;
    for (double rho = 0; rho <= 3.0 + 1e-12; rho += 0.05) {
      double v = m(rho);
      if (v < best) best = v, arg = rho;
    }
    double lo = std::max(0.0, arg - 0.05), hi = arg + 0.05;
    for (int k = 0; k < 40; ++k) {
      double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
      if (m(m1) < m(m2))
        hi = m2;
      else
        lo = m1;
    }
    return std::min(best, m(0.5 * (lo + hi)));
  };
  auto deterred = [&](double aR) { return min_margin(1 - aR) <= 1e-9; };
  auto r = find_threshold(deterred, 0.40, 0.55, 1e-4, "h_ocf_IR", "exact", 4);
  r.note = "E=" + std::to_string(E) + ", rho searched on [0,3], optimal deviation over all fork actions";
  return r;
}

ThresholdResult h_sr_mc(std::size_t trials, std::size_t epochs, std::uint64_t seed, double tol) {
  GameConfig c;
  c.E = kInfiniteDepth;
  c.releaseModelR = ReleaseModel::SR;
  c.strategyUR = "dub-frontier";
  c.maxEpochs = epochs;
  c.seed = seed;
  auto fam = DeviationFamily::regulated_sr();
  auto pays = [&](double aR) {
    GameConfig k = c;
    k.alphaR = aR;
    return best_response(k, Player::R, fam, trials).gap > 0;
  };
  auto r = find_threshold(pays, 0.25, 0.45, tol, "h_SR", "bisection+MC", 5);
  r.note = "E=inf, withholding family against DubFrontier, in alpha_R";
  return r;
}

std::vector<HirPoint> sweep_hIR_vs_E(const std::vector<unsigned>& Evalues, std::size_t trials, std::size_t epochs,
                                     std::uint64_t seed, unsigned exactUpTo) {
  std::vector<HirPoint> out;
  for (unsigned E : Evalues) {
    if (E != kInfiniteDepth && E < 2) throw std::invalid_argument("E must be >= 2");
    if (E != kInfiniteDepth && E <= exactUpTo)
      out.push_back({E, h_ir_exact(E)});
    else
      out.push_back({E, h_ir_mc(E, trials, epochs, seed)});
  }
  return out;
}

}  // namespace regchain
