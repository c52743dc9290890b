#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace regchain {

// Exhaustive model of the immediate-release game at finite depth E: the
// regulated side plays RegFrontier (ties stay with its own chain), the
// unregulated side may extend its fork or fork at any non-final block.
// Utility is the relative revenue of the unregulated side, each of its
// blocks confirmed directly after a regulated block also claims rho.
class ExactGame {
 public:
  explicit ExactGame(unsigned E);

  unsigned depth() const { return E_; }
  std::size_t size() const { return states_.size(); }

  double optimal_gain(double alpha, double rho = 0.0) const;
  // AttackInterior(j, k); j = 0 is Frontier
  double policy_gain(double alpha, double rho, unsigned j, unsigned k) const;
  static double frontier_gain(double alpha, double rho) { return alpha + rho * alpha * (1.0 - alpha); }
  // best achievable long-run value of (utility - frontier utility * blocks)
  double deviation_margin(double alpha, double rho) const;

 private:
  struct State {
    std::uint8_t n, last;
    std::uint16_t bits;
    std::int8_t j, a;
  };
  struct Tr {
    int to;
    double dr, orr, dc;
  };

  double average(double alpha, double rho, double lambda, const std::vector<int>* policy) const;
  std::vector<int> family_policy(unsigned j, unsigned k) const;

  unsigned E_;
  std::vector<State> states_;
  std::vector<Tr> opp_;
  std::vector<std::vector<Tr>> dev_;  // [own extension if a > 0] then fork positions 0..n
};

}  // namespace regchain
