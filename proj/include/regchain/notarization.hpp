#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <vector>

#include "regchain/licensing.hpp"

namespace regchain {

using uint512 = boost::multiprecision::uint512_t;

struct AttemptBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidLicense : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SampleTooSmall : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// hash images strictly below the threshold succeed
class PuzzleTarget {
 public:
  explicit PuzzleTarget(const uint512& threshold);
  static PuzzleTarget pow2(unsigned k);
  const uint512& threshold() const { return t_; }
  double success_probability() const;
  bool accepts(const Digest& d) const;

 private:
  uint512 t_;
};

uint512 to_integer(const Digest& d);

// deterministic per-miner nonce counter
class NonceStream {
 public:
  explicit NonceStream(std::uint64_t seed);
  std::uint64_t next() { return next_++; }

 private:
  std::uint64_t next_;
};

struct MiningAttemptRecord {
  std::uint64_t nonce = 0;
  std::uint64_t attempts = 0;
  bool succeeded = false;
};

constexpr std::uint64_t kDefaultBudget = 1ULL << 32;

MiningAttemptRecord mine_plain(const Bytes& blockBytes, const PuzzleTarget& target, NonceStream& nonces,
                               std::uint64_t budget = kDefaultBudget);

struct LicenseContext {
  VerifyKey regulator;
  RootRef root;
  std::uint64_t epoch = 0;
};

struct RegulatedMiningResult {
  BlockContent block;
  MiningAttemptRecord record;
};

RegulatedMiningResult mine_rbitcoin(const BlockContent& legalBlock, const ExecutorLicense& license,
                                    const LicenseContext& ctx, const PuzzleTarget& target, NonceStream& nonces,
                                    std::uint64_t budget = kDefaultBudget);

// alpha is applied as a 53-bit fixed-point fraction
bool pos_is_eligible(const VerifyKey& vk, const ExecutorLicense& license, std::uint64_t nonce, std::uint64_t timeSlot,
                     double alpha, const uint512& baseTarget, const LicenseContext& ctx);

struct KsResult {
  double statistic = 0;
  double pValue = 1;
};

double kolmogorov_q(double lambda);
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);
KsResult indistinguishability_test(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b,
                                   std::size_t minSize = 1000);

struct B2Report {
  std::size_t samples = 0;
  unsigned log2Target = 0;
  double meanPlain = 0, meanRegulated = 0, meanControl = 0;
  KsResult same;     // plain vs regulated, same target
  KsResult control;  // plain vs plain at a 4x smaller target
};

B2Report b2_harness(std::size_t samples, unsigned log2Target, std::uint64_t seed);

}  // namespace regchain
