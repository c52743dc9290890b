#include "regchain/notarization.hpp"

#include <cmath>

#include "regchain/engine.hpp"

namespace regchain {

namespace {

const uint512 kTwo256 = uint512(1) << 256;

Digest hash_nonce(std::uint64_t nonce, const Bytes& body) {
  Bytes buf;
  buf.reserve(8 + body.size());
  for (int i = 7; i >= 0; --i) buf.push_back(static_cast<std::uint8_t>(nonce >> (8 * i)));
  buf.insert(buf.end(), body.begin(), body.end());
  return hash(buf);
}

void check_license(const ExecutorLicense& l, const LicenseContext& ctx) {
  auto c = validate_license(l, ctx.epoch, ctx.root, ctx.regulator);
  if (!c) throw InvalidLicense(std::string("executor license rejected: ") + to_string(c.reason));
}

}  // namespace

uint512 to_integer(const Digest& d) {
  uint512 v = 0;
  for (std::uint8_t b : d) v = (v << 8) | b;
  return v;
}

PuzzleTarget::PuzzleTarget(const uint512& threshold) : t_(threshold) {
  if (t_ == 0 || t_ > kTwo256) throw std::invalid_argument("target must be in (0, 2^256]");
}

PuzzleTarget PuzzleTarget::pow2(unsigned k) {
  if (k > 256) throw std::invalid_argument("target exponent above 256");
  return PuzzleTarget(uint512(1) << k);
}

double PuzzleTarget::success_probability() const {
  return std::ldexp(t_.convert_to<double>(), -256);
}

bool PuzzleTarget::accepts(const Digest& d) const { return to_integer(d) < t_; }

NonceStream::NonceStream(std::uint64_t seed) : next_(splitmix64(seed)) {}

MiningAttemptRecord mine_plain(const Bytes& blockBytes, const PuzzleTarget& target, NonceStream& nonces,
                               std::uint64_t budget) {
  MiningAttemptRecord r;
  while (r.attempts < budget) {
    std::uint64_t n = nonces.next();
    ++r.attempts;
    if (target.accepts(hash_nonce(n, blockBytes))) {
      r.nonce = n;
      r.succeeded = true;
      return r;
    }
  }
  throw AttemptBudgetExceeded("no nonce found within " + std::to_string(budget) + " attempts");
}

RegulatedMiningResult mine_rbitcoin(const BlockContent& legalBlock, const ExecutorLicense& license,
                                    const LicenseContext& ctx, const PuzzleTarget& target, NonceStream& nonces,
                                    std::uint64_t budget) {
  check_license(license, ctx);
  RegulatedMiningResult out;
  out.block = legalBlock;
  Digest d = license.digest();
  out.block.coinbase.assign(d.begin(), d.end());
  out.record = mine_plain(out.block.serialize(), target, nonces, budget);
  return out;
}

bool pos_is_eligible(const VerifyKey& vk, const ExecutorLicense& license, std::uint64_t nonce, std::uint64_t timeSlot,
                     double alpha, const uint512& baseTarget, const LicenseContext& ctx) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0,1]");
  check_license(license, ctx);
  Writer w;
  w.bytes(vk.bytes).bytes(license.serialize()).u64(nonce);
  using big = boost::multiprecision::cpp_int;
  big fixed = static_cast<std::uint64_t>(std::llround(alpha * 0x1.0p53));
  big window = (big(baseTarget) * timeSlot * fixed) >> 53;
  return big(to_integer(hash(w.out()))) < window;
}

B2Report b2_harness(std::size_t samples, unsigned log2Target, std::uint64_t seed) {
  if (log2Target < 2) throw std::invalid_argument("target too small for the control");
  B2Report rep;
  rep.samples = samples;
  rep.log2Target = log2Target;
  auto reg = keygen(seed ^ 0x52454755ULL);
  auto miner = keygen(seed ^ 0x4d494e45ULL);
  RootRef root{hash(Bytes{'g', 'e', 'n'}), 0};
  auto ann = announce_rules(reg, {"F1"}, {"A1"}, {{Bytes{'r'}}}, root, 1u << 20);
  auto beta = issue_executor_license(reg, ann, miner.vk, ann.rules.digest());
  LicenseContext ctx{reg.vk, root, 0};
  BlockContent legal;
  legal.coinbase = Bytes(32, 0);
  legal.txs.push_back(Transaction{Bytes{'t', 'x'}, std::nullopt, {}});
  Bytes plainBytes = legal.serialize();
  auto target = PuzzleTarget::pow2(log2Target);
  auto control = PuzzleTarget::pow2(log2Target - 2);
  std::vector<std::uint64_t> a(samples), b(samples), c(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    NonceStream sa(trial_seed(seed, 3 * i)), sb(trial_seed(seed, 3 * i + 1)), sc(trial_seed(seed, 3 * i + 2));
    a[i] = mine_plain(plainBytes, target, sa).attempts;
    b[i] = mine_rbitcoin(legal, beta, ctx, target, sb).record.attempts;
    c[i] = mine_plain(plainBytes, control, sc).attempts;
  }
  auto mean = [](const std::vector<std::uint64_t>& v) {
    double s = 0;
    for (auto x : v) s += static_cast<double>(x);
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
  };
  rep.meanPlain = mean(a);
  rep.meanRegulated = mean(b);
  rep.meanControl = mean(c);
  rep.same = indistinguishability_test(a, b);
  rep.control = indistinguishability_test(a, c);
  return rep;
}

}  // namespace regchain
