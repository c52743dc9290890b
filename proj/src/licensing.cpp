#include "regchain/licensing.hpp"

#include <algorithm>

namespace regchain {

namespace {

constexpr const char* kTransactor = "TRANSACTOR";
constexpr const char* kExecutor = "EXECUTOR";

void put_root(Writer& w, const RootRef& r) { w.bytes(r.id).u64(r.epoch); }
RootRef get_root(Reader& r) {
  RootRef out;
  out.id = r.fixed<32>();
  out.epoch = r.u64();
  return out;
}

void put_list(Writer& w, const std::vector<std::string>& v) {
  w.u64(v.size());
  for (const auto& s : v) w.str(s);
}
std::vector<std::string> get_list(Reader& r) {
  std::uint64_t n = r.u64();
  std::vector<std::string> v;
  for (std::uint64_t i = 0; i < n; ++i) v.push_back(r.str());
  return v;
}

bool subset(const std::vector<std::string>& a, const std::vector<std::string>& of) {
  return std::all_of(a.begin(), a.end(), [&](const std::string& x) { return std::find(of.begin(), of.end(), x) != of.end(); });
}

template <class L>
LicenseCheck check_common(const L& l, std::uint64_t epoch, const RootRef& root, const VerifyKey& regulator) {
  if (l.protocol != kProtocolTag) return {false, LicenseStatus::WrongProtocol};
  if (!verify(regulator, l.body(), l.signature)) return {false, LicenseStatus::BadSignature};
  if (!(l.root == root)) return {false, LicenseStatus::RootMismatch};
  if (epoch < l.root.epoch) return {false, LicenseStatus::NotYetValid};
  if (epoch - l.root.epoch >= l.window) return {false, LicenseStatus::Expired};
  return {true, LicenseStatus::Valid};
}

}  // namespace

const char* to_string(LicenseStatus s) {
  switch (s) {
    case LicenseStatus::Valid: return "valid";
    case LicenseStatus::BadSignature: return "bad-signature";
    case LicenseStatus::RootMismatch: return "root-mismatch";
    case LicenseStatus::NotYetValid: return "not-yet-valid";
    case LicenseStatus::Expired: return "expired";
    case LicenseStatus::WrongProtocol: return "wrong-protocol";
  }
  return "?";
}

Bytes RulesMatrix::serialize() const {
  Writer w;
  put_list(w, jurisdictions);
  put_list(w, assets);
  for (const auto& row : rules)
    for (const auto& p : row) w.bytes(p);
  return w.out();
}

Bytes Announcement::body() const {
  Writer w;
  w.str(protocol);
  put_root(w, root);
  w.u64(window).bytes(rules.serialize());
  return w.out();
}

Bytes TransactorLicense::body() const {
  Writer w;
  w.str(protocol);
  put_root(w, root);
  w.u64(window).bytes(holder.bytes).str(kTransactor);
  put_list(w, jurisdictions);
  put_list(w, assets);
  return w.out();
}

Bytes TransactorLicense::serialize() const {
  Writer w;
  w.bytes(body()).bytes(signature);
  return w.out();
}

TransactorLicense TransactorLicense::deserialize(const Bytes& b) {
  Reader outer(b);
  Bytes body = outer.bytes();
  TransactorLicense l;
  l.signature = outer.bytes();
  if (!outer.done()) throw ParseError("trailing bytes");
  Reader r(body);
  l.protocol = r.str();
  l.root = get_root(r);
  l.window = r.u64();
  l.holder.bytes = r.fixed<32>();
  if (r.str() != kTransactor) throw ParseError("not a transactor license");
  l.jurisdictions = get_list(r);
  l.assets = get_list(r);
  if (!r.done()) throw ParseError("trailing bytes");
  return l;
}

Bytes ExecutorLicense::body() const {
  Writer w;
  w.str(protocol);
  put_root(w, root);
  w.u64(window).bytes(holder.bytes).str(kExecutor).bytes(rulesDigest);
  return w.out();
}

Bytes ExecutorLicense::serialize() const {
  Writer w;
  w.bytes(body()).bytes(signature);
  return w.out();
}

ExecutorLicense ExecutorLicense::deserialize(const Bytes& b) {
  Reader outer(b);
  Bytes body = outer.bytes();
  ExecutorLicense l;
  l.signature = outer.bytes();
  if (!outer.done()) throw ParseError("trailing bytes");
  Reader r(body);
  l.protocol = r.str();
  l.root = get_root(r);
  l.window = r.u64();
  l.holder.bytes = r.fixed<32>();
  if (r.str() != kExecutor) throw ParseError("not an executor license");
  l.rulesDigest = r.fixed<32>();
  if (!r.done()) throw ParseError("trailing bytes");
  return l;
}

Announcement announce_rules(const SigningKey& regulator, const std::vector<std::string>& jurisdictions,
                            const std::vector<std::string>& assets, const std::vector<std::vector<Bytes>>& payloads,
                            const RootRef& root, std::uint64_t window) {
  if (jurisdictions.empty() || assets.empty()) throw EmptyDomain("no jurisdictions or no assets");
  if (payloads.size() != jurisdictions.size()) throw LicenseError("rules matrix row count mismatch");
  for (const auto& row : payloads) {
    if (row.size() != assets.size()) throw LicenseError("rules matrix column count mismatch");
    for (const auto& p : row)
      if (p.empty()) throw LicenseError("empty rule payload");
  }
  Announcement a;
  a.root = root;
  a.window = window;
  a.rules = RulesMatrix{jurisdictions, assets, payloads};
  a.signature = sign(regulator, a.body());
  return a;
}

bool verify_announcement(const Announcement& a, const VerifyKey& regulator) {
  return a.protocol == kProtocolTag && verify(regulator, a.body(), a.signature);
}

TransactorLicense issue_transactor_license(const SigningKey& regulator, const Announcement& a, const VerifyKey& holder,
                                           const std::vector<std::string>& jurisdictions,
                                           const std::vector<std::string>& assets) {
  if (!subset(jurisdictions, a.rules.jurisdictions) || !subset(assets, a.rules.assets))
    throw ScopeNotSubset("license scope outside the announced rules");
  TransactorLicense l;
  l.root = a.root;
  l.window = a.window;
  l.holder = holder;
  l.jurisdictions = jurisdictions;
  l.assets = assets;
  l.signature = sign(regulator, l.body());
  return l;
}

ExecutorLicense issue_executor_license(const SigningKey& regulator, const Announcement& a, const VerifyKey& holder,
                                       const Digest& rulesDigest) {
  if (rulesDigest != a.rules.digest()) throw DigestMismatch("rules digest does not match the announcement");
  ExecutorLicense l;
  l.root = a.root;
  l.window = a.window;
  l.holder = holder;
  l.rulesDigest = rulesDigest;
  l.signature = sign(regulator, l.body());
  return l;
}

LicenseCheck validate_license(const TransactorLicense& l, std::uint64_t currentEpoch, const RootRef& root,
                              const VerifyKey& regulator) {
  return check_common(l, currentEpoch, root, regulator);
}

LicenseCheck validate_license(const ExecutorLicense& l, std::uint64_t currentEpoch, const RootRef& root,
                              const VerifyKey& regulator) {
  return check_common(l, currentEpoch, root, regulator);
}

Bytes Transaction::script() const {
  Writer w;
  w.bytes(license ? license->serialize() : Bytes{});
  w.str(receipt.jurisdiction).str(receipt.asset).bytes(receipt.proof);
  return w.out();
}

TxClass classify_transaction(const Transaction& tx, const Announcement& a, std::uint64_t currentEpoch,
                             const VerifyKey& regulator) {
  if (!tx.license) return TxClass::Dubious;
  const auto& l = *tx.license;
  if (!validate_license(l, currentEpoch, a.root, regulator)) return TxClass::Dubious;
  bool f = std::find(l.jurisdictions.begin(), l.jurisdictions.end(), tx.receipt.jurisdiction) != l.jurisdictions.end();
  bool as = std::find(l.assets.begin(), l.assets.end(), tx.receipt.asset) != l.assets.end();
  return f && as ? TxClass::Legal : TxClass::Dubious;
}

Bytes BlockContent::serialize() const {
  Writer w;
  w.bytes(coinbase).bytes(header).u64(txs.size());
  for (const auto& tx : txs) w.bytes(tx.payload).bytes(tx.script());
  return w.out();
}

BlockKind classify_block(const BlockContent& block, const Registry& reg, std::uint64_t currentEpoch) {
  for (const auto& tx : block.txs)
    if (classify_transaction(tx, reg.announcement, currentEpoch, reg.regulator) == TxClass::Dubious)
      return BlockKind::Dubious;
  for (const auto& l : reg.executors) {
    Bytes s = l.serialize();
    Digest d = hash(s);
    bool in_coinbase = block.coinbase.size() == d.size() && std::equal(d.begin(), d.end(), block.coinbase.begin());
    bool in_header = block.header == s;
    if ((in_coinbase || in_header) && l.rulesDigest == reg.announcement.rules.digest() &&
        validate_license(l, currentEpoch, reg.announcement.root, reg.regulator))
      return BlockKind::Regulated;
  }
  return BlockKind::Legal;
}

}  // namespace regchain
