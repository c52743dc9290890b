#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "regchain/chain.hpp"
#include "regchain/crypto.hpp"

namespace regchain {

inline constexpr const char* kProtocolTag = "RBChain";

struct LicenseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptyDomain : LicenseError {
  using LicenseError::LicenseError;
};
struct ScopeNotSubset : LicenseError {
  using LicenseError::LicenseError;
};
struct DigestMismatch : LicenseError {
  using LicenseError::LicenseError;
};

// B^{e0}
struct RootRef {
  Digest id{};
  std::uint64_t epoch = 0;
  bool operator==(const RootRef&) const = default;
};

struct RulesMatrix {
  std::vector<std::string> jurisdictions;
  std::vector<std::string> assets;
  std::vector<std::vector<Bytes>> rules;  // |F| x |A|

  Bytes serialize() const;
  Digest digest() const { return hash(serialize()); }
};

struct Announcement {
  std::string protocol = kProtocolTag;
  RootRef root;
  std::uint64_t window = 0;
  RulesMatrix rules;
  Bytes signature;

  Bytes body() const;
};

struct TransactorLicense {
  std::string protocol = kProtocolTag;
  RootRef root;
  std::uint64_t window = 0;
  VerifyKey holder;
  std::vector<std::string> jurisdictions;
  std::vector<std::string> assets;
  Bytes signature;

  Bytes body() const;
  Bytes serialize() const;
  static TransactorLicense deserialize(const Bytes& b);
};

struct ExecutorLicense {
  std::string protocol = kProtocolTag;
  RootRef root;
  std::uint64_t window = 0;
  VerifyKey holder;
  Digest rulesDigest{};
  Bytes signature;

  Bytes body() const;
  Bytes serialize() const;
  static ExecutorLicense deserialize(const Bytes& b);
  Digest digest() const { return hash(serialize()); }
};

Announcement announce_rules(const SigningKey& regulator, const std::vector<std::string>& jurisdictions,
                            const std::vector<std::string>& assets, const std::vector<std::vector<Bytes>>& payloads,
                            const RootRef& root, std::uint64_t window);
bool verify_announcement(const Announcement& a, const VerifyKey& regulator);

TransactorLicense issue_transactor_license(const SigningKey& regulator, const Announcement& a, const VerifyKey& holder,
                                           const std::vector<std::string>& jurisdictions,
                                           const std::vector<std::string>& assets);
ExecutorLicense issue_executor_license(const SigningKey& regulator, const Announcement& a, const VerifyKey& holder,
                                       const Digest& rulesDigest);

enum class LicenseStatus : std::uint8_t { Valid, BadSignature, RootMismatch, NotYetValid, Expired, WrongProtocol };
const char* to_string(LicenseStatus s);

struct LicenseCheck {
  bool ok = false;
  LicenseStatus reason = LicenseStatus::BadSignature;
  explicit operator bool() const { return ok; }
};

LicenseCheck validate_license(const TransactorLicense& l, std::uint64_t currentEpoch, const RootRef& root,
                              const VerifyKey& regulator);
LicenseCheck validate_license(const ExecutorLicense& l, std::uint64_t currentEpoch, const RootRef& root,
                              const VerifyKey& regulator);

// off-chain receipt for one (jurisdiction, asset) pair
struct Receipt {
  std::string jurisdiction;
  std::string asset;
  Bytes proof;
};

struct Transaction {
  Bytes payload;
  std::optional<TransactorLicense> license;
  Receipt receipt;

  // sigma_j o delta
  Bytes script() const;
};

enum class TxClass : std::uint8_t { Legal, Dubious };

TxClass classify_transaction(const Transaction& tx, const Announcement& a, std::uint64_t currentEpoch,
                             const VerifyKey& regulator);

struct BlockContent {
  Bytes coinbase;  // RBitcoin license evidence H*(beta)
  Bytes header;    // RNxtPoS license evidence beta
  std::vector<Transaction> txs;

  Bytes serialize() const;
};

// what a verifier knows: the signed announcement and the issued executor licenses
struct Registry {
  VerifyKey regulator;
  Announcement announcement;
  std::vector<ExecutorLicense> executors;
};

BlockKind classify_block(const BlockContent& block, const Registry& reg, std::uint64_t currentEpoch);

}  // namespace regchain
