#include "regchain/crypto.hpp"

#include <sodium.h>

#include <algorithm>
#include <stdexcept>

namespace regchain {

namespace {
struct SodiumInit {
  SodiumInit() {
    if (sodium_init() < 0) throw std::runtime_error("libsodium init failed");
  }
};
void ensure_init() { static SodiumInit once; }
}  // namespace

Digest hash(const std::uint8_t* data, std::size_t n) {
  Digest d;
  crypto_hash_sha256(d.data(), data, n);
  return d;
}

std::string hex(const std::uint8_t* data, std::size_t n) {
  static const char* digits = "0123456789abcdef";
  std::string s(2 * n, '0');
  for (std::size_t i = 0; i < n; ++i) {
    s[2 * i] = digits[data[i] >> 4];
    s[2 * i + 1] = digits[data[i] & 15];
  }
  return s;
}

SigningKey keygen(std::uint64_t seed) {
  ensure_init();
  Writer w;
  w.str("regchain-key").u64(seed);
  Digest s = hash(w.out());
  SigningKey k;
  crypto_sign_seed_keypair(k.vk.bytes.data(), k.secret.data(), s.data());
  return k;
}

Bytes sign(const SigningKey& sk, const Bytes& msg) {
  ensure_init();
  Bytes sig(crypto_sign_BYTES);
  crypto_sign_detached(sig.data(), nullptr, msg.data(), msg.size(), sk.secret.data());
  return sig;
}

bool verify(const VerifyKey& vk, const Bytes& msg, const Bytes& sig) {
  ensure_init();
  if (sig.size() != crypto_sign_BYTES) return false;
  return crypto_sign_verify_detached(sig.data(), msg.data(), msg.size(), vk.bytes.data()) == 0;
}

Writer& Writer::u64(std::uint64_t v) {
  for (int i = 7; i >= 0; --i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  return *this;
}

Writer& Writer::bytes(const std::uint8_t* p, std::size_t n) {
  u64(n);
  buf_.insert(buf_.end(), p, p + n);
  return *this;
}

std::uint64_t Reader::u64() {
  if (buf_.size() - pos_ < 8) throw ParseError("truncated integer");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | buf_[pos_++];
  return v;
}

Bytes Reader::bytes() {
  std::uint64_t n = u64();
  if (n > buf_.size() - pos_) throw ParseError("field length past end");
  Bytes b(buf_.begin() + static_cast<std::ptrdiff_t>(pos_), buf_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
  pos_ += n;
  return b;
}

std::string Reader::str() {
  Bytes b = bytes();
  return std::string(b.begin(), b.end());
}

}  // namespace regchain
