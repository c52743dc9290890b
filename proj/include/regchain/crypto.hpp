#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace regchain {

using Bytes = std::vector<std::uint8_t>;
using Digest = std::array<std::uint8_t, 32>;

// H*, SHA-256
Digest hash(const std::uint8_t* data, std::size_t n);
inline Digest hash(const Bytes& b) { return hash(b.data(), b.size()); }

std::string hex(const std::uint8_t* data, std::size_t n);
inline std::string hex(const Bytes& b) { return hex(b.data(), b.size()); }
inline std::string hex(const Digest& d) { return hex(d.data(), d.size()); }

struct VerifyKey {
  std::array<std::uint8_t, 32> bytes{};
  bool operator==(const VerifyKey&) const = default;
};

struct SigningKey {
  std::array<std::uint8_t, 64> secret{};
  VerifyKey vk;
};

// deterministic Ed25519 key from a 64-bit seed
SigningKey keygen(std::uint64_t seed);
Bytes sign(const SigningKey& sk, const Bytes& msg);
bool verify(const VerifyKey& vk, const Bytes& msg, const Bytes& sig);

// canonical length-prefixed field encoding
class Writer {
 public:
  Writer& u64(std::uint64_t v);
  Writer& bytes(const std::uint8_t* p, std::size_t n);
  Writer& bytes(const Bytes& b) { return bytes(b.data(), b.size()); }
  Writer& str(std::string_view s) { return bytes(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()); }
  template <std::size_t N>
  Writer& bytes(const std::array<std::uint8_t, N>& a) {
    return bytes(a.data(), N);
  }
  const Bytes& out() const { return buf_; }

 private:
  Bytes buf_;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Reader {
 public:
  explicit Reader(const Bytes& b) : buf_(b) {}
  std::uint64_t u64();
  Bytes bytes();
  std::string str();
  template <std::size_t N>
  std::array<std::uint8_t, N> fixed() {
    Bytes b = bytes();
    if (b.size() != N) throw ParseError("fixed field has wrong length");
    std::array<std::uint8_t, N> a{};
    std::copy(b.begin(), b.end(), a.begin());
    return a;
  }
  bool done() const { return pos_ == buf_.size(); }

 private:
  const Bytes& buf_;
  std::size_t pos_ = 0;
};

}  // namespace regchain
