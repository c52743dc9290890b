#include "regchain/exact.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace regchain {

namespace {

struct Key {
  std::uint64_t v;
  bool operator==(const Key&) const = default;
};
struct KeyHash {
  std::size_t operator()(const Key& k) const { return std::hash<std::uint64_t>()(k.v); }
};

}  // namespace

ExactGame::ExactGame(unsigned E) : E_(E) {
  if (E < 2 || E > 13) throw std::invalid_argument("exact game supports 2 <= E <= 13");
  const unsigned F = E - 1;

  struct Out {
    State s;
    double dr, orr, dc;
  };
  auto finalize = [F](std::uint8_t last, std::vector<int> ch) {
    Out o{{0, last, 0, -1, 0}, 0, 0, 0};
    std::size_t drop = ch.size() > F ? ch.size() - F : 0;
    for (std::size_t i = 0; i < drop; ++i) {
      if (ch[i]) {
        o.dr += 1;
        if (last == 0) o.dc += 1;
      } else {
        o.orr += 1;
      }
      last = static_cast<std::uint8_t>(ch[i]);
    }
    o.s.last = last;
    o.s.n = static_cast<std::uint8_t>(ch.size() - drop);
    for (std::size_t i = drop; i < ch.size(); ++i)
      if (ch[i]) o.s.bits |= static_cast<std::uint16_t>(1u << (i - drop));
    return o;
  };
  auto chain = [](const State& s) {
    std::vector<int> c(s.n);
    for (int i = 0; i < s.n; ++i) c[i] = (s.bits >> i) & 1;
    return c;
  };
  auto opp = [&](const State& s) {
    auto ch = chain(s);
    ch.push_back(0);
    int before = static_cast<int>(ch.size());
    Out o = finalize(s.last, ch);
    int removed = before - o.s.n;
    if (s.a > 0 && s.j >= removed) {
      o.s.j = static_cast<std::int8_t>(s.j - removed);
      o.s.a = s.a;
    }
    return o;
  };
  auto dev = [&](const State& s, int act) {
    int j2 = act < 0 ? s.j : act;
    int a2 = act < 0 ? s.a + 1 : 1;
    if (a2 > s.n - j2) {
      auto ch = chain(s);
      ch.resize(j2);
      ch.insert(ch.end(), a2, 1);
      return finalize(s.last, ch);
    }
    State t = s;
    t.j = static_cast<std::int8_t>(j2);
    t.a = static_cast<std::int8_t>(a2);
    return Out{t, 0, 0, 0};
  };

  std::unordered_map<Key, int, KeyHash> index;
  auto key = [](const State& s) {
    return Key{(std::uint64_t(s.n) << 40) | (std::uint64_t(s.last) << 36) | (std::uint64_t(s.bits) << 16) |
               (std::uint64_t(std::uint8_t(s.j)) << 8) | std::uint8_t(s.a)};
  };
  auto get = [&](const State& s) {
    auto [it, fresh] = index.try_emplace(key(s), static_cast<int>(states_.size()));
    if (fresh) states_.push_back(s);
    return it->second;
  };
  get(State{0, 0, 0, -1, 0});
  for (std::size_t i = 0; i < states_.size(); ++i) {
    State s = states_[i];
    Out o = opp(s);
    Tr t{get(o.s), o.dr, o.orr, o.dc};
    opp_.push_back(t);
    std::vector<Tr> acts;
    if (s.a > 0) {
      Out d = dev(s, -1);
      acts.push_back({get(d.s), d.dr, d.orr, d.dc});
    }
    for (int j = 0; j <= s.n; ++j) {
      Out d = dev(s, j);
      acts.push_back({get(d.s), d.dr, d.orr, d.dc});
    }
    dev_.push_back(std::move(acts));
  }
}

// relative value iteration on r - lambda * blocks; returns the gain
double ExactGame::average(double alpha, double rho, double lambda, const std::vector<int>* policy) const {
  const std::size_t n = states_.size();
  std::vector<double> v(n, 0.0), nv(n);
  auto val = [&](const Tr& t, const std::vector<double>& V) {
    return t.dr + rho * t.dc - lambda * (t.dr + t.orr) + V[t.to];
  };
  double g = 0;
  for (int it = 0; it < 1000000; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double best;
      if (policy) {
        best = val(dev_[i][(*policy)[i]], v);
      } else {
        best = -1e300;
        for (const Tr& t : dev_[i]) best = std::max(best, val(t, v));
      }
      nv[i] = (1.0 - alpha) * val(opp_[i], v) + alpha * best;
    }
    g = nv[0];
    double diff = 0;
    for (std::size_t i = 0; i < n; ++i) {
      nv[i] -= g;
      diff = std::max(diff, std::fabs(nv[i] - v[i]));
    }
    v.swap(nv);
    if (diff < 1e-13) break;
  }
  return g;
}

double ExactGame::optimal_gain(double alpha, double rho) const {
  if (alpha <= 0.0) return 0.0;
  if (alpha >= 1.0) return 1.0;
  double lo = 0.0, hi = 1.0 + rho;
  for (int k = 0; k < 64 && hi - lo > 1e-14; ++k) {
    double m = 0.5 * (lo + hi);
    (average(alpha, rho, m, nullptr) > 0 ? lo : hi) = m;
  }
  return 0.5 * (lo + hi);
}

std::vector<int> ExactGame::family_policy(unsigned jdepth, unsigned k) const {
  std::vector<int> pol(states_.size());
  for (std::size_t i = 0; i < states_.size(); ++i) {
    const State& s = states_[i];
    int base = s.a > 0 ? 1 : 0;
    if (s.a > 0 && (s.n - s.j) - s.a < static_cast<int>(k)) {
      pol[i] = 0;
      continue;
    }
    int m = 0;
    while (m < s.n && !((s.bits >> (s.n - 1 - m)) & 1)) ++m;
    int d = std::min<int>(m, static_cast<int>(jdepth));
    pol[i] = base + (s.n - d);
  }
  return pol;
}

double ExactGame::policy_gain(double alpha, double rho, unsigned j, unsigned k) const {
  if (alpha <= 0.0) return 0.0;
  if (alpha >= 1.0) return 1.0;
  auto pol = family_policy(j, k);
  double lo = 0.0, hi = 1.0 + rho;
  for (int it = 0; it < 64 && hi - lo > 1e-14; ++it) {
    double m = 0.5 * (lo + hi);
    (average(alpha, rho, m, &pol) > 0 ? lo : hi) = m;
  }
  return 0.5 * (lo + hi);
}

double ExactGame::deviation_margin(double alpha, double rho) const {
  return average(alpha, rho, frontier_gain(alpha, rho), nullptr);
}

}  // namespace regchain
