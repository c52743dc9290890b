#include <algorithm>
#include <cmath>

#include "regchain/notarization.hpp"

namespace regchain {

// Q_KS(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2)
double kolmogorov_q(double lambda) {
  if (lambda < 1e-3) return 1.0;
  if (lambda < 1.18) {
    // small-lambda form, converges where the alternating series is slow
    double y = std::exp(-1.23370055013616983 / (lambda * lambda));  // pi^2/8
    double s = 0;
    for (int k = 1; k < 20; k += 2) s += std::pow(y, k * k);
    double cdf = 2.50662827463100050 / lambda * s;  // sqrt(2 pi)
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0, sign = 1;
  for (int k = 1; k <= 100; ++k) {
    double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw SampleTooSmall("empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double n = static_cast<double>(a.size()), m = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  double en = std::sqrt(n * m / (n + m));
  KsResult r;
  r.statistic = d;
  r.pValue = kolmogorov_q((en + 0.12 + 0.11 / en) * d);
  return r;
}

KsResult indistinguishability_test(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b,
                                   std::size_t minSize) {
  if (a.size() < minSize || b.size() < minSize) throw SampleTooSmall("need at least " + std::to_string(minSize) + " samples");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  return ks_two_sample(std::move(x), std::move(y));
}

}  // namespace regchain
