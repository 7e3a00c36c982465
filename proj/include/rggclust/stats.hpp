#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace rggclust {

/// Standard normal CDF through the C library's erfc, which is accurate to a
/// few ulp (far below 1e-12) over the whole real line, tails included.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// sup_x |F_m(x) - Phi(x)| for the empirical CDF F_m of the sample.
inline double ks_statistic(std::span<const double> sample) {
  if (sample.size() < 2) throw std::invalid_argument("ks_statistic: need at least 2 values");
  std::vector<double> z(sample.begin(), sample.end());
  std::sort(z.begin(), z.end());
  const double m = static_cast<double>(z.size());
  double d = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double cdf = normal_cdf(z[i]);
    d = std::max({d, static_cast<double>(i + 1) / m - cdf, cdf - static_cast<double>(i) / m});
  }
  return d;
}

struct SampleMoments {
  std::size_t count{0};
  double mean{0.0};
  double variance{0.0};         // unbiased
  double skewness{0.0};         // g1 = m3 / m2^{3/2}
  double excess_kurtosis{0.0};  // g2 = m4 / m2^2 - 3
};

inline SampleMoments sample_moments(std::span<const double> x) {
  SampleMoments s;
  s.count = x.size();
  if (x.empty()) return s;
  const double n = static_cast<double>(x.size());
  double sum = 0.0;
  for (double v : x) sum += v;
  s.mean = sum / n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - s.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  if (x.size() > 1) s.variance = m2 / (n - 1.0);
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (m2 > 0.0) {
    s.skewness = m3 / std::pow(m2, 1.5);
    s.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  }
  return s;
}

}  // namespace rggclust
