#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rggclust/density.hpp"
#include "rggclust/rng.hpp"

namespace rggclust {

struct SeedInfo {
  std::uint64_t master_seed{0};
  std::uint64_t replication_index{0};
};

/// n vertex positions in [0,1), sorted ascending. Equal positions keep
/// their draw order.
struct PointSample {
  std::vector<double> positions;
  SeedInfo seed_info;

  std::size_t n() const noexcept { return positions.size(); }
};

/// min(|a-b|, 1-|a-b|) for a, b in [0,1).
inline double circle_distance(double a, double b) noexcept {
  const double d = std::abs(a - b);
  return std::min(d, 1.0 - d);
}

/// Reduces any real to [0,1).
inline double wrap_unit(double x) noexcept {
  double y = x - std::floor(x);
  return y >= 1.0 ? 0.0 : y;
}

/// One draw from f by rejection against the flat envelope sup f.
inline double draw_position(const CircularDensity& f, RngStream& stream) {
  if (f.is_uniform()) return stream.uniform01();
  const double sup = f.sup();
  for (;;) {
    const double x = stream.uniform01();
    if (stream.uniform01() * sup < f(x)) return x;
  }
}

/// One draw from f restricted to the arc [lo, hi] (lo < hi, hi - lo <= 1).
/// The result is not reduced mod 1.
inline double draw_on_arc(const CircularDensity& f, double lo, double hi, RngStream& stream) {
  const double width = hi - lo;
  if (f.is_uniform()) return lo + width * stream.uniform01();
  const double sup = f.sup();
  for (;;) {
    const double x = lo + width * stream.uniform01();
    if (stream.uniform01() * sup < f(x)) return x;
  }
}

inline PointSample sample_points(const CircularDensity& f, std::size_t n, RngStream& stream) {
  if (n < 1) throw std::invalid_argument("sample_points: n must be >= 1");
  if (!std::isfinite(f.sup()) || !(f.sup() > 0.0)) {
    throw std::invalid_argument("sample_points: density supremum must be finite and positive");
  }
  PointSample s;
  s.seed_info = {stream.master_seed(), stream.replication_index()};
  s.positions.resize(n);
  for (auto& x : s.positions) x = draw_position(f, stream);
  std::stable_sort(s.positions.begin(), s.positions.end());
  return s;
}

}  // namespace rggclust
