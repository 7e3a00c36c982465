#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rggclust/sampler.hpp"

namespace rggclust {

/// Connection radius, 0 <= r <= 1/2.
class Radius {
 public:
  explicit Radius(double r) : r_(r) {
    if (!(r >= 0.0 && r <= 0.5)) {
      throw std::invalid_argument("radius must lie in [0, 0.5], got " + std::to_string(r));
    }
  }
  double value() const noexcept { return r_; }

 private:
  double r_;
};

/// Exact counts for one graph. `ordered_two_paths` is sum_i d_i (d_i - 1),
/// i.e. ordered triples (i, j, k) with edges ij and jk.
struct SubgraphCounts {
  std::uint64_t n{0};
  std::uint64_t edges{0};
  std::uint64_t ordered_two_paths{0};
  std::uint64_t triangles{0};

  friend bool operator==(const SubgraphCounts&, const SubgraphCounts&) = default;
};

using wide_count = unsigned __int128;

namespace detail {

inline std::uint64_t narrow_count(wide_count v, const char* what) {
  if (v > std::numeric_limits<std::uint64_t>::max()) {
    throw std::overflow_error(std::string(what) + " exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(v);
}

inline void require_sorted(std::span<const double> x) {
  if (!std::is_sorted(x.begin(), x.end())) {
    throw std::invalid_argument("positions must be sorted ascending");
  }
}

// Forward gap from sorted index s to sorted index t: the arc length walked
// counterclockwise from x[s] to x[t], with ties ordered by index. Uses the
// same floating-point expressions as circle_distance so that adjacency here
// and in the brute-force oracle agree bit for bit.
inline double forward_gap(std::span<const double> x, std::size_t s, std::size_t t) noexcept {
  return t > s ? x[t] - x[s] : 1.0 - (x[s] - x[t]);
}

}  // namespace detail

/// Forward and backward neighbour counts per vertex on the sorted circle.
/// forward[i] counts t with forward_gap(i -> t) <= r (a cyclic run right
/// after i), backward[i] counts t with forward_gap(t -> i) <= r (a run right
/// before i). For r < 1/2 the two runs are disjoint and d_i is their sum.
struct NeighborWindows {
  std::vector<std::uint32_t> forward;
  std::vector<std::uint32_t> backward;
};

inline NeighborWindows neighbor_windows(std::span<const double> x, double r) {
  const std::size_t n = x.size();
  if (n > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("neighbor_windows: too many points");
  }
  NeighborWindows w{std::vector<std::uint32_t>(n), std::vector<std::uint32_t>(n)};
  if (r >= 0.5) {
    // Every pair is within 1/2; split n-1 neighbours evenly so forward runs stay consistent.
    for (std::size_t i = 0; i < n; ++i) {
      w.forward[i] = static_cast<std::uint32_t>(n - 1);
      w.backward[i] = 0;
    }
    return w;
  }
  const auto first = x.begin();
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    // (i, n): x[t] - xi <= r holds on a prefix.
    const auto fwd_end = std::partition_point(first + static_cast<std::ptrdiff_t>(i) + 1, x.end(),
                                              [&](double xt) { return xt - xi <= r; });
    std::size_t fwd = static_cast<std::size_t>(fwd_end - first) - (i + 1);
    // [0, i): 1 - (xi - x[t]) <= r holds on a prefix.
    const auto wrap_end = std::partition_point(first, first + static_cast<std::ptrdiff_t>(i),
                                               [&](double xt) { return 1.0 - (xi - xt) <= r; });
    fwd += static_cast<std::size_t>(wrap_end - first);

    // [0, i): xi - x[t] <= r holds on a suffix.
    const auto bwd_begin = std::partition_point(first, first + static_cast<std::ptrdiff_t>(i),
                                                [&](double xt) { return xi - xt > r; });
    std::size_t bwd = i - static_cast<std::size_t>(bwd_begin - first);
    // (i, n): 1 - (x[t] - xi) <= r holds on a suffix.
    const auto wrap_begin = std::partition_point(first + static_cast<std::ptrdiff_t>(i) + 1,
                                                 x.end(),
                                                 [&](double xt) { return 1.0 - (xt - xi) > r; });
    bwd += static_cast<std::size_t>(x.end() - wrap_begin);

    w.forward[i] = static_cast<std::uint32_t>(fwd);
    w.backward[i] = static_cast<std::uint32_t>(bwd);
  }
  return w;
}

/// d_i = #{j != i : circle_distance(x_i, x_j) <= r}.
inline std::vector<std::uint32_t> degrees(const PointSample& sample, Radius r) {
  detail::require_sorted(sample.positions);
  const auto w = neighbor_windows(sample.positions, r.value());
  std::vector<std::uint32_t> d(sample.n());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = w.forward[i] + w.backward[i];
  return d;
}

/// sum_i d_i (d_i - 1).
inline std::uint64_t count_two_paths(std::span<const std::uint32_t> degrees) {
  wide_count total = 0;
  for (const auto d : degrees) {
    if (d > 0) total += static_cast<wide_count>(d) * (d - 1);
  }
  return detail::narrow_count(total, "ordered two-path count");
}

namespace detail {

inline std::uint64_t triangles_from_windows(const NeighborWindows& w) {
  wide_count total = 0;
  for (const auto m : w.forward) {
    if (m >= 2) total += static_cast<wide_count>(m) * (m - 1) / 2;
  }
  return narrow_count(total, "triangle count");
}

// |A ∩ B| for cyclic index intervals given as (start, length), length <= n.
inline std::uint64_t cyclic_overlap(std::int64_t a_start, std::int64_t a_len, std::int64_t b_start,
                                    std::int64_t b_len, std::int64_t n) {
  std::int64_t total = 0;
  for (std::int64_t shift = -1; shift <= 1; ++shift) {
    const std::int64_t lo = std::max(a_start, b_start + shift * n);
    const std::int64_t hi = std::min(a_start + a_len, b_start + shift * n + b_len);
    if (hi > lo) total += hi - lo;
  }
  return static_cast<std::uint64_t>(total);
}

inline std::uint64_t triangles_edge_based(std::span<const double> x, const NeighborWindows& w) {
  const auto n = static_cast<std::int64_t>(x.size());
  if (n < 3) return 0;
  auto start = [&](std::int64_t i) {
    return ((i - static_cast<std::int64_t>(w.backward[static_cast<std::size_t>(i)])) % n + n) % n;
  };
  auto length = [&](std::int64_t i) {
    const auto k = static_cast<std::size_t>(i);
    return std::min<std::int64_t>(n, static_cast<std::int64_t>(w.backward[k]) + w.forward[k] + 1);
  };
  wide_count closed = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    const std::int64_t si = start(i);
    const std::int64_t li = length(i);
    for (std::int64_t step = 1; step <= static_cast<std::int64_t>(w.forward[static_cast<std::size_t>(i)]);
         ++step) {
      const std::int64_t j = (i + step) % n;
      // Closed neighbourhoods contain both endpoints; drop them.
      closed += cyclic_overlap(si, li, start(j), length(j), n) - 2;
    }
  }
  return narrow_count(closed / 3, "triangle count");
}

}  // namespace detail

/// Triangles as sum_i C(m_i, 2), m_i = points in the forward arc (x_i, x_i + r].
/// Exact only for r < 1/3: then every triangle has exactly one anchor whose
/// forward arc holds the other two vertices.
inline std::uint64_t count_triangles_window(const PointSample& sample, Radius r) {
  if (!(r.value() < 1.0 / 3.0)) {
    throw std::invalid_argument("count_triangles_window requires r < 1/3");
  }
  detail::require_sorted(sample.positions);
  return detail::triangles_from_windows(neighbor_windows(sample.positions, r.value()));
}

/// Triangles for any r in [0, 1/2]: for every edge, count common neighbours
/// as the overlap of the two closed neighbourhood arcs (one arc for r <= 1/4,
/// possibly two beyond), then divide by 3.
inline std::uint64_t count_triangles_edge_based(const PointSample& sample, Radius r) {
  detail::require_sorted(sample.positions);
  const std::size_t n = sample.n();
  if (r.value() >= 0.5) {
    return n < 3 ? 0 : detail::narrow_count(static_cast<wide_count>(n) * (n - 1) * (n - 2) / 6,
                                            "triangle count");
  }
  return detail::triangles_edge_based(sample.positions,
                                      neighbor_windows(sample.positions, r.value()));
}

inline SubgraphCounts counts(const PointSample& sample, Radius r) {
  detail::require_sorted(sample.positions);
  const std::size_t n = sample.n();
  SubgraphCounts c;
  c.n = n;
  if (r.value() >= 0.5) {
    const wide_count nn = n;
    c.edges = n < 2 ? 0 : detail::narrow_count(nn * (nn - 1) / 2, "edge count");
    c.ordered_two_paths = n < 3 ? 0 : detail::narrow_count(nn * (nn - 1) * (nn - 2), "two-paths");
    c.triangles = n < 3 ? 0 : detail::narrow_count(nn * (nn - 1) * (nn - 2) / 6, "triangles");
    return c;
  }
  const auto w = neighbor_windows(sample.positions, r.value());
  wide_count edges = 0;
  wide_count paths = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const wide_count d = static_cast<wide_count>(w.forward[i]) + w.backward[i];
    edges += w.forward[i];
    if (d > 0) paths += d * (d - 1);
  }
  c.edges = detail::narrow_count(edges, "edge count");
  c.ordered_two_paths = detail::narrow_count(paths, "ordered two-path count");
  c.triangles = r.value() < 1.0 / 3.0 ? detail::triangles_from_windows(w)
                                      : detail::triangles_edge_based(sample.positions, w);
  return c;
}

/// 6 T / sum_i d_i (d_i - 1); nullopt when the graph has no 2-path.
inline std::optional<double> clustering_coefficient(const SubgraphCounts& c) {
  if (c.ordered_two_paths == 0) return std::nullopt;
  return 6.0 * static_cast<double>(c.triangles) / static_cast<double>(c.ordered_two_paths);
}

inline constexpr std::size_t kBruteForceMaxN = 2000;

/// Reference counts straight from the adjacency definition: O(n^2) pairs and
/// an O(n^3) triple scan. Accepts unsorted input.
inline SubgraphCounts brute_force_counts(const PointSample& sample, Radius r) {
  const std::size_t n = sample.n();
  if (n > kBruteForceMaxN) {
    throw std::invalid_argument("brute_force_counts: n exceeds " +
                                std::to_string(kBruteForceMaxN));
  }
  const auto& x = sample.positions;
  std::vector<std::uint8_t> adj(n * n, 0);
  std::vector<std::uint64_t> deg(n, 0);
  SubgraphCounts c;
  c.n = n;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (circle_distance(x[i], x[j]) <= r.value()) {
        adj[i * n + j] = adj[j * n + i] = 1;
        ++deg[i];
        ++deg[j];
        ++c.edges;
      }
    }
  }
  for (const auto d : deg) c.ordered_two_paths += d * (d > 0 ? d - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!adj[i * n + j]) continue;
      for (std::size_t k = j + 1; k < n; ++k) {
        c.triangles += adj[i * n + k] & adj[j * n + k];
      }
    }
  }
  return c;
}

}  // namespace rggclust
