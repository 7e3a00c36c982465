#pragma once

#include <cstdint>
#include <random>

namespace rggclust {

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Deterministic random stream keyed by (master_seed, replication_index).
/// The same key yields the same draws on every platform with a conforming
/// standard library: both std::seed_seq and std::mt19937_64 are fully
/// specified, and doubles are built from raw bits rather than through
/// std::uniform_real_distribution.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t replication_index)
      : master_seed_(master_seed), replication_index_(replication_index) {
    const std::uint64_t a = detail::splitmix64(master_seed);
    const std::uint64_t b = detail::splitmix64(a ^ detail::splitmix64(replication_index));
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                      static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(replication_index),
                      static_cast<std::uint32_t>(replication_index >> 32),
                      static_cast<std::uint32_t>(b),
                      static_cast<std::uint32_t>(b >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t replication_index() const noexcept { return replication_index_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Independent sub-stream, e.g. one per Monte Carlo shard.
  RngStream child(std::uint64_t sub_index) const {
    return RngStream(detail::splitmix64(master_seed_ ^ detail::splitmix64(~replication_index_)),
                     sub_index);
  }

 private:
  std::uint64_t master_seed_;
  std::uint64_t replication_index_;
  std::mt19937_64 engine_;
};

inline RngStream derive_stream(std::uint64_t master_seed, std::uint64_t replication_index) {
  return RngStream(master_seed, replication_index);
}

}  // namespace rggclust
