// rng.hpp
// Counter-based random streams: every (seed, scheme, trial) triple owns an
// independent SplitMix64 sequence, so results never depend on scheduling.

#pragma once

#include <cstdint>
#include <limits>

namespace qse {

inline constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stable identifiers mixed into stream keys. Values are part of the
/// reproducibility contract; never renumber.
enum class StreamId : std::uint32_t {
  Test = 0,
  Tomography2D = 3,
  Tomography3D = 4,
  Isotropic2D = 5,
  Random3D = 6,
  Greedy2D = 7,
  Greedy3D = 8,
  Locc = 9,
  OneStep2D = 10,
  OneStep3D = 11,
  LastStepPovm = 12,
};

inline constexpr std::uint64_t stream_key(std::uint64_t seed, StreamId scheme,
                                          std::uint64_t index) {
  std::uint64_t k = splitmix64_mix(seed + 0x9e3779b97f4a7c15ULL);
  k = splitmix64_mix(k ^ (static_cast<std::uint64_t>(scheme) * 0xd1b54a32d192ed03ULL));
  return splitmix64_mix(k ^ (index * 0x8cb92ba72f3d8dd7ULL + 0x632be59bd9b4e019ULL));
}

/// SplitMix64 generator: output k is mix(key + k * golden).
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) : key_(key) {}
  CounterRng(std::uint64_t seed, StreamId scheme, std::uint64_t index)
      : key_(stream_key(seed, scheme, index)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return splitmix64_mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace qse
