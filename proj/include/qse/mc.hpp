// mc.hpp
// Parallel Monte Carlo over counter-based streams with deterministic,
// worker-count independent reduction.

#pragma once

#include "qse/core.hpp"
#include "qse/rng.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <span>
#include <vector>

namespace qse {

/// Running mean and sum of squared deviations for one block of trials.
struct McAccumulator {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  long count = 0;
  double mean = 0;
  double m2 = 0;

  void add(double x);
  void merge(const McAccumulator& other);
};

/// Pools per-stream partials in stream order. All partials must come from
/// the same seed. Result stderr is sample-std / sqrt(trials).
FidelityResult mc_reduce(std::span<const McAccumulator> partials, int N);

struct McConfig {
  long trials = 10000;
  std::uint64_t seed = 1;
  int workers = 0;  // 0: QSE_WORKERS, else hardware concurrency
};

inline constexpr long kTrialsPerBlock = 256;

/// Sets flush-to-zero and denormals-are-zero for the current thread while
/// alive. Long likelihood products otherwise crawl through subnormals.
class FlushDenormals {
 public:
  FlushDenormals();
  ~FlushDenormals();
  FlushDenormals(const FlushDenormals&) = delete;
  FlushDenormals& operator=(const FlushDenormals&) = delete;

 private:
  unsigned saved_ = 0;
};

/// Worker count after applying the QSE_WORKERS override.
int resolve_workers(int requested);

/// Runs body(worker) on `workers` threads; rethrows the first exception.
void run_workers(int workers, const std::function<void(int)>& body);

/// Calls body(i) for i in [0, count) on a shared atomic counter.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body);

/// make_trial() is invoked once per worker and must return a callable
/// double(CounterRng&) giving one trial's score. Trial t always draws from
/// stream (seed, scheme, t).
template <class MakeTrial>
FidelityResult run_monte_carlo(int N, StreamId scheme, const McConfig& cfg,
                               MakeTrial&& make_trial) {
  if (cfg.trials < 2) throw std::invalid_argument("Monte Carlo needs at least two trials");
  const auto blocks = static_cast<std::size_t>((cfg.trials + kTrialsPerBlock - 1) / kTrialsPerBlock);
  std::vector<McAccumulator> partials(blocks);
  std::atomic<std::size_t> next{0};
  run_workers(resolve_workers(cfg.workers), [&](int) {
    auto trial = make_trial();
    for (std::size_t b = next++; b < blocks; b = next++) {
      McAccumulator& acc = partials[b];
      acc.seed = cfg.seed;
      acc.stream = b;
      const long begin = static_cast<long>(b) * kTrialsPerBlock;
      const long end = std::min(cfg.trials, begin + kTrialsPerBlock);
      for (long t = begin; t < end; ++t) {
        CounterRng rng(cfg.seed, scheme, static_cast<std::uint64_t>(t));
        acc.add(trial(rng));
      }
    }
  });
  return mc_reduce(partials, N);
}

}  // namespace qse
