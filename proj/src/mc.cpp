#include "qse/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#if defined(__SSE__)
#include <xmmintrin.h>
#endif

namespace qse {

void McAccumulator::add(double x) {
  ++count;
  const double d = x - mean;
  mean += d / count;
  m2 += d * (x - mean);
}

void McAccumulator::merge(const McAccumulator& other) {
  if (other.count == 0) return;
  if (count == 0) {
    count = other.count;
    mean = other.mean;
    m2 = other.m2;
    return;
  }
  const double n = static_cast<double>(count + other.count);
  const double d = other.mean - mean;
  mean += d * static_cast<double>(other.count) / n;
  m2 += other.m2 + d * d * static_cast<double>(count) * static_cast<double>(other.count) / n;
  count += other.count;
}

FidelityResult mc_reduce(std::span<const McAccumulator> partials, int N) {
  if (partials.empty()) throw std::invalid_argument("mc_reduce needs at least one partial");
  const std::uint64_t seed = partials.front().seed;
  std::vector<McAccumulator> ordered(partials.begin(), partials.end());
  for (const auto& p : ordered)
    if (p.seed != seed) throw std::invalid_argument("mc_reduce: partials from different seeds");
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return a.stream < b.stream; });
  McAccumulator total;
  for (const auto& p : ordered) total.merge(p);
  if (total.count < 2) throw std::invalid_argument("mc_reduce needs at least two trials");
  const double var = total.m2 / static_cast<double>(total.count - 1);
  return FidelityResult::monte_carlo(N, total.mean, std::sqrt(var / static_cast<double>(total.count)),
                                     total.count, seed);
}

#if defined(__SSE__)
FlushDenormals::FlushDenormals() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | 0x8040); }
FlushDenormals::~FlushDenormals() { _mm_setcsr(saved_); }
#else
FlushDenormals::FlushDenormals() = default;
FlushDenormals::~FlushDenormals() = default;
#endif

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("QSE_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void run_workers(int workers, const std::function<void(int)>& body) {
  workers = std::max(1, workers);
  if (workers == 1) {
    body(0);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        body(w);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body) {
  std::atomic<std::size_t> next{0};
  run_workers(std::min<int>(resolve_workers(workers), static_cast<int>(std::max<std::size_t>(count, 1))),
              [&](int) {
                for (std::size_t i = next++; i < count; i = next++) body(i);
              });
}

}  // namespace qse
