#pragma once

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace tracecensus {

// Neumaier compensated summation. Adding terms in a fixed order gives a
// bitwise-reproducible result; the accumulated error is O(eps) independent
// of the term count.
class NeumaierSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  void add(const NeumaierSum& o) {
    add(o.sum_);
    add(o.comp_);
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Runs fn(chunk) for chunk = 0..nchunks-1 on up to `threads` workers.
// Work is handed out by a shared counter, so any chunk may run on any
// thread; callers that need determinism must key their output by chunk
// index and merge in index order.
inline void parallel_chunks(std::size_t nchunks, int threads,
                            const std::function<void(std::size_t)>& fn) {
  if (threads <= 0) {
    unsigned hw = std::thread::hardware_concurrency();
    threads = hw ? static_cast<int>(hw) : 1;
  }
  if (threads == 1 || nchunks <= 1) {
    for (std::size_t i = 0; i < nchunks; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= nchunks) return;
      fn(i);
    }
  };
  std::size_t nw = std::min<std::size_t>(threads, nchunks);
  std::vector<std::thread> pool;
  pool.reserve(nw);
  for (std::size_t t = 0; t < nw; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

// Working precision (bits) for certified interval computations.
// TRACE_CENSUS_PRECISION overrides the default; clamped to a sane range.
inline long default_precision() {
  const char* env = std::getenv("TRACE_CENSUS_PRECISION");
  long p = 192;
  if (env && *env) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v > 0) p = v;
  }
  if (p < 64) p = 64;
  if (p > 8192) p = 8192;
  return p;
}

// Formats a double with 12 significant digits (CSV convention).
std::string fmt12(double x);

}  // namespace tracecensus
