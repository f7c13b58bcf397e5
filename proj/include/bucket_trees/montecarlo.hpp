#pragma once

#include "rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

namespace bucket_trees {

struct MonteCarloOptions {
  std::int64_t block_size = 4096;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Runs `reps` replicates in fixed-size blocks. Block i draws from RngStream(seed).split(i)
/// and owns its accumulator; blocks merge in index order, so results do not depend on threads.
/// Acc needs a default constructor and merge(const Acc&); fn(RngStream&, Acc&) runs one replicate.
template <class Acc, class Fn>
Acc monte_carlo(std::uint64_t seed, std::int64_t reps, Fn&& fn, MonteCarloOptions opt = {}) {
  if (reps <= 0) return Acc{};
  const std::int64_t bs = std::max<std::int64_t>(1, opt.block_size);
  const std::int64_t blocks = (reps + bs - 1) / bs;
  unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::int64_t>(threads, blocks));

  const RngStream root(seed);
  std::vector<Acc> parts(static_cast<std::size_t>(blocks));
  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      const std::int64_t blk = next.fetch_add(1);
      if (blk >= blocks) return;
      try {
        RngStream rng = root.split(static_cast<std::uint64_t>(blk));
        Acc& acc = parts[static_cast<std::size_t>(blk)];
        const std::int64_t end = std::min(reps, (blk + 1) * bs);
        for (std::int64_t r = blk * bs; r < end; ++r) fn(rng, acc);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = blocks;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  Acc out{};
  for (const auto& p : parts) out.merge(p);
  return out;
}

/// Histogram of integer outcomes.
struct CountAcc {
  std::map<int, std::int64_t> counts;
  void add(int v) { ++counts[v]; }
  void merge(const CountAcc& o) {
    for (const auto& [k, c] : o.counts) counts[k] += c;
  }
};

/// Per-coordinate first and second moments.
struct MomentAcc {
  std::int64_t n = 0;
  std::vector<double> s1, s2;

  void add(const std::vector<double>& x) {
    if (s1.empty()) s1.assign(x.size(), 0.0), s2.assign(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      s1[i] += x[i];
      s2[i] += x[i] * x[i];
    }
    ++n;
  }
  void merge(const MomentAcc& o) {
    if (o.n == 0) return;
    if (s1.empty()) s1.assign(o.s1.size(), 0.0), s2.assign(o.s2.size(), 0.0);
    for (std::size_t i = 0; i < o.s1.size(); ++i) {
      s1[i] += o.s1[i];
      s2[i] += o.s2[i];
    }
    n += o.n;
  }
  double mean(std::size_t i) const { return s1[i] / static_cast<double>(n); }
  double variance(std::size_t i) const {
    const double m = mean(i);
    return std::max(0.0, s2[i] / static_cast<double>(n) - m * m);
  }
  double std_error(std::size_t i) const { return std::sqrt(variance(i) / static_cast<double>(n)); }
};

/// Raw real-valued samples, concatenated in block order.
struct SampleAcc {
  std::vector<double> values;
  void add(double v) { values.push_back(v); }
  void merge(const SampleAcc& o) { values.insert(values.end(), o.values.begin(), o.values.end()); }
};

}  // namespace bucket_trees
