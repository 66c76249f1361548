#pragma once

#include <atomic>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace fidsus {

/// Neumaier-compensated running sum. Requires strict IEEE semantics
/// (no -ffast-math / -fassociative-math on translation units using it).
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double x) : sum_(x) {}

  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }

  /// Merges another accumulator, carrying its compensation term.
  void merge(const CompensatedSum& other) noexcept {
    add(other.sum_);
    add(other.comp_);
  }

  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> values) noexcept {
  CompensatedSum acc;
  for (double v : values) acc.add(v);
  return acc.value();
}

/// Combines partial sums along a fixed binary tree over their index order.
/// The tree shape depends only on partials.size().
inline CompensatedSum pairwise_combine(std::span<const CompensatedSum> partials) {
  if (partials.empty()) return {};
  if (partials.size() == 1) return partials.front();
  const std::size_t half = partials.size() / 2;
  CompensatedSum left = pairwise_combine(partials.first(half));
  left.merge(pairwise_combine(partials.subspan(half)));
  return left;
}

/// Deterministic parallel reduction over items [0, count).
///
/// Items are grouped into fixed chunks of `chunk_size`; `chunk_fn(begin, end)`
/// returns the CompensatedSum of one chunk. Chunk partials are merged with
/// pairwise_combine, so the result is bit-identical for every worker count.
template <class ChunkFn>
double deterministic_reduce(std::size_t count, std::size_t chunk_size, unsigned workers,
                            ChunkFn&& chunk_fn) {
  if (count == 0) return 0.0;
  chunk_size = std::max<std::size_t>(chunk_size, 1);
  const std::size_t n_chunks = (count + chunk_size - 1) / chunk_size;
  std::vector<CompensatedSum> partials(n_chunks);

  auto run_chunk = [&](std::size_t c) {
    const std::size_t begin = c * chunk_size;
    const std::size_t end = std::min(count, begin + chunk_size);
    partials[c] = chunk_fn(begin, end);
  };

  const unsigned n_threads =
      static_cast<unsigned>(std::min<std::size_t>(std::max(workers, 1u), n_chunks));
  if (n_threads <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
      std::vector<std::jthread> pool;
      pool.reserve(n_threads);
      for (unsigned t = 0; t < n_threads; ++t) {
        pool.emplace_back([&] {
          try {
            for (std::size_t c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1)) run_chunk(c);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next.store(n_chunks);
          }
        });
      }
    }
    if (failure) std::rethrow_exception(failure);
  }
  return pairwise_combine(partials).value();
}

}  // namespace fidsus
