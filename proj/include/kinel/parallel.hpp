#ifndef KINEL_PARALLEL_HPP
#define KINEL_PARALLEL_HPP

#include <cstddef>
#include <span>
#include <thread>
#include <vector>

namespace kinel {

//! Apply fn(i) for i in [0, n). Work items must write only to their own
//! output slots, so the result is identical for any thread count.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t nt = std::min<std::size_t>(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += nt) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

//! Pairwise (cascade) summation over a fixed index order; the result does not
//! depend on how callers parallelized the production of `v`.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace kinel

#endif
