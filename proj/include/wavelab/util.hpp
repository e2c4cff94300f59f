#pragma once

// Deterministic RNG streams and fixed-order reductions. Every Monte Carlo
// estimate in the library draws from a stream derived as (master seed, member
// index); reductions over members run in index order, so results do not
// depend on thread count.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <thread>
#include <vector>

namespace wavelab {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_stream(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(0x517cc1b727220a95ULL + index));
}

// mt19937_64 with hand-rolled output maps; std::normal_distribution is not
// pinned by the standard, Box-Muller over fixed 53-bit uniforms is.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform01() {  // in (0,1)
    const std::uint64_t r = eng_() >> 11;
    return (static_cast<double>(r) + 0.5) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01(), u2 = uniform01();
    const double m = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = m * std::sin(a);
    have_spare_ = true;
    return m * std::cos(a);
  }

  double rademacher() { return (eng_() >> 63) ? 1.0 : -1.0; }

  // unit-variance centered uniform
  double uniform_centered() { return (2.0 * uniform01() - 1.0) * 1.7320508075688772935; }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Fixed-order pairwise summation: associativity-stable and independent of
// how the values were produced.
inline double pairwise_sum(const double* a, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i];
    return s;
  }
  const std::size_t m = n / 2;
  return pairwise_sum(a, m) + pairwise_sum(a + m, n - m);
}

inline double pairwise_sum(const std::vector<double>& a) {
  return a.empty() ? 0.0 : pairwise_sum(a.data(), a.size());
}

inline int default_thread_count() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Static chunking over [0, n); fn(begin, end) must write only to
// caller-preallocated slots, reductions happen after the join.
inline void parallel_for_chunks(std::size_t n, int threads,
                                const std::function<void(std::size_t, std::size_t)>& fn) {
  if (threads <= 1 || n < 2) {
    fn(0, n);
    return;
  }
  const std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::thread> pool;
  pool.reserve(nt);
  const std::size_t chunk = (n + nt - 1) / nt;
  for (std::size_t t = 0; t < nt; ++t) {
    const std::size_t b = t * chunk, e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace wavelab
