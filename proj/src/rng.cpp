#include "hypcurv/rng.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

namespace hypcurv {

namespace {
std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace

RngStream RngStream::derive(std::uint64_t seed, std::uint64_t a,
                            std::uint64_t b, std::uint64_t c) {
  std::uint64_t k = splitmix(seed);
  k = splitmix(k ^ (a * 0xA24BAED4963EE407ULL + 1));
  k = splitmix(k ^ (b * 0x9FB21C651E98DF25ULL + 2));
  k = splitmix(k ^ (c * 0xD6E8FEB86659FD93ULL + 3));
  return RngStream(k);
}

std::uint64_t RngStream::next_u64() {
  ++ctr_;
  return splitmix(key_ + ctr_ * 0x9E3779B97F4A7C15ULL);
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // Box-Muller; u clamped away from 0 so the log stays finite.
  double u = uniform();
  if (u < 0x1.0p-53) u = 0x1.0p-53;
  double v = uniform();
  double r = std::sqrt(-2.0 * std::log(u));
  double ang = 2.0 * std::numbers::pi * v;
  spare_ = r * std::sin(ang);
  have_spare_ = true;
  return r * std::cos(ang);
}

void RngStream::unit_sphere(int n, double* out) {
  while (true) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      out[i] = normal();
      s += out[i] * out[i];
    }
    if (s > 1e-12) {
      double inv = 1.0 / std::sqrt(s);
      for (int i = 0; i < n; ++i) out[i] *= inv;
      return;
    }
  }
}

void parallel_blocks(std::uint64_t n_blocks, int workers,
                     const std::function<void(std::uint64_t)>& fn) {
  if (workers <= 1 || n_blocks <= 1) {
    for (std::uint64_t b = 0; b < n_blocks; ++b) fn(b);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  auto run = [&] {
    while (true) {
      std::uint64_t b = next.fetch_add(1);
      if (b >= n_blocks) return;
      fn(b);
    }
  };
  std::vector<std::thread> pool;
  int nw = std::min<std::uint64_t>(workers, n_blocks);
  pool.reserve(nw);
  for (int i = 0; i < nw; ++i) pool.emplace_back(run);
  for (auto& t : pool) t.join();
}

}  // namespace hypcurv
