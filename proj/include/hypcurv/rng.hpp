#pragma once

#include <cstdint>
#include <functional>

#include "hypcurv/geom.hpp"

namespace hypcurv {

// Counter-based random stream: the value at counter i is a pure function of
// (key, i), so streams can be derived, partitioned and replayed independently
// of worker scheduling.  The generator is the splitmix64 finalizer over an
// additive Weyl sequence.
class RngStream {
 public:
  explicit RngStream(std::uint64_t key) : key_(key) {}

  // Hash-chains a seed with up to three path components into a stream key.
  static RngStream derive(std::uint64_t seed, std::uint64_t a,
                          std::uint64_t b = 0x6b79, std::uint64_t c = 0x9d5f);

  std::uint64_t next_u64();
  double uniform();  // [0, 1), 53 bits
  double normal();   // standard normal, Box-Muller (pair cached)

  // Uniform direction on the unit sphere S^{n-1} in R^n.
  void unit_sphere(int n, double* out);

 private:
  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Runs fn(block_index) for block_index in [0, n_blocks) on `workers` threads.
// Blocks are claimed atomically; fn must only write block-local state.
void parallel_blocks(std::uint64_t n_blocks, int workers,
                     const std::function<void(std::uint64_t)>& fn);

}  // namespace hypcurv
