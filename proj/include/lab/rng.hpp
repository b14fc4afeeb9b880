#pragma once

#include <cstdint>

#include "lab/vec.hpp"

namespace lab {

// Counter-based generator: the i-th output is a fixed 64-bit mix of
// key + i*gamma, i.e. the splitmix64 stream seeded at `key`. State is just
// (key, counter), so streams are cheap to fork and replay.
//
// Stream splitting: key = mix(mix(seed) ^ mix(stream+1) ^ mix3(substream)).
// Identical (seed, stream, substream) always yields the identical sequence,
// independent of what any other stream consumed. Experiments key trials by
// stream = trial index; substream separates independent uses within a trial.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0,
               std::uint64_t substream = 0);

  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01();
  double uniform(double a, double b);

  // Standard normal via Box-Muller; pairs are drawn fresh (no cached spare),
  // so the draw count per call is constant and replay stays aligned.
  double normal();

  Vec gaussian_vec(int d);

  // Uniform on the unit sphere: Gaussian vector, normalized.
  Direction sphere_uniform(int d);

 private:
  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
};

}  // namespace lab
