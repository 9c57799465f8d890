#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace myogan {

// Deterministic RNG used for every stochastic draw in the project.
//
// A stream is identified by a root seed plus a derivation path, so any
// stream can be re-created from config seeds alone — nothing about engine
// position has to be checkpointed for exact resume. The generator is
// splitmix64; quality is ample for simulation noise and weight init.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : root_(seed), state_(mix(seed ^ kStreamSalt)) {}

  // Independent child stream; same (root, key) always yields the same stream.
  [[nodiscard]] Rng child(std::uint64_t key) const {
    return Rng(mix(root_ + 0x9e3779b97f4a7c15ULL * (key + 1)));
  }
  [[nodiscard]] Rng child(std::uint64_t a, std::uint64_t b) const { return child(a).child(b); }
  [[nodiscard]] Rng child(std::uint64_t a, std::uint64_t b, std::uint64_t c) const {
    return child(a).child(b).child(c);
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return finalize(state_);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller. One draw per call (the sine twin is
  // discarded) so a stream's n-th normal depends only on n.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

  std::uint64_t root() const { return root_; }

 private:
  static constexpr std::uint64_t kStreamSalt = 0x5bd1e995u;

  static std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  static std::uint64_t mix(std::uint64_t z) { return finalize(z + 0x9e3779b97f4a7c15ULL); }

  std::uint64_t root_;
  std::uint64_t state_;
};

}  // namespace myogan
