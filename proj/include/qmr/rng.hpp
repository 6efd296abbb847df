#pragma once

#include <cstdint>

namespace qmr {

/// splitmix64 finalizer. Used both to seed generator state and as the
/// documented mix for deriving consumer streams:
///
///   derived = mix64(base ^ (salt + 0x9e3779b97f4a7c15 + (base << 6) + (base >> 2)))
///
/// Each consumer of randomness (signal, matrices, noise, frame sampling,
/// solver initialization) derives its own stream from (master seed, role
/// tag), so adding or reordering consumers never perturbs the others.
std::uint64_t mix64(std::uint64_t z);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt);

enum class StreamRole : std::uint64_t {
  TrueSignal = 1,
  Matrices = 2,
  Noise = 3,
  FrameSampling = 4,
  SolverInit = 5,
};

/// xoshiro256++ with Box-Muller normals. Self-contained so that streams are
/// stable across standard libraries and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// uniform in (0, 1]
  double uniform01();

  /// standard normal draw
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

 private:
  std::uint64_t state_[4];
  double cached_ = 0.0;
  bool has_cached_ = false;
};

inline Rng derive_stream(std::uint64_t master, StreamRole role) {
  return Rng(derive_seed(master, static_cast<std::uint64_t>(role)));
}

}  // namespace qmr
