#pragma once

#include <cstdint>
#include <random>

namespace dtswarm {

/// Stream identifiers used to split a master seed into independent generators.
namespace stream {
inline constexpr std::uint64_t kCvt = 1;
inline constexpr std::uint64_t kInitialPositions = 2;
inline constexpr std::uint64_t kSnnBase = 1000;  // UAV i uses kSnnBase + i
}  // namespace stream

/// Derives a child seed from (master, stream_id) with two rounds of splitmix64.
/// Adding streams never changes the seeds of existing ones.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream_id);

/// Seeded 64-bit Mersenne Twister with platform-independent uniform and normal
/// draws (the std distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via the Box-Muller transform (one value per call).
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace dtswarm
