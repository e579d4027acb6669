#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace rggcross {

std::uint64_t splitmix64(std::uint64_t x);

/// Seeded pseudo-random source.
///
/// Independent substreams are obtained with derive(seed, {counters...}): the
/// counters are hashed into the engine seed, so a job's draws depend only on
/// its own coordinates (e.g. t-index and replication index) and never on how
/// jobs are scheduled across workers.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  static RandomStream derive(std::uint64_t seed,
                             std::initializer_list<std::uint64_t> counters);

  std::uint64_t bits() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal() { return normal_(engine_); }
  std::uint64_t poisson(double mean);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

/// Stream tags keep substreams of different purposes apart.
namespace stream_tag {
inline constexpr std::uint64_t kReplication = 0x5245504c;  // "REPL"
inline constexpr std::uint64_t kPlane = 0x504c414e;        // "PLAN"
inline constexpr std::uint64_t kBlock = 0x424c4f4b;        // "BLOK"
inline constexpr std::uint64_t kSearch = 0x53524348;       // "SRCH"
}  // namespace stream_tag

}  // namespace rggcross
