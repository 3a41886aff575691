#pragma once

// Seeded random streams. A single 64-bit run seed is expanded into one
// independent stream per consumer, keyed by a fixed component id, so adding
// a consumer never shifts the draws seen by another.
//
//   stream seed = splitmix64(run_seed ^ splitmix64(component_id))
//
// The engine is std::mt19937_64, whose output sequence is fixed by the
// standard. Uniform doubles take the top 53 bits of each output, which keeps
// results identical across standard library implementations (unlike
// std::uniform_real_distribution).

#include <cstdint>
#include <random>

namespace chshlab {

enum class StreamId : std::uint64_t {
  kPairSampling = 1,
  kHiddenVariable = 2,
  kTOutcome = 3,
  kScanRestarts = 4,
  kRandomConfigs = 5,
  kQuantumChsh = 6,
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_stream_seed(std::uint64_t run_seed, std::uint64_t component_id);

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
  RandomStream(std::uint64_t run_seed, StreamId id)
      : engine_(derive_stream_seed(run_seed, static_cast<std::uint64_t>(id))) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace chshlab
