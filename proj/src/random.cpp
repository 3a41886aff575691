#include <chshlab/random.hpp>

namespace chshlab {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_stream_seed(std::uint64_t run_seed, std::uint64_t component_id) {
  return splitmix64(run_seed ^ splitmix64(component_id));
}

}  // namespace chshlab
