#pragma once

#include <cstdint>

namespace osfrl {

// Counter-based stream: every draw is a pure hash of
// (seed, replication, episode, stage, draw index), so the same
// coordinates always yield the same value regardless of the order
// in which replications execute.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1).
  double uniform(std::uint64_t rep, std::uint64_t episode, std::uint64_t stage,
                 std::uint64_t draw) const {
    std::uint64_t h = seed_;
    h = mix(h ^ (rep + 0xd6e8feb86659fd93ULL));
    h = mix(h ^ (episode + 0xa0761d6478bd642fULL));
    h = mix(h ^ (stage + 0xe7037ed1a0b428dbULL));
    h = mix(h ^ (draw + 0x8ebc6af09c88c6e3ULL));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

inline std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t rep) {
  return CounterRng::mix(base_seed ^ CounterRng::mix(rep));
}

}  // namespace osfrl
