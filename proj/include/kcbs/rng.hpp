#pragma once

#include <cstdint>
#include <random>

namespace kcbs {

/// splitmix64 finalizer; good avalanche, used only to derive seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derives an independent stream seed for (base seed, stage, run).
/// Results depend only on the arguments, never on thread scheduling,
/// so parallel and serial drivers consume identical streams.
inline std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t stage, std::uint64_t run) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ (stage * 0xD1B54A32D192ED03ULL));
  h = mix64(h ^ (run * 0x2545F4914F6CDD1DULL));
  return h;
}

/// mt19937_64 with a portable uniform mapping. The engine's output sequence is
/// fixed by the standard; uniform_real_distribution is not, so draws use an
/// explicit 53-bit mantissa mapping to keep runs reproducible across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace kcbs
