#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace reluapprox {

// Seeded 64-bit generator used for every random draw in the library.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard; doubles are formed from the top 53 bits instead of going through
// std::uniform_real_distribution (whose algorithm is implementation-defined),
// so draws are identical across platforms and standard libraries.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64/53bit";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer of (master, index): independent per-row seeds.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace reluapprox
