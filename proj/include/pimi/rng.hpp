#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace pimi {

// SplitMix64 finalizer. Every random quantity in the project is a pure
// function of (seed, counter) through this mixer, so results never depend
// on evaluation order or thread scheduling.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a) noexcept {
  return mix64(mix64(base) ^ (a * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                    std::uint64_t b) noexcept {
  return derive_seed(derive_seed(base, a), b);
}

// Stream domains, so that e.g. initial spins and update noise drawn from the
// same trial seed never share counters.
enum class Stream : std::uint64_t {
  InitialSpins = 1,
  UpdateNoise = 2,
  Generator = 3,
  Oracle = 4,
  Scenario = 5,
  Detector = 6,
};

inline std::uint64_t stream_seed(std::uint64_t seed, Stream s) noexcept {
  return derive_seed(seed, static_cast<std::uint64_t>(s));
}

inline std::uint64_t bits_at(std::uint64_t seed, std::uint64_t counter) noexcept {
  return mix64(seed ^ mix64(counter));
}

// Uniform in [0, 1) with 53 random bits.
inline double uniform01_at(std::uint64_t seed, std::uint64_t counter) noexcept {
  return static_cast<double>(bits_at(seed, counter) >> 11) * 0x1.0p-53;
}

// Uniform in [-1, 1).
inline double uniform_pm1_at(std::uint64_t seed, std::uint64_t counter) noexcept {
  return 2.0 * uniform01_at(seed, counter) - 1.0;
}

// Standard normal via Box-Muller (cosine branch) on two sub-counters.
inline double normal_at(std::uint64_t seed, std::uint64_t counter) noexcept {
  const double u1 = 1.0 - uniform01_at(seed, 2 * counter);  // (0, 1]
  const double u2 = uniform01_at(seed, 2 * counter + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Sequential convenience wrapper over the counter functions.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

  std::uint64_t next_u64() noexcept { return bits_at(seed_, counter_++); }
  double uniform01() noexcept { return uniform01_at(seed_, counter_++); }
  double uniform_pm1() noexcept { return uniform_pm1_at(seed_, counter_++); }
  double normal() noexcept { return normal_at(seed_, counter_++); }
  bool bernoulli(double p) noexcept { return uniform01() < p; }

  // Uniform integer in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % bound;
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace pimi
