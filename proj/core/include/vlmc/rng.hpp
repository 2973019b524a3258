#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace vlmc {

/// Name recorded in report headers.
inline constexpr std::string_view kGeneratorName = "mt19937_64+splitmix64-derive";

/// Stream tags separating the random streams of one replicate.
enum class Stream : std::uint64_t { Chain = 0x43484149, Noise = 0x4e4f4953 };

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Folds the parts left to right: h = splitmix64(h ^ part), starting from
/// h = splitmix64(base). Used to derive per-replicate seeds from a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts) noexcept;

/// Seeded mt19937_64 with a platform-independent uniform in [0, 1) built
/// from the top 53 bits (std::uniform_real_distribution is not portable).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() noexcept {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace vlmc
