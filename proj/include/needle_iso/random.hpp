#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace needle_iso {

/// SplitMix64. Same seed gives the same stream on every platform; uniform and
/// normal deviates are derived here rather than through <random>
/// distributions, whose output is implementation-defined.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next() % span);
  }

  /// Standard normal by Box-Muller (both variates used).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct RngSpec {
  std::uint64_t seed = 0;
  static constexpr std::string_view algorithm = "splitmix64";

  /// Independent stream for a task; depends only on (seed, task), never on
  /// scheduling.
  SplitMix64 substream(std::uint64_t task) const {
    SplitMix64 mixer(seed ^ (0xD1B54A32D192ED03ULL * (task + 1)));
    return SplitMix64(mixer.next());
  }

  SplitMix64 stream() const { return SplitMix64(seed); }
};

}  // namespace needle_iso
