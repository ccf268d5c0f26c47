#pragma once

// Independent verification machinery: Monte Carlo cap masses on spheres and
// random sin^p-affine needles.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "needle_iso/density.hpp"
#include "needle_iso/error.hpp"
#include "needle_iso/parallel.hpp"
#include "needle_iso/random.hpp"

namespace needle_iso {

struct MonteCarloEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::size_t samples = 0;

  bool within_sigmas(double target, double sigmas = 3.0) const {
    return std::abs(estimate - target) <= sigmas * stderr_;
  }
};

/// Normalized volume of the geodesic cap of `cap_radius` around the north
/// pole of the unit sphere S^n, estimated from uniform samples (normalized
/// isotropic Gaussian vectors in R^(n+1)). Samples are drawn in fixed-size
/// chunks, each from its own substream, so the estimate does not depend on
/// the thread count.
inline MonteCarloEstimate mc_cap_mass(int n, double cap_radius, std::size_t samples,
                                      const RngSpec& rng, std::size_t threads = 0) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "sphere dimension must be >= 1");
  if (samples == 0) throw Error(ErrorCode::InvalidArgument, "need at least one sample");
  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (samples + kChunk - 1) / kChunk;
  const double threshold = std::cos(cap_radius);
  const auto hits = parallel_map(
      chunks,
      [&](std::size_t c) {
        SplitMix64 gen = rng.substream(c);
        const std::size_t begin = c * kChunk;
        const std::size_t end = std::min(samples, begin + kChunk);
        std::vector<double> x(static_cast<std::size_t>(n) + 1);
        std::size_t count = 0;
        for (std::size_t s = begin; s < end; ++s) {
          double norm2 = 0.0;
          do {
            norm2 = 0.0;
            for (auto& xi : x) {
              xi = gen.normal();
              norm2 += xi * xi;
            }
          } while (norm2 == 0.0);
          if (x[0] / std::sqrt(norm2) >= threshold) ++count;
        }
        return count;
      },
      threads);
  std::size_t total = 0;
  for (auto h : hits) total += h;
  MonteCarloEstimate out;
  out.samples = samples;
  out.estimate = static_cast<double>(total) / static_cast<double>(samples);
  out.stderr_ = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(samples));
  return out;
}

/// Draws a normalized sin^p-affine needle cos(t - phase)^p on [0, L] with
/// L uniform in (0, interval_length_max], p uniform from `p_range`, and phase
/// uniform over the range that keeps the density positive on (0, L).
inline SinAffineDensity random_affine_needle(double interval_length_max,
                                             std::span<const double> p_range, SplitMix64& rng,
                                             const QuadratureSpec& quad = kDefaultQuadrature) {
  if (p_range.empty()) throw Error(ErrorCode::InvalidArgument, "p_range must be nonempty");
  if (!(interval_length_max > 0.0 && interval_length_max <= kPi + kDomainSlack)) {
    throw Error(ErrorCode::InvalidArgument, "needle length must be in (0, pi]");
  }
  const double length_max = std::min(interval_length_max, kPi);
  for (int attempt = 0; attempt < 100; ++attempt) {
    const double length = length_max * (1e-3 + (1.0 - 1e-3) * (1.0 - rng.uniform()));
    const double phase = rng.uniform(length - kHalfPi, kHalfPi);
    const auto pick = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(p_range.size()) - 1));
    const double power = p_range[pick];
    // Interior positivity; the endpoints may touch a zero of cos(t - phase).
    bool positive = true;
    for (int s = 1; s < 8 && positive; ++s) {
      positive = std::cos(length * s / 8.0 - phase) > 0.0;
    }
    if (!positive) continue;
    try {
      return SinAffineDensity::normalized(phase, power, Interval(0.0, length), quad);
    } catch (const Error&) {
      continue;
    }
  }
  throw Error(ErrorCode::RetryExhausted, "100 needle draws failed the positivity check");
}

}  // namespace needle_iso
