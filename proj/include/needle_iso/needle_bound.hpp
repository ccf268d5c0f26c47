#pragma once

// Needle separation distance N(k1, k2): the largest 1-D separation distance
// over the admissible needle families.
//
//  * spheres: the single needle cos^(n-1) on [-pi/2, pi/2];
//  * diameter-pi/2 spaces: cos^m sin^k on [0, pi/2] over integer pairs with
//    n - 1 <= m + k <= max_total_power;
//  * a seeded random search over sin^p-affine needles, used to probe both.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <sstream>
#include <variant>
#include <vector>

#include "needle_iso/cross_spaces.hpp"
#include "needle_iso/density.hpp"
#include "needle_iso/error.hpp"
#include "needle_iso/oracles.hpp"
#include "needle_iso/parallel.hpp"
#include "needle_iso/random.hpp"
#include "needle_iso/separation.hpp"

namespace needle_iso {

struct SphereCosFamily {
  double power = 0.0;
  friend bool operator==(const SphereCosFamily&, const SphereCosFamily&) = default;
};

struct TrigFamily {
  int m = 0;  // cosine exponent
  int k = 0;  // sine exponent
  friend bool operator==(const TrigFamily&, const TrigFamily&) = default;
};

struct AffineFamily {
  double phase = 0.0;
  double power = 0.0;
  Interval interval;
  friend bool operator==(const AffineFamily&, const AffineFamily&) = default;
};

using NeedleFamily = std::variant<SphereCosFamily, TrigFamily, AffineFamily>;

struct NeedleBoundResult {
  double bound = 0.0;
  /// Every maximizing needle; ties (mirror pairs) are all listed.
  std::vector<NeedleFamily> argmax;
  /// Set when the straddle hypothesis failed and the value was computed on
  /// request anyway.
  bool heuristic = false;
  SeparationResult realization;
};

struct BoundOptions {
  bool force = false;
  /// Defaults to dim + 7 for diameter-pi/2 spaces.
  std::optional<int> max_total_power;
  /// Lowest m + k considered; defaults to dim - 1.
  std::optional<int> min_total_power;
  double tie_tol = 1e-10;
  QuadratureSpec quadrature{};
};

/// Normalized density of a needle family member.
inline TrigDensity needle_density(const SphereCosFamily& f,
                                  const QuadratureSpec& quad = kDefaultQuadrature) {
  return TrigDensity::normalized(f.power, 0.0, Interval(-kHalfPi, kHalfPi), quad);
}

inline TrigDensity needle_density(const TrigFamily& f,
                                  const QuadratureSpec& quad = kDefaultQuadrature) {
  return TrigDensity::normalized(f.m, f.k, Interval(0.0, kHalfPi), quad);
}

inline SinAffineDensity needle_density(const AffineFamily& f,
                                       const QuadratureSpec& quad = kDefaultQuadrature) {
  return SinAffineDensity::normalized(f.phase, f.power, f.interval, quad);
}

/// Separation distance of the needle a family tag describes.
inline SeparationResult family_separation(const NeedleFamily& family, const MassPair& masses,
                                          const QuadratureSpec& quad = kDefaultQuadrature) {
  return std::visit([&](const auto& f) { return sep_1d(needle_density(f, quad), masses); },
                    family);
}

namespace detail {
inline void check_straddle(const MassPair& masses, bool force, bool& heuristic) {
  if (masses.straddles_half()) return;
  if (!force) {
    std::ostringstream os;
    os << "needle bound needs one mass <= 1/2 <= the other, got (" << masses.k1() << ", "
       << masses.k2() << "); pass force to compute it as a heuristic";
    throw Error(ErrorCode::HypothesisViolated, os.str());
  }
  heuristic = true;
}
}  // namespace detail

/// N(k1, k2) on S^n: separation of the cos^(n-1) needle on [-pi/2, pi/2].
inline NeedleBoundResult sphere_needle_bound(int n, const MassPair& masses,
                                             const BoundOptions& opts = {}) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "sphere dimension must be >= 2");
  NeedleBoundResult out;
  detail::check_straddle(masses, opts.force, out.heuristic);
  const SphereCosFamily family{static_cast<double>(n - 1)};
  out.realization = sep_1d(needle_density(family, opts.quadrature), masses);
  out.bound = out.realization.sep;
  out.argmax.push_back(family);
  return out;
}

/// Per-(m, k) separations scanned by cross_needle_bound, in scan order.
struct TrigScanEntry {
  TrigFamily family;
  SeparationResult separation;
};

inline std::vector<TrigScanEntry> scan_trig_family(int min_total, int max_total,
                                                   const MassPair& masses,
                                                   const QuadratureSpec& quad = kDefaultQuadrature) {
  std::vector<TrigScanEntry> out;
  for (int total = std::max(0, min_total); total <= max_total; ++total) {
    for (int m = total; m >= 0; --m) {
      const TrigFamily family{m, total - m};
      out.push_back({family, sep_1d(needle_density(family, quad), masses)});
    }
  }
  return out;
}

/// N(k1, k2) on a diameter-pi/2 space of real dimension n: the largest
/// separation of cos^m sin^k on [0, pi/2] over n - 1 <= m + k <= max power.
inline NeedleBoundResult cross_needle_bound(const CrossSpace& space, const MassPair& masses,
                                            const BoundOptions& opts = {}) {
  if (space.is_sphere()) {
    throw Error(ErrorCode::NotApplicable, "cross_needle_bound needs a diameter-pi/2 space");
  }
  const int min_total = opts.min_total_power.value_or(space.dim() - 1);
  const int max_total = opts.max_total_power.value_or(space.dim() + 7);
  if (max_total < min_total) {
    std::ostringstream os;
    os << "max_total_power " << max_total << " is below the admissible minimum " << min_total;
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
  NeedleBoundResult out;
  detail::check_straddle(masses, opts.force, out.heuristic);
  const auto scan = scan_trig_family(min_total, max_total, masses, opts.quadrature);
  double best = -1.0;
  for (const auto& e : scan) best = std::max(best, e.separation.sep);
  out.bound = best;
  for (const auto& e : scan) {
    if (e.separation.sep >= best - opts.tie_tol) {
      if (out.argmax.empty()) out.realization = e.separation;
      out.argmax.push_back(e.family);
    }
  }
  return out;
}

struct AffineSample {
  double phase = 0.0;
  double power = 0.0;
  double length = 0.0;
  double sep = 0.0;
};

struct AffineSearchResult {
  double best_sep = 0.0;
  std::optional<AffineFamily> best_needle;
  std::vector<AffineSample> all_samples;
};

/// Seeded random search over sin^p-affine needles with support length at
/// most `interval_length_max`. Sample i uses substream i, and the best is
/// chosen in index order, so the result does not depend on the thread count.
inline AffineSearchResult optimize_affine_family(double interval_length_max,
                                                 std::span<const double> p_range,
                                                 const MassPair& masses, std::size_t samples,
                                                 std::uint64_t seed, std::size_t threads = 0,
                                                 const QuadratureSpec& quad = kDefaultQuadrature) {
  if (samples == 0) throw Error(ErrorCode::InvalidArgument, "samples must be >= 1");
  const RngSpec rng{seed};
  AffineSearchResult out;
  out.all_samples = parallel_map(
      samples,
      [&](std::size_t i) {
        SplitMix64 gen = rng.substream(i);
        const auto needle = random_affine_needle(interval_length_max, p_range, gen, quad);
        return AffineSample{needle.phase(), needle.power(), needle.support().length(),
                            sep_1d(needle, masses).sep};
      },
      threads);
  std::size_t best = 0;
  for (std::size_t i = 1; i < samples; ++i) {
    if (out.all_samples[i].sep > out.all_samples[best].sep) best = i;
  }
  const auto& b = out.all_samples[best];
  out.best_sep = b.sep;
  out.best_needle = AffineFamily{b.phase, b.power, Interval(0.0, b.length)};
  return out;
}

struct BoundRow {
  double k1 = 0.0;
  double k2 = 0.0;
  NeedleBoundResult result;
};

/// Evaluates `bound_fn` on the grid k1_grid x k2_grid; rows sorted by (k1, k2).
inline std::vector<BoundRow> bound_profile(
    const std::function<NeedleBoundResult(const MassPair&)>& bound_fn,
    std::span<const double> k1_grid, std::span<const double> k2_grid,
    std::size_t threads = 0) {
  std::vector<double> k1s(k1_grid.begin(), k1_grid.end());
  std::vector<double> k2s(k2_grid.begin(), k2_grid.end());
  std::sort(k1s.begin(), k1s.end());
  std::sort(k2s.begin(), k2s.end());
  for (double k : k1s) MassPair(k, 0.5);
  for (double k : k2s) MassPair(0.5, k);
  const std::size_t cols = k2s.size();
  return parallel_map(
      k1s.size() * cols,
      [&](std::size_t idx) {
        const double k1 = k1s[idx / cols];
        const double k2 = k2s[idx % cols];
        return BoundRow{k1, k2, bound_fn(MassPair(k1, k2))};
      },
      threads);
}

}  // namespace needle_iso
