#pragma once

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <vector>

#include "needle_iso/density.hpp"
#include "needle_iso/error.hpp"

namespace needle_iso {

/// Mass thresholds (k1, k2), each in (0, 1].
class MassPair {
 public:
  MassPair(double k1, double k2) : k1_(k1), k2_(k2) {
    check(k1);
    check(k2);
  }

  double k1() const { return k1_; }
  double k2() const { return k2_; }
  MassPair swapped() const { return MassPair(k2_, k1_); }

  /// One mass at most 1/2 and the other at least 1/2.
  bool straddles_half() const {
    return std::min(k1_, k2_) <= 0.5 && std::max(k1_, k2_) >= 0.5;
  }

  friend bool operator==(const MassPair&, const MassPair&) = default;

 private:
  static void check(double k) {
    if (!(k > 0.0 && k <= 1.0)) {
      std::ostringstream os;
      os << "mass must be in (0,1], got " << k;
      throw Error(ErrorCode::InvalidMass, os.str());
    }
  }

  double k1_;
  double k2_;
};

struct SeparationResult {
  double sep = 0.0;
  Interval left;   // extreme interval at the low end of the support
  Interval right;  // extreme interval at the high end of the support
  bool k1_left = true;  // whether `left` carries mass k1 (else k2)

  Interval k1_interval() const { return k1_left ? left : right; }
  Interval k2_interval() const { return k1_left ? right : left; }
};

namespace detail {
// Interval from lo to a quantile; degenerate quantiles (mass 1 at an
// endpoint density spike) widen by one ulp so the type invariant holds.
inline Interval interval_between(double a, double b) {
  if (!(b > a)) b = std::nextafter(a, a + 1.0);
  return Interval(a, b);
}
}  // namespace detail

/// Separation distance of a 1-D probability density for masses (k1, k2):
/// the larger gap between the two extreme intervals of masses k1 and k2,
/// over both placements (k1 at the low end, or k2 at the low end).
template <Density D>
SeparationResult sep_1d(const D& density, const MassPair& masses) {
  const Interval iv = density.support();
  const double k1 = masses.k1();
  const double k2 = masses.k2();
  const double q_k1 = quantile(density, k1);
  const double q_k2 = quantile(density, k2);
  const double q_not_k1 = quantile(density, 1.0 - k1);
  const double q_not_k2 = quantile(density, 1.0 - k2);

  // With k1 + k2 >= 1 the extreme intervals meet; 1 - k2 and k1 can still
  // differ in the last bit, so the gap is zeroed rather than left to rounding.
  const bool overlap = k1 + k2 >= 1.0;
  const double gap_k1_left = overlap ? 0.0 : q_not_k2 - q_k1;
  const double gap_k2_left = overlap ? 0.0 : q_not_k1 - q_k2;

  SeparationResult out;
  if (gap_k2_left > gap_k1_left) {
    out.k1_left = false;
    out.sep = std::max(0.0, gap_k2_left);
    out.left = detail::interval_between(iv.lo(), q_k2);
    out.right = detail::interval_between(std::min(q_not_k1, std::nextafter(iv.hi(), iv.lo())),
                                         iv.hi());
  } else {
    out.k1_left = true;
    out.sep = std::max(0.0, gap_k1_left);
    out.left = detail::interval_between(iv.lo(), q_k1);
    out.right = detail::interval_between(std::min(q_not_k2, std::nextafter(iv.hi(), iv.lo())),
                                         iv.hi());
  }
  return out;
}

/// Grid oracle for sep_1d. Cuts the support into `grid_size` equal cells,
/// takes cumulative masses from the tabulated density at the cell
/// boundaries, and scans boundary pairs (i, j), i <= j, for which [lo, x_i]
/// and [x_j, hi] carry the required masses, in both placements. Admissible
/// i form an upper set and admissible j a lower set, so the widest pair is
/// the smallest admissible i with the largest admissible j.
inline double sep_1d_bruteforce(const TabulatedDensity& density, const MassPair& masses,
                                std::size_t grid_size) {
  if (grid_size < 64) {
    throw Error(ErrorCode::InvalidArgument, "brute-force grid needs at least 64 cells");
  }
  const Interval iv = density.support();
  const std::size_t n = grid_size + 1;
  std::vector<double> x(n);
  std::vector<double> below(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = (i + 1 == n) ? iv.hi()
                        : iv.lo() + iv.length() * static_cast<double>(i) /
                                        static_cast<double>(grid_size);
    below[i] = density.mass(iv.lo(), x[i]);
  }
  below.back() = 1.0;

  // Absorbs rounding in the cumulative sums at exact masses.
  constexpr double slack = 1e-12;
  double best = 0.0;
  for (const auto& [low_mass, high_mass] :
       {std::pair{masses.k1(), masses.k2()}, std::pair{masses.k2(), masses.k1()}}) {
    std::size_t i = 0;
    while (i < n && below[i] + slack < low_mass) ++i;
    std::size_t j = n;
    while (j > 0 && 1.0 - below[j - 1] + slack < high_mass) --j;
    if (i < n && j > 0 && j - 1 >= i) best = std::max(best, x[j - 1] - x[i]);
  }
  return best;
}

}  // namespace needle_iso
