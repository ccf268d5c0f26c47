#pragma once

// Probability densities on intervals of the real line: trig monomials
// cos^m sin^k, sin^p-affine profiles (C1 sin + C2 cos)^p, and piecewise
// linear tables. All densities share the `Density` concept, which is what
// cdf(), quantile() and the separation machinery are written against.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "needle_iso/error.hpp"
#include "needle_iso/quadrature.hpp"

namespace needle_iso {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2;

/// Slack allowed when checking that an interval fits a sign region, so that
/// endpoints written as +-pi/2 in decimal still validate.
inline constexpr double kDomainSlack = 1e-9;

/// Closed interval [lo, hi] with lo < hi and length at most pi.
class Interval {
 public:
  Interval() = default;

  Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
      std::ostringstream os;
      os << "interval requires lo < hi, got [" << lo << ", " << hi << "]";
      throw Error(ErrorCode::InvalidInterval, os.str());
    }
    if (hi - lo > kPi + kDomainSlack) {
      std::ostringstream os;
      os << "interval length " << hi - lo << " exceeds pi";
      throw Error(ErrorCode::InvalidInterval, os.str());
    }
  }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double length() const { return hi_ - lo_; }
  double midpoint() const { return 0.5 * (lo_ + hi_); }
  bool contains(double t) const { return t >= lo_ && t <= hi_; }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lo_ = 0.0;
  double hi_ = 1.0;
};

// 0^0 is 1; negative bases from rounding at sign boundaries clamp to 0.
inline double clamped_pow(double base, double exponent) {
  if (exponent == 0.0) return 1.0;
  if (base <= 0.0) return 0.0;
  if (exponent <= 32.0 && exponent == std::floor(exponent)) {
    auto n = static_cast<unsigned>(exponent);
    double result = 1.0;
    for (double x = base; n != 0; n >>= 1, x *= x) {
      if (n & 1U) result *= x;
    }
    return result;
  }
  return std::pow(base, exponent);
}

template <class D>
concept Density = requires(const D& d, double t) {
  { d.pdf(t) } -> std::convertible_to<double>;
  { d.mass(t, t) } -> std::convertible_to<double>;
  { d.support() } -> std::convertible_to<Interval>;
};

/// Unnormalized cos^m(t) sin^k(t) on an interval.
struct TrigShape {
  double m = 0.0;
  double k = 0.0;
  Interval interval;
};

/// Unnormalized (sin(phase) sin t + cos(phase) cos t)^power on an interval.
struct SinAffineShape {
  double phase = 0.0;
  double power = 0.0;
  Interval interval;
};

/// Normalized density norm * cos^m(t) sin^k(t) on its interval.
class TrigDensity {
 public:
  static TrigDensity normalized(double m, double k, Interval interval,
                                const QuadratureSpec& quad = kDefaultQuadrature) {
    if (!(m >= 0.0) || !(k >= 0.0) || !std::isfinite(m) || !std::isfinite(k)) {
      throw Error(ErrorCode::InvalidDensity, "trig exponents must be finite and >= 0");
    }
    if (m > 0.0 && (interval.lo() < -kHalfPi - kDomainSlack ||
                    interval.hi() > kHalfPi + kDomainSlack)) {
      throw Error(ErrorCode::InvalidDensity,
                  "cos^m with m > 0 requires the interval inside [-pi/2, pi/2]");
    }
    if (k > 0.0 && (interval.lo() < -kDomainSlack || interval.hi() > kPi + kDomainSlack)) {
      throw Error(ErrorCode::InvalidDensity,
                  "sin^k with k > 0 requires the interval inside [0, pi]");
    }
    TrigDensity d(m, k, interval, 1.0, quad);
    const double total = d.raw_total();
    if (!(total > std::numeric_limits<double>::min())) {
      throw Error(ErrorCode::ZeroMass, "trig density has zero mass on its interval");
    }
    d.norm_ = 1.0 / total;
    return d;
  }

  double m() const { return m_; }
  double k() const { return k_; }
  double norm() const { return norm_; }
  Interval support() const { return interval_; }
  const QuadratureSpec& quadrature() const { return quad_; }

  double shape(double t) const {
    return clamped_pow(std::cos(t), m_) * clamped_pow(std::sin(t), k_);
  }
  double pdf(double t) const { return norm_ * shape(t); }

  /// Probability of [a, b]; a and b are clipped to the support.
  double mass(double a, double b) const {
    a = std::max(a, interval_.lo());
    b = std::min(b, interval_.hi());
    return integrate([this](double t) { return pdf(t); }, a, b, quad_);
  }

 private:
  TrigDensity(double m, double k, Interval interval, double norm, QuadratureSpec quad)
      : m_(m), k_(k), interval_(interval), norm_(norm), quad_(quad) {}

  // Unnormalized total, with the absolute budget rescaled to the total's
  // magnitude so tiny totals keep full relative accuracy.
  double raw_total() const {
    const auto f = [this](double t) { return shape(t); };
    const double rough = integrate(f, interval_.lo(), interval_.hi(), quad_);
    if (!(rough > 0.0)) return rough;
    QuadratureSpec scaled = quad_;
    scaled.tol = quad_.tol * rough;
    return integrate(f, interval_.lo(), interval_.hi(), scaled);
  }

  double m_;
  double k_;
  Interval interval_;
  double norm_;
  QuadratureSpec quad_;
};

/// Normalized sin^p-affine density norm * (C1 sin t + C2 cos t)^p with
/// C1 = sin(phase), C2 = cos(phase). Positive on the open interval.
class SinAffineDensity {
 public:
  static SinAffineDensity normalized(double phase, double power, Interval interval,
                                     const QuadratureSpec& quad = kDefaultQuadrature) {
    if (!(power >= 0.0) || !std::isfinite(power) || !std::isfinite(phase)) {
      throw Error(ErrorCode::InvalidDensity, "affine power must be finite and >= 0");
    }
    // C1 sin t + C2 cos t = cos(t - phase) > 0 on (phase - pi/2, phase + pi/2).
    if (interval.lo() < phase - kHalfPi - kDomainSlack ||
        interval.hi() > phase + kHalfPi + kDomainSlack) {
      std::ostringstream os;
      os << "sin-affine density with phase " << phase << " is not positive on ["
         << interval.lo() << ", " << interval.hi() << "]";
      throw Error(ErrorCode::InvalidDensity, os.str());
    }
    SinAffineDensity d(phase, power, interval, 1.0, quad);
    const double total = d.raw_total();
    if (!(total > std::numeric_limits<double>::min())) {
      throw Error(ErrorCode::ZeroMass, "affine density has zero mass on its interval");
    }
    d.norm_ = 1.0 / total;
    return d;
  }

  double phase() const { return phase_; }
  double power() const { return power_; }
  double c1() const { return c1_; }
  double c2() const { return c2_; }
  double norm() const { return norm_; }
  Interval support() const { return interval_; }
  const QuadratureSpec& quadrature() const { return quad_; }

  double base(double t) const { return c1_ * std::sin(t) + c2_ * std::cos(t); }
  double shape(double t) const { return clamped_pow(base(t), power_); }
  double pdf(double t) const { return norm_ * shape(t); }

  double mass(double a, double b) const {
    a = std::max(a, interval_.lo());
    b = std::min(b, interval_.hi());
    return integrate([this](double t) { return pdf(t); }, a, b, quad_);
  }

 private:
  SinAffineDensity(double phase, double power, Interval interval, double norm,
                   QuadratureSpec quad)
      : phase_(phase),
        power_(power),
        c1_(std::sin(phase)),
        c2_(std::cos(phase)),
        interval_(interval),
        norm_(norm),
        quad_(quad) {}

  // Unnormalized total, with the absolute budget rescaled to the total's
  // magnitude so tiny totals keep full relative accuracy.
  double raw_total() const {
    const auto f = [this](double t) { return shape(t); };
    const double rough = integrate(f, interval_.lo(), interval_.hi(), quad_);
    if (!(rough > 0.0)) return rough;
    QuadratureSpec scaled = quad_;
    scaled.tol = quad_.tol * rough;
    return integrate(f, interval_.lo(), interval_.hi(), scaled);
  }

  double phase_;
  double power_;
  double c1_;
  double c2_;
  Interval interval_;
  double norm_;
  QuadratureSpec quad_;
};

/// Piecewise linear density through (grid[i], values[i]), rescaled so the
/// trapezoidal integral is exactly 1. Masses are computed in closed form.
class TabulatedDensity {
 public:
  TabulatedDensity(std::vector<double> grid, std::vector<double> values)
      : grid_(std::move(grid)), values_(std::move(values)) {
    if (grid_.size() < 2 || grid_.size() != values_.size()) {
      throw Error(ErrorCode::InvalidDensity,
                  "tabulated density needs >= 2 matching abscissae and values");
    }
    for (std::size_t i = 1; i < grid_.size(); ++i) {
      if (!(grid_[i] > grid_[i - 1])) {
        throw Error(ErrorCode::InvalidDensity, "tabulated grid must be strictly increasing");
      }
    }
    for (double v : values_) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw Error(ErrorCode::InvalidDensity, "tabulated values must be finite and >= 0");
      }
    }
    interval_ = Interval(grid_.front(), grid_.back());
    cumulative_.assign(grid_.size(), 0.0);
    for (std::size_t i = 1; i < grid_.size(); ++i) {
      cumulative_[i] = cumulative_[i - 1] +
                       0.5 * (values_[i] + values_[i - 1]) * (grid_[i] - grid_[i - 1]);
    }
    const double total = cumulative_.back();
    if (!(total > std::numeric_limits<double>::min())) {
      throw Error(ErrorCode::ZeroMass, "tabulated density has zero mass");
    }
    for (auto& v : values_) v /= total;
    for (auto& c : cumulative_) c /= total;
    cumulative_.back() = 1.0;
  }

  /// Samples `d` at `points` equally spaced abscissae spanning its support.
  template <Density D>
  static TabulatedDensity sample(const D& d, std::size_t points) {
    if (points < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 sample points");
    const Interval iv = d.support();
    std::vector<double> grid(points);
    std::vector<double> values(points);
    for (std::size_t i = 0; i < points; ++i) {
      grid[i] = (i + 1 == points)
                    ? iv.hi()
                    : iv.lo() + iv.length() * static_cast<double>(i) /
                                    static_cast<double>(points - 1);
      values[i] = d.pdf(grid[i]);
    }
    return TabulatedDensity(std::move(grid), std::move(values));
  }

  std::span<const double> grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  Interval support() const { return interval_; }

  double pdf(double t) const {
    if (t <= grid_.front()) return t == grid_.front() ? values_.front() : 0.0;
    if (t >= grid_.back()) return t == grid_.back() ? values_.back() : 0.0;
    const std::size_t i = cell(t);
    const double w = (t - grid_[i]) / (grid_[i + 1] - grid_[i]);
    return values_[i] + w * (values_[i + 1] - values_[i]);
  }

  double mass(double a, double b) const {
    a = std::max(a, interval_.lo());
    b = std::min(b, interval_.hi());
    if (!(b > a)) return 0.0;
    return std::max(0.0, cumulative_at(b) - cumulative_at(a));
  }

 private:
  std::size_t cell(double t) const {
    auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
    auto i = static_cast<std::size_t>(it - grid_.begin());
    return std::min(i == 0 ? 0 : i - 1, grid_.size() - 2);
  }

  double cumulative_at(double t) const {
    if (t <= grid_.front()) return 0.0;
    if (t >= grid_.back()) return 1.0;
    const std::size_t i = cell(t);
    const double dx = t - grid_[i];
    const double slope = (values_[i + 1] - values_[i]) / (grid_[i + 1] - grid_[i]);
    return cumulative_[i] + values_[i] * dx + 0.5 * slope * dx * dx;
  }

  std::vector<double> grid_;
  std::vector<double> values_;
  std::vector<double> cumulative_;
  Interval interval_;
};

inline TrigDensity normalize(const TrigShape& shape,
                             const QuadratureSpec& quad = kDefaultQuadrature) {
  return TrigDensity::normalized(shape.m, shape.k, shape.interval, quad);
}

inline SinAffineDensity normalize(const SinAffineShape& shape,
                                  const QuadratureSpec& quad = kDefaultQuadrature) {
  return SinAffineDensity::normalized(shape.phase, shape.power, shape.interval, quad);
}

template <Density D>
double cdf(const D& d, double t) {
  const Interval iv = d.support();
  if (!iv.contains(t)) {
    std::ostringstream os;
    os << "cdf argument " << t << " outside [" << iv.lo() << ", " << iv.hi() << "]";
    throw Error(ErrorCode::OutOfDomain, os.str());
  }
  if (t == iv.lo()) return 0.0;
  if (t == iv.hi()) return std::min(1.0, d.mass(iv.lo(), iv.hi()));
  return std::clamp(d.mass(iv.lo(), t), 0.0, 1.0);
}

/// Inverse CDF on a bracket that always contains the answer. Steps are
/// Illinois-weighted false position, with a bisection step whenever the
/// bracket fails to halve; no derivatives, so zeros of the density at the
/// endpoints are harmless. Masses are accumulated incrementally, so each step
/// integrates only between the bracket end and the new point.
template <Density D>
double quantile(const D& d, double q) {
  const Interval iv = d.support();
  if (!(q > 0.0)) return iv.lo();
  if (!(q < 1.0)) return iv.hi();
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double a = iv.lo();
  double b = iv.hi();
  double fa = -q;  // F(a) - q, exact up to quadrature error
  double fb = d.mass(a, b) - q;
  double wa = fa;  // Illinois-weighted residuals for the secant only
  double wb = fb;
  int kept = 0;  // +1: b survived the last step, -1: a did
  bool bisect = false;
  for (int iter = 0; iter < 200; ++iter) {
    const double width = b - a;
    double x = 0.5 * (a + b);
    if (!bisect && wb > wa) {
      const double t = a - wa * width / (wb - wa);
      if (t > a && t < b) x = t;
    }
    if (!(x > a && x < b)) break;
    const double fx = fa + d.mass(a, x);
    if (std::abs(fx) <= 4 * eps * q) return x;
    if (fx < 0.0) {
      a = x;
      fa = wa = fx;
      wb = kept == 1 ? 0.5 * wb : fb;
      kept = 1;
    } else {
      b = x;
      fb = wb = fx;
      wa = kept == -1 ? 0.5 * wa : fa;
      kept = -1;
    }
    if (b - a <= 4 * eps * std::max(1.0, std::abs(a))) break;
    bisect = !bisect && (b - a) > 0.5 * width;
  }
  return 0.5 * (a + b);
}

}  // namespace needle_iso
