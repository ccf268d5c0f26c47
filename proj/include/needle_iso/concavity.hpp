#pragma once

// Sampled verifier for sin^N-concavity and the comparison checks that go
// with it. A function f >= 0 on an interval I of length <= pi is
// sin^N-concave when, for all x1, x2 in I with |x2 - x1| < pi,
//
//   f((x1 + x2) / 2)^(1/N) >= (f(x1)^(1/N) + f(x2)^(1/N)) / (2 cos(|x2 - x1| / 2)).
//
// The verifier is sound but sampled: it checks every grid pair at least two
// grid steps apart, so a `true` answer means "no violation at this
// resolution".

#include <cmath>
#include <concepts>
#include <cstddef>
#include <sstream>
#include <vector>

#include "needle_iso/density.hpp"
#include "needle_iso/error.hpp"
#include "needle_iso/quadrature.hpp"

namespace needle_iso {

struct ConcavityOptions {
  std::size_t grid_size = 1024;
  double tol = 1e-9;
};

template <class F>
  requires std::invocable<const F&, double>
bool is_sin_concave(const F& f, Interval interval, double order,
                    const ConcavityOptions& opts = {}) {
  if (!(order > 0.0) || !std::isfinite(order)) {
    throw Error(ErrorCode::InvalidOrder, "sin-concavity order must be > 0");
  }
  if (opts.grid_size < 3) {
    throw Error(ErrorCode::InvalidArgument, "concavity grid needs at least 3 points");
  }
  const std::size_t g = opts.grid_size;
  const double step = interval.length() / static_cast<double>(g - 1);
  const double inv_order = 1.0 / order;

  // Values on the half-step grid: index 2i is grid point i, and the midpoint
  // of grid points i and j sits at index i + j.
  const std::size_t half_count = 2 * g - 1;
  std::vector<double> raw(half_count);
  std::vector<double> root(half_count);
  for (std::size_t j = 0; j < half_count; ++j) {
    const double t = (j + 1 == half_count)
                         ? interval.hi()
                         : interval.lo() + 0.5 * step * static_cast<double>(j);
    const double v = static_cast<double>(f(t));
    if (!std::isfinite(v) || v < 0.0) return false;
    raw[j] = v;
    root[j] = std::pow(v, inv_order);
  }

  std::vector<double> half_cos(g);
  for (std::size_t d = 0; d < g; ++d) {
    half_cos[d] = std::cos(0.5 * step * static_cast<double>(d));
  }

  for (std::size_t i = 0; i < g; ++i) {
    if (!(raw[2 * i] > opts.tol)) continue;
    for (std::size_t j = i + 2; j < g; ++j) {
      const std::size_t d = j - i;
      if (!(static_cast<double>(d) * step < kPi * (1.0 - 1e-12))) break;
      if (!(raw[2 * j] > opts.tol)) continue;
      const double rhs = (root[2 * i] + root[2 * j]) / (2.0 * half_cos[d]);
      const double lhs = root[i + j];
      if (lhs < rhs - opts.tol * std::max(1.0, rhs)) return false;
    }
  }
  return true;
}

template <Density D>
bool is_sin_concave(const D& density, double order, const ConcavityOptions& opts = {}) {
  return is_sin_concave([&density](double t) { return density.pdf(t); },
                        density.support(), order, opts);
}

struct ComparisonOptions {
  std::size_t grid_size = 512;
  double pointwise_tol = 1e-8;
  double ratio_tol = 1e-10;
  ConcavityOptions concavity{};
  QuadratureSpec quadrature{};
};

struct ComparisonReport {
  bool pointwise_ok = false;
  bool ratio_ok = false;
  bool tau_ok = false;  // support ends at or before pi/2
  double matched_constant = 0.0;
  double max_pointwise_violation = 0.0;
  double ratio_lhs = 0.0;
  double ratio_rhs = 0.0;
};

/// Compares a sin^n-concave f on [0, tau], maximal at 0, against
/// h = C cos^n with h(eps) = f(eps), both pointwise and through the
/// sin^k-weighted mass ratio of [0, eps].
template <class F>
  requires std::invocable<const F&, double>
ComparisonReport check_comparison_lemma(const F& f, double order, double tau, double eps,
                                        double k, const ComparisonOptions& opts = {}) {
  if (!(eps > 0.0 && eps < kHalfPi)) {
    throw Error(ErrorCode::PreconditionFailed, "comparison requires 0 < eps < pi/2");
  }
  if (!(tau > eps) || tau > kPi) {
    throw Error(ErrorCode::PreconditionFailed, "comparison requires eps < tau <= pi");
  }
  if (!(k >= 0.0)) {
    throw Error(ErrorCode::PreconditionFailed, "comparison requires k >= 0");
  }
  const Interval support(0.0, tau);
  if (!is_sin_concave(f, support, order, opts.concavity)) {
    std::ostringstream os;
    os << "function is not sin^" << order << "-concave on [0, " << tau << "]";
    throw Error(ErrorCode::PreconditionFailed, os.str());
  }

  const std::size_t g = std::max<std::size_t>(opts.grid_size, 2);
  std::vector<double> ts(g);
  std::vector<double> fs(g);
  for (std::size_t i = 0; i < g; ++i) {
    ts[i] = (i + 1 == g) ? tau : tau * static_cast<double>(i) / static_cast<double>(g - 1);
    fs[i] = static_cast<double>(f(ts[i]));
  }
  const double peak = fs[0];
  for (double v : fs) {
    if (v > peak * (1.0 + 1e-12) + 1e-300) {
      throw Error(ErrorCode::PreconditionFailed, "function is not maximal at 0");
    }
  }
  const double f_eps = static_cast<double>(f(eps));
  if (!(f_eps > 0.0)) {
    throw Error(ErrorCode::PreconditionFailed, "function vanishes at eps");
  }

  ComparisonReport report;
  report.tau_ok = tau <= kHalfPi + kDomainSlack;
  report.matched_constant = f_eps / std::pow(std::cos(eps), order);
  const auto h = [&](double t) {
    return report.matched_constant * clamped_pow(std::cos(t), order);
  };

  const double scale = opts.pointwise_tol * std::max(1.0, peak);
  report.pointwise_ok = true;
  for (std::size_t i = 0; i < g; ++i) {
    const double diff = fs[i] - h(ts[i]);
    // Below eps f must dominate h, above eps h must dominate f.
    const double violation = ts[i] <= eps ? -diff : diff;
    report.max_pointwise_violation = std::max(report.max_pointwise_violation, violation);
    if (violation > scale) report.pointwise_ok = false;
  }

  const auto weighted = [&](double t) {
    return static_cast<double>(f(t)) * clamped_pow(std::sin(t), k);
  };
  const auto model = [&](double t) {
    return clamped_pow(std::cos(t), order) * clamped_pow(std::sin(t), k);
  };
  const double num = integrate(weighted, 0.0, std::min(eps, tau), opts.quadrature);
  const double den = integrate(weighted, 0.0, tau, opts.quadrature);
  const double model_num = integrate(model, 0.0, eps, opts.quadrature);
  const double model_den = integrate(model, 0.0, kHalfPi, opts.quadrature);
  report.ratio_lhs = den > 0.0 ? num / den : 0.0;
  report.ratio_rhs = model_den > 0.0 ? model_num / model_den : 0.0;
  report.ratio_ok = report.ratio_lhs >= report.ratio_rhs - opts.ratio_tol;
  return report;
}

}  // namespace needle_iso
