#pragma once

#include <array>
#include <cmath>
#include <limits>

namespace needle_iso {

/// Adaptive Gauss-Kronrod settings. `tol` is an absolute error budget for
/// the whole integral; integrands are expected to be O(1) (densities are
/// normalized before their masses are taken).
struct QuadratureSpec {
  double tol = 1e-12;
  unsigned max_depth = 40;

  /// Tighter budget used to check that results are converged.
  QuadratureSpec refined() const { return QuadratureSpec{tol * 1e-2, max_depth + 10}; }

  friend bool operator==(const QuadratureSpec&, const QuadratureSpec&) = default;
};

inline constexpr QuadratureSpec kDefaultQuadrature{};

namespace detail {

// Kronrod 15-point abscissae (positive half) and weights, with the embedded
// 7-point Gauss weights on the odd-indexed nodes.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct KronrodEstimate {
  double value;
  double error;
  bool roundoff_limited;
};

// One G7K15 panel with the QUADPACK error scaling.
template <class F>
KronrodEstimate kronrod15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = static_cast<double>(f(center));
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  double resabs = std::abs(resk);
  std::array<double, 7> f1{};
  std::array<double, 7> f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = static_cast<double>(f(center - dx));
    f2[j] = static_cast<double>(f(center + dx));
    const double sum = f1[j] + f2[j];
    resk += kWgk[j] * sum;
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * sum;
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }
  resk *= half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs((resk - resg * half));
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double floor = 50 * eps * resabs;
  const bool limited = err <= floor;
  return {resk, std::max(err, floor), limited};
}

template <class F>
double adaptive(F& f, double a, double b, KronrodEstimate whole, double tol, unsigned depth) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (whole.error <= tol || whole.roundoff_limited || depth == 0 ||
      std::abs(b - a) <= 8 * eps * std::max(std::abs(a), std::abs(b))) {
    return whole.value;
  }
  const double mid = 0.5 * (a + b);
  const auto left = kronrod15(f, a, mid);
  const auto right = kronrod15(f, mid, b);
  if (left.error + right.error <= tol ||
      (left.roundoff_limited && right.roundoff_limited)) {
    return left.value + right.value;
  }
  return adaptive(f, a, mid, left, 0.5 * tol, depth - 1) +
         adaptive(f, mid, b, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive G7K15 integral of f over [a, b]; 0 when b <= a.
template <class F>
double integrate(F&& f, double a, double b, const QuadratureSpec& spec = kDefaultQuadrature) {
  if (!(b > a)) return 0.0;
  const auto whole = detail::kronrod15(f, a, b);
  return detail::adaptive(f, a, b, whole, spec.tol, spec.max_depth);
}

}  // namespace needle_iso
