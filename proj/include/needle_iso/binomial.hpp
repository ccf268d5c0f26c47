#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "needle_iso/density.hpp"
#include "needle_iso/error.hpp"
#include "needle_iso/quadrature.hpp"

namespace needle_iso {

/// Expansion of an integer-power sin-affine density into trig monomials,
///   norm (C1 sin t + C2 cos t)^p = sum_i A_i cos^(p-i)(t) sin^i(t),
/// with mass alpha_i = integral of the i-th term over the density's support.
struct BinomialDecomposition {
  struct Component {
    int sin_power = 0;  // i
    int cos_power = 0;  // p - i
    double coefficient = 0.0;
    double mass = 0.0;
  };

  int power = 0;
  Interval interval;
  std::vector<Component> components;

  double evaluate(double t) const {
    const double c = std::cos(t);
    const double s = std::sin(t);
    double sum = 0.0;
    for (const auto& comp : components) {
      sum += comp.coefficient * std::pow(c, comp.cos_power) * std::pow(s, comp.sin_power);
    }
    return sum;
  }

  bool all_nonnegative() const {
    return std::all_of(components.begin(), components.end(),
                       [](const Component& c) { return c.coefficient >= 0.0; });
  }

  double total_mass() const {
    double sum = 0.0;
    for (const auto& c : components) sum += c.mass;
    return sum;
  }
};

inline BinomialDecomposition binomial_decompose(const SinAffineDensity& density) {
  const double p = density.power();
  const double rounded = std::round(p);
  if (std::abs(p - rounded) > 1e-12) {
    throw Error(ErrorCode::NonIntegerPower, "binomial decomposition needs an integer power");
  }
  const int power = static_cast<int>(rounded);

  BinomialDecomposition out;
  out.power = power;
  out.interval = density.support();

  std::vector<double> coefficients(power + 1);
  double binom = 1.0;
  double largest = 0.0;
  for (int i = 0; i <= power; ++i) {
    coefficients[i] = density.norm() * binom * std::pow(density.c2(), power - i) *
                      std::pow(density.c1(), i);
    largest = std::max(largest, std::abs(coefficients[i]));
    binom = binom * (power - i) / (i + 1);
  }
  for (int i = 0; i <= power; ++i) {
    // Terms that only exist through rounding of cos(pi/2) and friends.
    if (std::abs(coefficients[i]) <= 1e-14 * largest) continue;
    BinomialDecomposition::Component comp;
    comp.sin_power = i;
    comp.cos_power = power - i;
    comp.coefficient = coefficients[i];
    comp.mass = coefficients[i] * integrate(
                                      [&](double t) {
                                        return std::pow(std::cos(t), power - i) *
                                               std::pow(std::sin(t), i);
                                      },
                                      out.interval.lo(), out.interval.hi(),
                                      density.quadrature());
    out.components.push_back(comp);
  }
  return out;
}

}  // namespace needle_iso
