#pragma once

// Compact rank one symmetric spaces (CROSS) and their radially symmetric
// isoperimetric candidates. Metrics are scaled so that projective spaces have
// diameter pi/2 and spheres have curvature 1 (diameter pi). A candidate of
// exponents (a, b) is the set of points within distance r of a core (a
// point or a totally geodesic submanifold); its normalized volume is
//
//   V(r) = int_0^r sin^a cos^b / int_0^diam sin^a cos^b.
//
// Reflection t -> diam - t maps (a, b) to (b, a): the complement of a tube
// is a tube around the polar submanifold.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "needle_iso/density.hpp"
#include "needle_iso/error.hpp"
#include "needle_iso/quadrature.hpp"

namespace needle_iso {

enum class CrossFamily { Sphere, RealProj, ComplexProj, QuatProj, CayleyPlane };

class CrossSpace {
 public:
  static CrossSpace sphere(int n) {
    require(n >= 2, "sphere dimension must be >= 2");
    return CrossSpace(CrossFamily::Sphere, n, n, kPi, n - 1, 0);
  }
  static CrossSpace real_projective(int n) {
    require(n >= 2, "RP^n needs n >= 2");
    return CrossSpace(CrossFamily::RealProj, n, n, kHalfPi, n - 1, 0);
  }
  static CrossSpace complex_projective(int n) {
    require(n >= 1, "CP^n needs n >= 1");
    return CrossSpace(CrossFamily::ComplexProj, n, 2 * n, kHalfPi, 2 * n - 1, 1);
  }
  static CrossSpace quaternionic_projective(int n) {
    require(n >= 1, "HP^n needs n >= 1");
    return CrossSpace(CrossFamily::QuatProj, n, 4 * n, kHalfPi, 4 * n - 1, 3);
  }
  static CrossSpace cayley_plane() {
    return CrossSpace(CrossFamily::CayleyPlane, 2, 16, kHalfPi, 15, 7);
  }

  /// Parses s2, s3, ..., rp2, ..., cp1, ..., hp1, ..., cap2.
  static CrossSpace parse(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "cap2") return cayley_plane();
    const auto with_index = [&](std::string_view prefix, auto make) -> std::optional<CrossSpace> {
      if (!lower.starts_with(prefix) || lower.size() == prefix.size()) return std::nullopt;
      const std::string_view digits = std::string_view(lower).substr(prefix.size());
      int n = 0;
      const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
      if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
      return make(n);
    };
    try {
      // Longer prefixes first so "rp3" is not read as a sphere.
      if (auto s = with_index("rp", real_projective)) return *s;
      if (auto s = with_index("cp", complex_projective)) return *s;
      if (auto s = with_index("hp", quaternionic_projective)) return *s;
      if (auto s = with_index("s", sphere)) return *s;
    } catch (const Error& e) {
      throw Error(ErrorCode::UnknownSpace, "unknown space '" + std::string(name) + "': " + e.what());
    }
    throw Error(ErrorCode::UnknownSpace, "unknown space '" + std::string(name) + "'");
  }

  CrossFamily family() const { return family_; }
  /// n in S^n, RP^n, CP^n, HP^n; 2 for the Cayley plane.
  int index() const { return index_; }
  /// Real dimension.
  int dim() const { return dim_; }
  double diameter() const { return diameter_; }
  int ball_a() const { return ball_a_; }
  int ball_b() const { return ball_b_; }
  bool is_sphere() const { return family_ == CrossFamily::Sphere; }

  std::string name() const {
    switch (family_) {
      case CrossFamily::Sphere: return "s" + std::to_string(index_);
      case CrossFamily::RealProj: return "rp" + std::to_string(index_);
      case CrossFamily::ComplexProj: return "cp" + std::to_string(index_);
      case CrossFamily::QuatProj: return "hp" + std::to_string(index_);
      case CrossFamily::CayleyPlane: return "cap2";
    }
    return "?";
  }

  /// Symbol of the projective family, e.g. "CP", used in candidate labels.
  std::string symbol() const {
    switch (family_) {
      case CrossFamily::Sphere: return "S";
      case CrossFamily::RealProj: return "RP";
      case CrossFamily::ComplexProj: return "CP";
      case CrossFamily::QuatProj: return "HP";
      case CrossFamily::CayleyPlane: return "CaP";
    }
    return "?";
  }

  friend bool operator==(const CrossSpace&, const CrossSpace&) = default;

 private:
  CrossSpace(CrossFamily family, int index, int dim, double diameter, int a, int b)
      : family_(family), index_(index), dim_(dim), diameter_(diameter), ball_a_(a), ball_b_(b) {}

  static void require(bool ok, const char* message) {
    if (!ok) throw Error(ErrorCode::UnknownSpace, message);
  }

  CrossFamily family_;
  int index_;
  int dim_;
  double diameter_;
  int ball_a_;
  int ball_b_;
};

/// A radially symmetric candidate set: radial volume density sin^a cos^b on
/// [0, diameter]. The polar label names the candidate with exponents (b, a).
struct Candidate {
  std::string label;
  int a = 0;
  int b = 0;
  std::string polar_label;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

namespace detail {

// Tube around the k-dimensional member of the chain inside FP^n, k >= 1;
// k = 0 is the ball.
inline Candidate chain_candidate(const CrossSpace& space, int k) {
  const int n = space.index();
  Candidate c;
  switch (space.family()) {
    case CrossFamily::RealProj:
      c.a = n - k - 1;
      c.b = k;
      break;
    case CrossFamily::ComplexProj:
      c.a = 2 * (n - k) - 1;
      c.b = 2 * k + 1;
      break;
    case CrossFamily::QuatProj:
      c.a = 4 * (n - k) - 1;
      c.b = 4 * k + 3;
      break;
    case CrossFamily::CayleyPlane:
      c.a = k == 0 ? 15 : 7;
      c.b = k == 0 ? 7 : 15;
      break;
    case CrossFamily::Sphere:
      c.a = space.ball_a();
      c.b = space.ball_b();
      break;
  }
  c.label = k == 0 ? "ball" : "tube around " + space.symbol() + "^" + std::to_string(k);
  return c;
}

inline int chain_length(const CrossSpace& space) {
  return space.is_sphere() ? 1 : (space.family() == CrossFamily::CayleyPlane ? 2 : space.index());
}

}  // namespace detail

/// The ball plus tubes around the standard chain of totally geodesic
/// submanifolds FP^k, 1 <= k <= n - 1 (CaP^1 for the Cayley plane).
inline std::vector<Candidate> catalog(const CrossSpace& space) {
  std::vector<Candidate> out;
  const int count = detail::chain_length(space);
  for (int k = 0; k < count; ++k) out.push_back(detail::chain_candidate(space, k));
  if (space.is_sphere()) {
    out.front().polar_label = "ball (antipodal)";
    return out;
  }
  for (auto& c : out) {
    const auto polar = std::find_if(out.begin(), out.end(), [&](const Candidate& other) {
      return other.a == c.b && other.b == c.a;
    });
    c.polar_label = polar != out.end() ? polar->label : "polar (" + std::to_string(c.b) + "," +
                                                            std::to_string(c.a) + ")";
  }
  return out;
}

inline Candidate polar_of(const CrossSpace& space, const Candidate& candidate) {
  if (space.is_sphere()) {
    throw Error(ErrorCode::NotApplicable, "polar duality needs diameter pi/2; spheres use antipodal caps");
  }
  return Candidate{candidate.polar_label, candidate.b, candidate.a, candidate.label};
}

inline TrigDensity profile_density(const Candidate& candidate, const CrossSpace& space,
                                   const QuadratureSpec& quad = kDefaultQuadrature) {
  return TrigDensity::normalized(candidate.b, candidate.a, Interval(0.0, space.diameter()), quad);
}

/// Normalized volume of the radius-r candidate.
inline double profile_cdf(const Candidate& candidate, const CrossSpace& space, double r,
                          const QuadratureSpec& quad = kDefaultQuadrature) {
  if (!(r >= 0.0 && r <= space.diameter())) {
    std::ostringstream os;
    os << "radius " << r << " outside [0, " << space.diameter() << "]";
    throw Error(ErrorCode::OutOfDomain, os.str());
  }
  return cdf(profile_density(candidate, space, quad), r);
}

/// Radius at which the candidate reaches normalized volume v.
inline double profile_quantile(const Candidate& candidate, const CrossSpace& space, double v,
                               const QuadratureSpec& quad = kDefaultQuadrature) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "volume fraction must be in [0, 1]");
  }
  return quantile(profile_density(candidate, space, quad), v);
}

/// Volume of the eps-enlargement of the candidate of volume v. The
/// eps-neighbourhood of a radius-r candidate is the radius-(r + eps)
/// candidate, saturating at the diameter.
inline double enlarged_volume(const TrigDensity& profile, double v, double eps) {
  if (!(v > 0.0 && v < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "volume fraction must be in (0, 1)");
  }
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be > 0");
  const Interval iv = profile.support();
  const double r = quantile(profile, v) + eps;
  if (r >= iv.hi()) return 1.0;
  return cdf(profile, r);
}

inline double enlarged_volume(const Candidate& candidate, const CrossSpace& space, double v,
                              double eps, const QuadratureSpec& quad = kDefaultQuadrature) {
  return enlarged_volume(profile_density(candidate, space, quad), v, eps);
}

}  // namespace needle_iso
