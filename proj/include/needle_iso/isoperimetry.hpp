#pragma once

// Candidate comparison for the isoperimetric problem on a CROSS: among the
// catalog candidates of volume v, the one whose eps-enlargement is smallest
// wins. The winner is cross-checked against the needle separation distance
// N(v, w) with w = 1 - enlarged volume.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "needle_iso/cross_spaces.hpp"
#include "needle_iso/density.hpp"
#include "needle_iso/error.hpp"
#include "needle_iso/needle_bound.hpp"
#include "needle_iso/oracles.hpp"
#include "needle_iso/random.hpp"
#include "needle_iso/separation.hpp"

namespace needle_iso {

struct SolverOptions {
  QuadratureSpec quadrature{};
  /// Candidates this close to the minimum are co-winners.
  double tie_tol = 1e-10;
  /// Bisection width for crossover volumes.
  double crossover_tol = 1e-9;
  std::optional<int> max_total_power;
};

struct SolveRequest {
  CrossSpace space;
  double v = 0.0;
  double epsilon = 0.0;
};

struct CandidateValue {
  Candidate candidate;
  double enlarged = 0.0;
};

struct NeedleBoundCheck {
  double w = 0.0;
  double bound = 0.0;
  double residual = 0.0;
  bool heuristic = false;
};

struct SolveResult {
  std::string space;
  double v = 0.0;
  double epsilon = 0.0;
  Candidate winner;
  std::vector<Candidate> co_winners;  // includes the winner
  double enlarged = 0.0;
  std::vector<CandidateValue> per_candidate;
  /// Absent when the enlargement saturates (w = 0).
  std::optional<NeedleBoundCheck> check;
};

/// The candidate whose set is the complement of an enlarged candidate: the
/// polar dual, or the antipodal ball on spheres.
inline Candidate complement_candidate(const CrossSpace& space, const Candidate& c) {
  return space.is_sphere() ? c : polar_of(space, c);
}

namespace detail {

struct ProfiledCandidate {
  Candidate candidate;
  TrigDensity profile;
};

inline std::vector<ProfiledCandidate> profiled_catalog(const CrossSpace& space,
                                                       const QuadratureSpec& quad) {
  std::vector<ProfiledCandidate> out;
  for (auto& c : catalog(space)) {
    auto profile = profile_density(c, space, quad);
    out.push_back({std::move(c), std::move(profile)});
  }
  return out;
}

inline void check_request(double v, double eps, bool allow_above_half) {
  if (!(v > 0.0 && v < 1.0) || (!allow_above_half && v > 0.5)) {
    std::ostringstream os;
    os << "volume fraction must be in (0, " << (allow_above_half ? "1)" : "1/2]") << ", got "
       << v;
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be > 0");
}

inline NeedleBoundResult needle_bound_for(const CrossSpace& space, const MassPair& masses,
                                          const SolverOptions& opts) {
  BoundOptions bo;
  bo.force = true;
  bo.quadrature = opts.quadrature;
  bo.max_total_power = opts.max_total_power;
  return space.is_sphere() ? sphere_needle_bound(space.dim(), masses, bo)
                           : cross_needle_bound(space, masses, bo);
}

}  // namespace detail

/// Compares every catalog candidate of volume v <= 1/2 after
/// eps-enlargement. Volumes above 1/2 go through solve_complement.
inline SolveResult solve_isoperimetric(const SolveRequest& req, const SolverOptions& opts = {}) {
  detail::check_request(req.v, req.epsilon, false);
  const auto candidates = detail::profiled_catalog(req.space, opts.quadrature);

  SolveResult out;
  out.space = req.space.name();
  out.v = req.v;
  out.epsilon = req.epsilon;
  for (const auto& pc : candidates) {
    out.per_candidate.push_back({pc.candidate, enlarged_volume(pc.profile, req.v, req.epsilon)});
  }
  const auto best = std::min_element(
      out.per_candidate.begin(), out.per_candidate.end(),
      [](const CandidateValue& a, const CandidateValue& b) { return a.enlarged < b.enlarged; });
  out.winner = best->candidate;
  out.enlarged = best->enlarged;
  for (const auto& cv : out.per_candidate) {
    if (cv.enlarged <= out.enlarged + opts.tie_tol) out.co_winners.push_back(cv.candidate);
  }

  const double w = 1.0 - out.enlarged;
  if (w > 0.0) {
    const auto bound = detail::needle_bound_for(req.space, MassPair(req.v, w), opts);
    out.check = NeedleBoundCheck{w, bound.bound, std::abs(bound.bound - req.epsilon),
                                 bound.heuristic};
  }
  return out;
}

struct ComplementCore {
  Candidate core;
  /// Largest volume x with enlarged(core, x) = 1 - v; 0 when even the bare
  /// core's eps-neighbourhood is too large.
  double core_volume = 0.0;
  /// 1 - core_volume: enlarged volume of the complement set.
  double enlarged = 0.0;
};

struct ComplementSolution {
  std::string space;
  double v = 0.0;
  double epsilon = 0.0;
  /// The optimal set is the complement of the eps-neighbourhood of `core`
  /// taken at volume `core_volume`; it is the `winner` candidate at volume v.
  Candidate core;
  double core_volume = 0.0;
  Candidate winner;
  double enlarged = 0.0;
  std::vector<ComplementCore> per_core;
};

/// Volumes v > 1/2 by complement reduction: A = M \ (C + eps) has volume v
/// and enlargement 1 - vol(C), so the best A comes from the core C of
/// largest volume whose eps-enlargement is 1 - v.
inline ComplementSolution solve_complement(const CrossSpace& space, double v, double eps,
                                           const SolverOptions& opts = {}) {
  detail::check_request(v, eps, true);
  const double target = 1.0 - v;
  const auto candidates = detail::profiled_catalog(space, opts.quadrature);

  ComplementSolution out;
  out.space = space.name();
  out.v = v;
  out.epsilon = eps;
  for (const auto& pc : candidates) {
    ComplementCore core{pc.candidate, 0.0, 1.0};
    const double bare = cdf(pc.profile, std::min(eps, pc.profile.support().hi()));
    if (bare < target) {
      double lo = 0.0;
      double hi = target;
      while (hi - lo > opts.crossover_tol * 1e-3) {
        const double mid = 0.5 * (lo + hi);
        if (enlarged_volume(pc.profile, mid, eps) < target) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      core.core_volume = lo;
      core.enlarged = 1.0 - lo;
    }
    out.per_core.push_back(core);
  }
  const auto best = std::max_element(
      out.per_core.begin(), out.per_core.end(),
      [](const ComplementCore& a, const ComplementCore& b) { return a.core_volume < b.core_volume; });
  out.core = best->core;
  out.core_volume = best->core_volume;
  out.enlarged = best->enlarged;
  out.winner = complement_candidate(space, out.core);
  return out;
}

struct ProfileRow {
  double v = 0.0;
  std::string winner;
  double enlarged = 0.0;
};

struct Crossover {
  double v_lo = 0.0;  // grid bracket
  double v_hi = 0.0;
  double v0 = 0.0;  // refined crossover volume
  std::string from;
  std::string to;
};

struct ProfileCurve {
  std::string space;
  double epsilon = 0.0;
  std::vector<ProfileRow> rows;
  std::vector<Crossover> crossovers;
};

/// v_i = i / (2 count) for i = 1..count, covering (0, 1/2].
inline std::vector<double> uniform_v_grid(std::size_t count) {
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = static_cast<double>(i + 1) / (2.0 * static_cast<double>(count));
  }
  return grid;
}

/// Winner per grid volume, plus bisection-refined crossover volumes wherever
/// the winner changes between neighbouring grid points.
inline ProfileCurve isoperimetric_profile_curve(const CrossSpace& space, double eps,
                                                std::span<const double> v_grid,
                                                const SolverOptions& opts = {}) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be > 0");
  std::vector<double> grid(v_grid.begin(), v_grid.end());
  std::sort(grid.begin(), grid.end());
  for (double v : grid) detail::check_request(v, eps, false);
  const auto candidates = detail::profiled_catalog(space, opts.quadrature);

  const auto winner_at = [&](double v) {
    std::size_t best = 0;
    double best_value = 2.0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      const double value = enlarged_volume(candidates[c].profile, v, eps);
      if (value < best_value - opts.tie_tol) {
        best = c;
        best_value = value;
      }
    }
    return std::pair{best, best_value};
  };

  ProfileCurve out;
  out.space = space.name();
  out.epsilon = eps;
  std::vector<std::size_t> winners;
  for (double v : grid) {
    const auto [c, value] = winner_at(v);
    winners.push_back(c);
    out.rows.push_back({v, candidates[c].candidate.label, value});
  }
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (winners[i] == winners[i + 1]) continue;
    const auto& from = candidates[winners[i]].profile;
    const auto& to = candidates[winners[i + 1]].profile;
    double lo = grid[i];
    double hi = grid[i + 1];
    while (hi - lo > opts.crossover_tol) {
      const double mid = 0.5 * (lo + hi);
      if (enlarged_volume(from, mid, eps) <= enlarged_volume(to, mid, eps)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    out.crossovers.push_back({grid[i], grid[i + 1], 0.5 * (lo + hi),
                              candidates[winners[i]].candidate.label,
                              candidates[winners[i + 1]].candidate.label});
  }
  return out;
}

struct CapMassCheck {
  double target = 0.0;
  MonteCarloEstimate mc;
  bool within_3sigma = false;
};

struct MainInequalityCheck {
  int n = 0;
  double sep_estimate = 0.0;
  double bound = 0.0;
  double residual = 0.0;
  bool heuristic = false;
  bool ok = false;
  std::vector<CapMassCheck> mc;
};

/// Sep(S^n, k1, k2) <= N(k1, k2) with antipodal caps as the Sep witness.
/// With mc_samples > 0 the cap masses are also estimated by sampling.
inline MainInequalityCheck check_main_inequality(int n, const MassPair& masses,
                                                 std::size_t mc_samples, std::uint64_t seed,
                                                 std::size_t threads = 0,
                                                 const QuadratureSpec& quad = kDefaultQuadrature) {
  const CrossSpace space = CrossSpace::sphere(n);
  const Candidate ball = catalog(space).front();
  const auto profile = profile_density(ball, space, quad);
  const double r1 = quantile(profile, masses.k1());
  const double r2 = quantile(profile, masses.k2());

  MainInequalityCheck out;
  out.n = n;
  out.sep_estimate = std::max(0.0, kPi - r1 - r2);
  BoundOptions bo;
  bo.force = true;
  bo.quadrature = quad;
  const auto bound = sphere_needle_bound(n, masses, bo);
  out.bound = bound.bound;
  out.heuristic = bound.heuristic;
  out.residual = std::abs(out.bound - out.sep_estimate);
  out.ok = out.sep_estimate <= out.bound + 1e-9;

  if (mc_samples > 0) {
    const RngSpec rng{seed};
    std::uint64_t stream = 0;
    for (const auto& [mass, radius] : {std::pair{masses.k1(), r1}, std::pair{masses.k2(), r2}}) {
      CapMassCheck check;
      check.target = mass;
      check.mc = mc_cap_mass(n, radius, mc_samples, RngSpec{rng.substream(stream++).next()},
                             threads);
      check.within_3sigma = check.mc.within_sigmas(mass, 3.0);
      out.ok = out.ok && check.within_3sigma;
      out.mc.push_back(check);
    }
  }
  return out;
}

struct RealizationCheck {
  double distance = 0.0;
  double bound = 0.0;
  bool realizes = false;
};

/// Distance between the candidate of volume k1 and the polar candidate of
/// volume k2, compared with N(k1, k2).
inline RealizationCheck check_realization(const CrossSpace& space, const Candidate& candidate,
                                          const MassPair& masses, const SolverOptions& opts = {}) {
  if (space.is_sphere()) {
    throw Error(ErrorCode::NotApplicable,
                "spheres are checked with antipodal caps (check_main_inequality)");
  }
  const Candidate polar = polar_of(space, candidate);
  RealizationCheck out;
  out.distance = space.diameter() -
                 profile_quantile(candidate, space, masses.k1(), opts.quadrature) -
                 profile_quantile(polar, space, masses.k2(), opts.quadrature);
  out.bound = detail::needle_bound_for(space, masses, opts).bound;
  const double clamped = std::max(0.0, out.distance);
  out.realizes = out.distance >= -1e-12 && std::abs(clamped - out.bound) < 1e-8;
  return out;
}

}  // namespace needle_iso
