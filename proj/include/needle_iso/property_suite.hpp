#pragma once

// Seeded invariant checks over every module, grouped into suites. Each check
// draws from its own substream of the run seed (keyed by check id, then by
// trial index), so a report depends only on (suite, seed, samples).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "needle_iso/binomial.hpp"
#include "needle_iso/concavity.hpp"
#include "needle_iso/cross_spaces.hpp"
#include "needle_iso/density.hpp"
#include "needle_iso/error.hpp"
#include "needle_iso/isoperimetry.hpp"
#include "needle_iso/needle_bound.hpp"
#include "needle_iso/oracles.hpp"
#include "needle_iso/parallel.hpp"
#include "needle_iso/random.hpp"
#include "needle_iso/separation.hpp"
#include "needle_iso/serialization.hpp"

namespace needle_iso {

struct PropertyCheck {
  std::string id;
  std::string suite;
  bool passed = true;
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::string detail;
};

struct PropertyReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::vector<PropertyCheck> checks;

  std::size_t pass_count() const {
    return static_cast<std::size_t>(
        std::count_if(checks.begin(), checks.end(), [](const auto& c) { return c.passed; }));
  }
  std::size_t fail_count() const { return checks.size() - pass_count(); }
  std::vector<std::string> failures() const {
    std::vector<std::string> out;
    for (const auto& c : checks) {
      if (!c.passed) out.push_back(c.id);
    }
    return out;
  }
  const PropertyCheck* find(std::string_view id) const {
    for (const auto& c : checks) {
      if (c.id == id) return &c;
    }
    return nullptr;
  }
};

struct SuiteOptions {
  /// Size of the large randomized checks (random needles); the smaller
  /// ones (100 and 50 densities) scale with it proportionally.
  std::size_t samples = 1000;
  std::size_t threads = 0;
};

/// One invariant of the library, and the check that exercises it.
struct CoverageEntry {
  std::string_view module;
  std::string_view invariant;
  std::string_view check_id;
};

inline constexpr std::array<CoverageEntry, 28> kCoverageManifest{{
    {"density_core", "quantile/cdf round trip on a 1e3 grid", "density.quantile_roundtrip"},
    {"density_core", "monotone order reduction", "density.order_reduction"},
    {"density_core", "product closure", "density.product_closure"},
    {"density_core", "decomposition reconstruction for p <= 12", "density.decomposition"},
    {"density_core", "cdf nondecreasing and Lipschitz in the sup-norm", "density.cdf_lipschitz"},
    {"density_core", "classifier examples cos^(n-1) and sin^n", "density.classifier_examples"},
    {"density_core", "comparison with matched C cos^n", "density.comparison_lemma"},
    {"separation_1d", "mass-swap symmetry", "separation.symmetry"},
    {"separation_1d", "monotonicity in each mass", "separation.monotonicity"},
    {"separation_1d", "k1 + k2 >= 1 gives 0", "separation.degeneracy"},
    {"separation_1d", "brute-force oracle agreement", "separation.oracle_agreement"},
    {"separation_1d", "reflection invariance", "separation.reflection"},
    {"needle_bound", "sphere dominance over sin^N-affine needles", "needle.sinn_dominance"},
    {"needle_bound", "cross dominance over sin^p-affine needles", "needle.sin2_dominance"},
    {"needle_bound", "power monotonicity (logged)", "needle.power_monotonicity"},
    {"needle_bound", "component bound through the binomial decomposition", "needle.component_bound"},
    {"needle_bound", "sphere bound nonincreasing in n", "needle.sphere_monotone_in_n"},
    {"needle_bound", "bound equals sep of the reported argmax", "needle.bound_realization"},
    {"cross_spaces", "duality identity", "spaces.duality"},
    {"cross_spaces", "coincidence oracle CP1/S2, HP1/S4, CaP2", "spaces.coincidence"},
    {"cross_spaces", "a + b >= dim - 1", "spaces.admissibility"},
    {"cross_spaces", "profile strictly increasing, quantile inverse", "spaces.profile_inverse"},
    {"isoperimetry_solver", "winner containment", "solver.winner_containment"},
    {"isoperimetry_solver", "complement reduction consistency", "solver.complement_consistency"},
    {"isoperimetry_solver", "enlarged volume increasing in eps and v", "solver.monotonicity"},
    {"isoperimetry_solver", "needle-bound consistency of the winner", "solver.needle_consistency"},
    {"isoperimetry_solver", "determinism of result tables", "solver.determinism"},
    {"isoperimetry_solver", "Sep <= N on spheres with Monte Carlo caps", "solver.main_inequality"},
}};

inline constexpr std::array<std::string_view, 6> kSuiteNames{"density",  "separation", "needle",
                                                            "spaces",   "solver",     "all"};

namespace detail {

// FNV-1a, so each check's stream is keyed by its id rather than its position.
inline std::uint64_t check_key(std::string_view id) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : id) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct SuiteContext {
  RngSpec rng;
  SuiteOptions opts;

  std::size_t scaled(std::size_t base) const {
    return std::max<std::size_t>(1, base * opts.samples / 1000);
  }
  /// Generator for trial `i` of check `id`.
  SplitMix64 trial_rng(std::string_view id, std::size_t i) const {
    const RngSpec check{rng.substream(check_key(id)).next()};
    return check.substream(i);
  }
};

struct Trial {
  bool ok = true;
  bool vacuous = false;
  bool flagged = false;  // tallied under the check's flag label
  double excess = 0.0;   // size of the violation, or of the worst slack seen
  std::string note;      // first failing trial's description
};

// Runs `count` trials of `fn(rng, i)` in parallel and folds them in index
// order into a check.
template <class Fn>
PropertyCheck run_trials(const SuiteContext& ctx, std::string id, std::string suite,
                         std::size_t count, Fn fn, std::string_view flag_label = {}) {
  const auto trials = parallel_map(
      count,
      [&](std::size_t i) {
        SplitMix64 gen = ctx.trial_rng(id, i);
        try {
          return fn(gen, i);
        } catch (const std::exception& e) {
          Trial t;
          t.ok = false;
          t.note = std::string("error: ") + e.what();
          return t;
        }
      },
      ctx.opts.threads);
  PropertyCheck out;
  out.id = std::move(id);
  out.suite = std::move(suite);
  std::size_t vacuous = 0;
  std::size_t flagged = 0;
  double worst = 0.0;
  std::optional<std::size_t> first_failure;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const Trial& t = trials[i];
    if (t.flagged) ++flagged;
    if (t.vacuous) {
      ++vacuous;
      continue;
    }
    ++out.trials;
    worst = std::max(worst, t.excess);
    if (!t.ok) {
      ++out.failures;
      if (!first_failure) first_failure = i;
    }
  }
  out.passed = out.failures == 0;
  std::ostringstream os;
  os << "trials=" << out.trials << " failures=" << out.failures;
  if (vacuous > 0) os << " vacuous=" << vacuous;
  if (!flag_label.empty()) os << ' ' << flag_label << '=' << flagged;
  os << " worst=" << format_double(worst);
  if (first_failure) os << "; first failure at trial " << *first_failure << ": " << trials[*first_failure].note;
  out.detail = os.str();
  return out;
}

inline std::string describe(const TrigDensity& d) {
  std::ostringstream os;
  os << "cos^" << format_double(d.m()) << " sin^" << format_double(d.k()) << " on ["
     << format_double(d.support().lo()) << ", " << format_double(d.support().hi()) << "]";
  return os.str();
}

inline std::string describe(const SinAffineDensity& d) {
  std::ostringstream os;
  os << "cos(t - " << format_double(d.phase()) << ")^" << format_double(d.power()) << " on ["
     << format_double(d.support().lo()) << ", " << format_double(d.support().hi()) << "]";
  return os.str();
}

inline std::string describe(const MassPair& m) {
  return "(" + format_double(m.k1()) + ", " + format_double(m.k2()) + ")";
}

/// Random trig density with real exponents: either cos^m on a sub-interval
/// of [-pi/2, pi/2] or cos^m sin^k on a sub-interval of [0, pi/2].
inline TrigDensity random_trig_density(SplitMix64& gen) {
  const bool symmetric = gen.uniform() < 0.25;
  const double m = gen.uniform(0.0, 6.0);
  const double k = symmetric ? 0.0 : gen.uniform(0.0, 6.0);
  const double lo_bound = symmetric ? -kHalfPi : 0.0;
  const double span = kHalfPi - lo_bound;
  const double length = span * gen.uniform(0.1, 1.0);
  const double lo = lo_bound + (span - length) * gen.uniform();
  return TrigDensity::normalized(m, k, Interval(lo, std::min(kHalfPi, lo + length)));
}

/// Masses with min <= 1/2 <= max, in random order.
inline MassPair random_straddling_masses(SplitMix64& gen) {
  const double small = gen.uniform(0.02, 0.5);
  const double big = gen.uniform(0.5, 0.98);
  return gen.uniform() < 0.5 ? MassPair(small, big) : MassPair(big, small);
}

inline bool within(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// Normalized int_0^r sin^a cos^b with b odd, through u = sin t:
// int_0^{sin r} u^a (1 - u^2)^((b-1)/2) du, expanded as a polynomial.
inline double odd_cos_profile(int a, int b, double r) {
  const int h = (b - 1) / 2;
  const auto antiderivative = [&](double u) {
    double sum = 0.0;
    double binom = 1.0;
    for (int j = 0; j <= h; ++j) {
      const int e = a + 2 * j + 1;
      sum += (j % 2 == 0 ? 1.0 : -1.0) * binom * std::pow(u, e) / e;
      binom = binom * (h - j) / (j + 1);
    }
    return sum;
  };
  return antiderivative(std::sin(r)) / antiderivative(1.0);
}

// --- density -------------------------------------------------------------------

inline PropertyCheck check_quantile_roundtrip(const SuiteContext& ctx) {
  return run_trials(ctx, "density.quantile_roundtrip", "density", 8, [](SplitMix64& gen, std::size_t) {
    const auto d = random_trig_density(gen);
    Trial t;
    for (int i = 1; i < 1000; ++i) {
      const double q = i / 1000.0;
      const double err = std::abs(cdf(d, quantile(d, q)) - q);
      t.excess = std::max(t.excess, err);
    }
    t.ok = t.excess < 1e-9;
    if (!t.ok) t.note = describe(d);
    return t;
  });
}

inline PropertyCheck check_order_reduction(const SuiteContext& ctx) {
  return run_trials(ctx, "density.order_reduction", "density", ctx.scaled(100),
                    [](SplitMix64& gen, std::size_t) {
                      const auto d = random_trig_density(gen);
                      const double order = std::max(d.m() + d.k(), 0.25);
                      Trial t;
                      if (!is_sin_concave(d, order)) {
                        t.vacuous = true;
                        return t;
                      }
                      // Integer orders below the passing one.
                      for (int s = 1; s < order; ++s) {
                        if (!is_sin_concave(d, s)) {
                          t.ok = false;
                          t.note = describe(d) + " fails at order " + std::to_string(s);
                          break;
                        }
                      }
                      return t;
                    });
}

inline PropertyCheck check_product_closure(const SuiteContext& ctx) {
  return run_trials(
      ctx, "density.product_closure", "density", ctx.scaled(100), [](SplitMix64& gen, std::size_t) {
        // f = cos(t - phi)^a is sin^a-concave, g = cos^m sin^k is sin^(m+k)-concave.
        const auto g = random_trig_density(gen);
        const Interval iv = g.support();
        const double a = gen.uniform(0.5, 6.0);
        const double phi = gen.uniform(iv.hi() - kHalfPi, iv.lo() + kHalfPi);
        const auto f = [&](double t) { return clamped_pow(std::cos(t - phi), a); };
        const auto product = [&](double t) { return f(t) * g.pdf(t); };
        const double order = a + g.m() + g.k();
        Trial t;
        t.ok = is_sin_concave(product, iv, order);
        if (!t.ok) {
          t.note = "cos(t - " + format_double(phi) + ")^" + format_double(a) + " times " + describe(g);
        }
        return t;
      });
}

inline PropertyCheck check_decomposition(const SuiteContext& ctx) {
  return run_trials(ctx, "density.decomposition", "density", ctx.scaled(100),
                    [](SplitMix64& gen, std::size_t i) {
                      const double p = static_cast<double>(i % 13);
                      const double length = gen.uniform(0.1, kPi);
                      const double phase = gen.uniform(length - kHalfPi, kHalfPi);
                      const auto d = SinAffineDensity::normalized(phase, p, Interval(0.0, length));
                      const auto dec = binomial_decompose(d);
                      Trial t;
                      for (int s = 0; s <= 256; ++s) {
                        const double x = length * s / 256.0;
                        t.excess = std::max(t.excess, std::abs(dec.evaluate(x) - d.pdf(x)));
                      }
                      if (dec.all_nonnegative()) {
                        t.excess = std::max(t.excess, std::abs(dec.total_mass() - 1.0));
                      }
                      t.ok = t.excess < 1e-10;
                      if (!t.ok) t.note = describe(d);
                      return t;
                    });
}

inline PropertyCheck check_cdf_lipschitz(const SuiteContext& ctx) {
  return run_trials(ctx, "density.cdf_lipschitz", "density", ctx.scaled(100),
                    [](SplitMix64& gen, std::size_t) {
                      const auto d = random_trig_density(gen);
                      const Interval iv = d.support();
                      double sup = 0.0;
                      for (int s = 0; s <= 4096; ++s) {
                        sup = std::max(sup, d.pdf(iv.lo() + iv.length() * s / 4096.0));
                      }
                      Trial t;
                      double prev_t = iv.lo();
                      double prev_f = 0.0;
                      for (int s = 1; s <= 64; ++s) {
                        const double x = s == 64 ? iv.hi() : iv.lo() + iv.length() * s / 64.0;
                        const double fx = cdf(d, x);
                        const double rise = fx - prev_f;
                        // Sampled sup-norm: allow a small relative margin.
                        const double allowed = sup * (x - prev_t) * (1.0 + 1e-3) + 1e-12;
                        t.excess = std::max({t.excess, -rise, rise - allowed});
                        prev_t = x;
                        prev_f = fx;
                      }
                      t.ok = t.excess <= 1e-12;
                      if (!t.ok) t.note = describe(d);
                      return t;
                    });
}

inline PropertyCheck check_classifier_examples(const SuiteContext& ctx) {
  return run_trials(ctx, "density.classifier_examples", "density", 9, [](SplitMix64&, std::size_t i) {
    const int n = static_cast<int>(i) + 2;
    const Interval iv(-kHalfPi, kHalfPi);
    const auto cosine = [n](double t) { return clamped_pow(std::cos(t), n - 1); };
    const auto sine = [n](double t) { return std::pow(std::sin(t), n); };
    Trial t;
    const bool accepted = is_sin_concave(cosine, iv, n - 1);
    const bool rejected = !is_sin_concave(sine, iv, n);
    t.ok = accepted && rejected;
    if (!t.ok) {
      t.note = "n=" + std::to_string(n) + (accepted ? "" : " cos^(n-1) rejected") +
               (rejected ? "" : " sin^n accepted");
    }
    return t;
  });
}

/// Test function for the comparison lemma: prod_i cos(t - phi_i)^(a_i) with
/// phi_i in [-pi/4, 0] is sin^(sum a)-concave (product closure) and
/// decreasing on [0, tau] for tau < min phi + pi/2.
struct ComparisonCase {
  std::vector<double> phases;
  std::vector<double> powers;
  double order = 0.0;
  double tau = 0.0;
  double eps = 0.0;

  double operator()(double t) const {
    double v = 1.0;
    for (std::size_t i = 0; i < phases.size(); ++i) v *= clamped_pow(std::cos(t - phases[i]), powers[i]);
    return v;
  }
};

inline ComparisonCase random_comparison_case(SplitMix64& gen) {
  ComparisonCase c;
  const auto factors = static_cast<std::size_t>(gen.uniform_int(1, 3));
  double total = 0.0;
  double min_phase = 0.0;
  for (std::size_t i = 0; i < factors; ++i) {
    c.phases.push_back(-gen.uniform(0.0, kPi / 4));
    c.powers.push_back(gen.uniform(0.5, 4.0));
    total += c.powers.back();
    min_phase = std::min(min_phase, c.phases.back());
  }
  c.order = total;
  c.tau = (min_phase + kHalfPi) * gen.uniform(0.3, 0.999);
  c.eps = c.tau * gen.uniform(0.05, 0.95);
  return c;
}

inline PropertyCheck check_comparison_lemma_suite(const SuiteContext& ctx) {
  return run_trials(ctx, "density.comparison_lemma", "density", ctx.scaled(100),
                    [](SplitMix64& gen, std::size_t) {
                      const auto c = random_comparison_case(gen);
                      Trial t;
                      for (double k : {0.0, 1.0, 2.0, 5.0}) {
                        const auto r = check_comparison_lemma(c, c.order, c.tau, c.eps, k);
                        t.excess = std::max(t.excess, r.max_pointwise_violation);
                        if (!(r.pointwise_ok && r.ratio_ok)) {
                          t.ok = false;
                          std::ostringstream os;
                          os << "order " << format_double(c.order) << " tau " << format_double(c.tau)
                             << " eps " << format_double(c.eps) << " k " << format_double(k)
                             << (r.pointwise_ok ? "" : " pointwise") << (r.ratio_ok ? "" : " ratio");
                          t.note = os.str();
                          break;
                        }
                      }
                      return t;
                    });
}

// --- separation --------------------------------------------------------------------

inline PropertyCheck check_symmetry(const SuiteContext& ctx) {
  return run_trials(ctx, "separation.symmetry", "separation", ctx.scaled(100),
                    [](SplitMix64& gen, std::size_t) {
                      const auto d = random_trig_density(gen);
                      const double k1 = gen.uniform(0.01, 0.99);
                      const double k2 = gen.uniform(0.01, 0.99);
                      const double a = sep_1d(d, MassPair(k1, k2)).sep;
                      const double b = sep_1d(d, MassPair(k2, k1)).sep;
                      Trial t;
                      t.excess = std::abs(a - b);
                      t.ok = a == b;
                      if (!t.ok) t.note = describe(d);
                      return t;
                    });
}

inline PropertyCheck check_monotonicity(const SuiteContext& ctx) {
  return run_trials(ctx, "separation.monotonicity", "separation", ctx.scaled(20),
                    [](SplitMix64& gen, std::size_t) {
                      const auto d = random_trig_density(gen);
                      constexpr int kGrid = 10;
                      std::array<std::array<double, kGrid>, kGrid> sep{};
                      for (int i = 0; i < kGrid; ++i) {
                        for (int j = 0; j < kGrid; ++j) {
                          sep[i][j] = sep_1d(d, MassPair((i + 0.5) / kGrid, (j + 0.5) / kGrid)).sep;
                        }
                      }
                      Trial t;
                      for (int i = 0; i < kGrid; ++i) {
                        for (int j = 0; j < kGrid; ++j) {
                          if (i + 1 < kGrid) t.excess = std::max(t.excess, sep[i + 1][j] - sep[i][j]);
                          if (j + 1 < kGrid) t.excess = std::max(t.excess, sep[i][j + 1] - sep[i][j]);
                        }
                      }
                      t.ok = t.excess <= 1e-12;
                      if (!t.ok) t.note = describe(d);
                      return t;
                    });
}

inline PropertyCheck check_degeneracy(const SuiteContext& ctx) {
  return run_trials(ctx, "separation.degeneracy", "separation", ctx.scaled(100),
                    [](SplitMix64& gen, std::size_t i) {
                      const auto d = random_trig_density(gen);
                      const double k1 = gen.uniform(0.01, 0.99);
                      // Every fourth trial sits exactly on k1 + k2 = 1.
                      const double k2 = i % 4 == 0 ? 1.0 - k1 : gen.uniform(1.0 - k1, 1.0);
                      const double s = sep_1d(d, MassPair(k1, k2)).sep;
                      Trial t;
                      t.excess = s;
                      t.ok = s == 0.0;
                      if (!t.ok) t.note = describe(d) + " masses " + describe(MassPair(k1, k2));
                      return t;
                    });
}

inline PropertyCheck check_oracle_agreement(const SuiteContext& ctx) {
  return run_trials(ctx, "separation.oracle_agreement", "separation", ctx.scaled(50),
                    [](SplitMix64& gen, std::size_t) {
                      const auto d = random_trig_density(gen);
                      const MassPair masses(gen.uniform(0.02, 0.6), gen.uniform(0.02, 0.6));
                      constexpr std::size_t kGrid = 4096;
                      const auto table = TabulatedDensity::sample(d, 4 * kGrid + 1);
                      const double brute = sep_1d_bruteforce(table, masses, kGrid);
                      const double exact = sep_1d(d, masses).sep;
                      const double spacing = d.support().length() / kGrid;
                      Trial t;
                      t.excess = std::abs(brute - exact) / spacing;
                      t.ok = std::abs(brute - exact) <= 2 * spacing;
                      if (!t.ok) t.note = describe(d) + " masses " + describe(masses);
                      return t;
                    });
}

inline PropertyCheck check_reflection(const SuiteContext& ctx) {
  return run_trials(
      ctx, "separation.reflection", "separation", ctx.scaled(100), [](SplitMix64& gen, std::size_t i) {
        const MassPair masses(gen.uniform(0.02, 0.9), gen.uniform(0.02, 0.9));
        double a = 0.0;
        double b = 0.0;
        std::string what;
        if (i % 2 == 0) {
          // cos^m sin^k on [0, pi/2] reflects to cos^k sin^m.
          const double m = gen.uniform(0.0, 6.0);
          const double k = gen.uniform(0.0, 6.0);
          const Interval iv(0.0, kHalfPi);
          a = sep_1d(TrigDensity::normalized(m, k, iv), masses).sep;
          b = sep_1d(TrigDensity::normalized(k, m, iv), masses).sep;
          what = describe(TrigDensity::normalized(m, k, iv));
        } else {
          // cos(t - phase)^p on [0, L] reflects to phase L - phase.
          const std::array<double, 4> powers{1.0, 2.5, 4.0, 7.0};
          auto needle = random_affine_needle(kPi, powers, gen);
          const double length = needle.support().length();
          const auto mirrored = SinAffineDensity::normalized(length - needle.phase(), needle.power(),
                                                             needle.support());
          a = sep_1d(needle, masses).sep;
          b = sep_1d(mirrored, masses).sep;
          what = describe(needle);
        }
        Trial t;
        t.excess = std::abs(a - b);
        t.ok = t.excess <= 1e-9;
        if (!t.ok) t.note = what + " masses " + describe(masses);
        return t;
      });
}

// --- needle --------------------------------------------------------------------------

inline PropertyCheck check_sinn_dominance(const SuiteContext& ctx) {
  return run_trials(ctx, "needle.sinn_dominance", "needle", ctx.scaled(1000),
                    [](SplitMix64& gen, std::size_t) {
                      const std::array<double, 6> powers{1, 2, 3, 4, 5, 6};
                      const auto needle = random_affine_needle(kPi, powers, gen);
                      const auto masses = random_straddling_masses(gen);
                      // N >= n - 1 with the tightest admissible n = N + 1.
                      const int n = static_cast<int>(needle.power()) + 1;
                      const double bound = sphere_needle_bound(n, masses).bound;
                      const double sep = sep_1d(needle, masses).sep;
                      Trial t;
                      t.excess = std::max(0.0, sep - bound);
                      t.ok = sep <= bound + 1e-10;
                      if (!t.ok) t.note = describe(needle) + " masses " + describe(masses);
                      return t;
                    });
}

/// Largest trig-family separation per minimum total power, for one mass
/// pair: entry p is the max over p <= m + k <= max_total.
inline std::vector<double> trig_maxima_by_min_total(int max_total, const MassPair& masses) {
  const auto scan = scan_trig_family(0, max_total, masses);
  std::vector<double> best(static_cast<std::size_t>(max_total) + 2, -1.0);
  for (const auto& e : scan) {
    const auto total = static_cast<std::size_t>(e.family.m + e.family.k);
    best[total] = std::max(best[total], e.separation.sep);
  }
  for (int p = max_total - 1; p >= 0; --p) {
    best[static_cast<std::size_t>(p)] =
        std::max(best[static_cast<std::size_t>(p)], best[static_cast<std::size_t>(p) + 1]);
  }
  return best;
}

struct Sin2Trial {
  SinAffineDensity needle;
  MassPair masses;
  double sep = 0.0;
  double strict_bound = 0.0;   // m + k >= p
  double lenient_bound = 0.0;  // m + k >= 1
};

/// One draw for the cross dominance check: a sin^p-affine needle on an
/// interval of length <= pi/2 with p in 1..8, against the trig family with
/// p <= m + k <= 8.
inline Sin2Trial sin2_trial(SplitMix64& gen) {
  const std::array<double, 8> powers{1, 2, 3, 4, 5, 6, 7, 8};
  auto needle = random_affine_needle(kHalfPi, powers, gen);
  const auto masses = random_straddling_masses(gen);
  const auto best = trig_maxima_by_min_total(8, masses);
  const auto p = static_cast<std::size_t>(needle.power());
  return Sin2Trial{needle, masses, sep_1d(needle, masses).sep, best[p], best[1]};
}

// Flags trials that also beat the whole family 1 <= m + k <= 8.
inline PropertyCheck check_sin2_dominance(const SuiteContext& ctx) {
  return run_trials(
      ctx, "needle.sin2_dominance", "needle", ctx.scaled(1000),
      [](SplitMix64& gen, std::size_t) {
        const auto s = sin2_trial(gen);
        Trial t;
        t.excess = std::max(0.0, s.sep - s.strict_bound);
        t.ok = s.sep <= s.strict_bound + 1e-10;
        t.flagged = s.sep > s.lenient_bound + 1e-10;
        t.note = describe(s.needle) + " masses " + describe(s.masses) + " sep " +
                 format_double(s.sep) + " bound " + format_double(s.strict_bound);
        return t;
      },
      "above_all_m_plus_k_ge_1");
}

inline PropertyCheck check_power_monotonicity(const SuiteContext& ctx) {
  // Logged observation: counts ratio-fixed (m, k) chains whose separation
  // ever increases with m + k, without failing the check.
  auto out = run_trials(ctx, "needle.power_monotonicity", "needle", ctx.scaled(50),
                        [](SplitMix64& gen, std::size_t) {
                          const auto masses = random_straddling_masses(gen);
                          Trial t;
                          const std::array<std::pair<int, int>, 5> bases{
                              {{1, 0}, {0, 1}, {1, 1}, {2, 1}, {1, 2}}};
                          for (const auto& [m0, k0] : bases) {
                            double prev = sep_1d(needle_density(TrigFamily{m0, k0}), masses).sep;
                            for (int j = 2; j <= 4; ++j) {
                              const double s =
                                  sep_1d(needle_density(TrigFamily{j * m0, j * k0}), masses).sep;
                              t.excess = std::max(t.excess, s - prev);
                              prev = s;
                            }
                          }
                          return t;
                        });
  out.passed = true;
  out.detail += " (observation only; worst is the largest increase seen)";
  return out;
}

inline PropertyCheck check_component_bound(const SuiteContext& ctx) {
  return run_trials(
      ctx, "needle.component_bound", "needle", ctx.scaled(1000), [](SplitMix64& gen, std::size_t) {
        // Nonnegative binomial coefficients: phase in [0, pi/2], support in [0, pi/2].
        const double p = static_cast<double>(gen.uniform_int(1, 8));
        const double hi = kHalfPi * gen.uniform(0.05, 1.0);
        const double lo = hi * gen.uniform(0.0, 0.95);
        const double phase = gen.uniform(0.0, kHalfPi);
        const auto needle = SinAffineDensity::normalized(phase, p, Interval(lo, hi));
        const auto masses = random_straddling_masses(gen);
        const auto dec = binomial_decompose(needle);
        Trial t;
        if (!dec.all_nonnegative()) {
          t.vacuous = true;
          return t;
        }
        double best = 0.0;
        for (const auto& c : dec.components) {
          const auto comp = TrigDensity::normalized(c.cos_power, c.sin_power, needle.support());
          best = std::max(best, sep_1d(comp, masses).sep);
        }
        const double sep = sep_1d(needle, masses).sep;
        t.excess = std::max(0.0, sep - best);
        t.ok = sep <= best + 1e-10;
        if (!t.ok) {
          t.note = describe(needle) + " masses " + describe(masses) + " sep " + format_double(sep) +
                   " components " + format_double(best);
        }
        return t;
      });
}

inline PropertyCheck check_sphere_monotone_in_n(const SuiteContext& ctx) {
  return run_trials(ctx, "needle.sphere_monotone_in_n", "needle", ctx.scaled(100),
                    [](SplitMix64& gen, std::size_t) {
                      const auto masses = random_straddling_masses(gen);
                      Trial t;
                      double prev = sphere_needle_bound(2, masses).bound;
                      for (int n = 3; n <= 10; ++n) {
                        const double b = sphere_needle_bound(n, masses).bound;
                        t.excess = std::max(t.excess, b - prev);
                        prev = b;
                      }
                      t.ok = t.excess <= 1e-12;
                      if (!t.ok) t.note = "masses " + describe(masses);
                      return t;
                    });
}

inline PropertyCheck check_bound_realization(const SuiteContext& ctx) {
  return run_trials(
      ctx, "needle.bound_realization", "needle", ctx.scaled(50), [](SplitMix64& gen, std::size_t i) {
        const auto masses = random_straddling_masses(gen);
        NeedleBoundResult r;
        if (i % 2 == 0) {
          r = sphere_needle_bound(static_cast<int>(gen.uniform_int(2, 8)), masses);
        } else {
          const std::array<CrossSpace, 4> spaces{CrossSpace::real_projective(3),
                                                 CrossSpace::complex_projective(2),
                                                 CrossSpace::real_projective(2),
                                                 CrossSpace::complex_projective(1)};
          r = cross_needle_bound(spaces[(i / 2) % spaces.size()], masses);
        }
        Trial t;
        t.ok = r.bound >= 0.0;
        for (const auto& f : r.argmax) {
          const double s = family_separation(f, masses).sep;
          t.excess = std::max(t.excess, std::abs(s - r.bound));
        }
        t.ok = t.ok && t.excess <= 1e-9;
        if (!t.ok) t.note = "masses " + describe(masses);
        return t;
      });
}

// --- spaces ----------------------------------------------------------------------------

inline std::vector<CrossSpace> duality_spaces() {
  std::vector<CrossSpace> out;
  for (int n = 2; n <= 6; ++n) out.push_back(CrossSpace::real_projective(n));
  for (int n = 1; n <= 4; ++n) out.push_back(CrossSpace::complex_projective(n));
  for (int n = 1; n <= 3; ++n) out.push_back(CrossSpace::quaternionic_projective(n));
  out.push_back(CrossSpace::cayley_plane());
  return out;
}

inline PropertyCheck check_duality(const SuiteContext& ctx) {
  const auto spaces = duality_spaces();
  return run_trials(ctx, "spaces.duality", "spaces", spaces.size(), [&](SplitMix64&, std::size_t i) {
    const auto& space = spaces[i];
    Trial t;
    for (const auto& c : catalog(space)) {
      const auto p = profile_density(c, space);
      const auto q = profile_density(polar_of(space, c), space);
      for (int s = 0; s <= 100; ++s) {
        const double r = space.diameter() * s / 100.0;
        const double sum = cdf(p, r) + cdf(q, space.diameter() - r);
        t.excess = std::max(t.excess, std::abs(sum - 1.0));
      }
    }
    t.ok = t.excess < 1e-10;
    if (!t.ok) t.note = space.name();
    return t;
  });
}

/// Largest deviation of each profile coincidence over a `points`-grid:
/// [0] CP1 ball vs the S2 cap at 2r, [1] HP1 ball vs the S4 cap at 2r,
/// [2] CaP2 ball and 1 - (CaP1 tube at pi/2 - r) vs the polynomial closed form.
inline std::array<double, 3> coincidence_errors(std::size_t points) {
  const auto cp1 = CrossSpace::complex_projective(1);
  const auto hp1 = CrossSpace::quaternionic_projective(1);
  const auto cap2 = CrossSpace::cayley_plane();
  const auto s2 = CrossSpace::sphere(2);
  const auto s4 = CrossSpace::sphere(4);
  const auto cp1_ball = profile_density(catalog(cp1).front(), cp1);
  const auto hp1_ball = profile_density(catalog(hp1).front(), hp1);
  const auto s2_ball = profile_density(catalog(s2).front(), s2);
  const auto s4_ball = profile_density(catalog(s4).front(), s4);
  const auto cap_ball = profile_density(catalog(cap2)[0], cap2);
  const auto cap_tube = profile_density(catalog(cap2)[1], cap2);
  std::array<double, 3> err{};
  for (std::size_t s = 0; s < points; ++s) {
    const double r = kHalfPi * static_cast<double>(s) / static_cast<double>(points - 1);
    const double c2 = std::cos(2 * r);
    const double s2_closed = (1.0 - c2) / 2.0;
    const double s4_closed = (2.0 - 3.0 * c2 + c2 * c2 * c2) / 4.0;
    err[0] = std::max({err[0], std::abs(cdf(cp1_ball, r) - cdf(s2_ball, 2 * r)),
                       std::abs(cdf(cp1_ball, r) - s2_closed)});
    err[1] = std::max({err[1], std::abs(cdf(hp1_ball, r) - cdf(s4_ball, 2 * r)),
                       std::abs(cdf(hp1_ball, r) - s4_closed)});
    const double closed = odd_cos_profile(15, 7, r);
    err[2] = std::max({err[2], std::abs(cdf(cap_ball, r) - closed),
                       std::abs(1.0 - cdf(cap_tube, kHalfPi - r) - closed)});
  }
  return err;
}

inline PropertyCheck check_coincidence(const SuiteContext& ctx) {
  return run_trials(ctx, "spaces.coincidence", "spaces", 1, [](SplitMix64&, std::size_t) {
    const auto err = coincidence_errors(1000);
    Trial t;
    t.excess = std::max({err[0], err[1], err[2]});
    t.ok = t.excess < 1e-9;
    if (!t.ok) {
      t.note = "cp1 " + format_double(err[0]) + " hp1 " + format_double(err[1]) + " cap2 " +
               format_double(err[2]);
    }
    return t;
  });
}

inline std::vector<CrossSpace> sample_spaces() {
  return {CrossSpace::sphere(2),           CrossSpace::sphere(3),
          CrossSpace::sphere(7),           CrossSpace::real_projective(2),
          CrossSpace::real_projective(3),  CrossSpace::real_projective(5),
          CrossSpace::complex_projective(1), CrossSpace::complex_projective(3),
          CrossSpace::quaternionic_projective(2), CrossSpace::cayley_plane()};
}

inline PropertyCheck check_admissibility(const SuiteContext& ctx) {
  auto spaces = duality_spaces();
  for (int n = 2; n <= 8; ++n) spaces.push_back(CrossSpace::sphere(n));
  return run_trials(ctx, "spaces.admissibility", "spaces", spaces.size(), [&](SplitMix64&, std::size_t i) {
    Trial t;
    for (const auto& c : catalog(spaces[i])) {
      if (c.a + c.b < spaces[i].dim() - 1 || c.a < 0 || c.b < 0) {
        t.ok = false;
        t.note = spaces[i].name() + " " + c.label;
      }
    }
    return t;
  });
}

inline PropertyCheck check_profile_inverse(const SuiteContext& ctx) {
  const auto spaces = sample_spaces();
  return run_trials(ctx, "spaces.profile_inverse", "spaces", spaces.size(), [&](SplitMix64&, std::size_t i) {
    const auto& space = spaces[i];
    Trial t;
    for (const auto& c : catalog(space)) {
      const auto p = profile_density(c, space);
      double prev = -1.0;
      for (int s = 1; s < 200; ++s) {
        const double r = space.diameter() * s / 200.0;
        const double v = cdf(p, r);
        // Within 1e-12 of 1 the increments are below quadrature noise.
        if (!(v > prev) && 1.0 - prev > 1e-12) {
          t.ok = false;
          t.note = space.name() + " " + c.label + " not increasing at r=" + format_double(r);
        }
        prev = v;
        const double v_in = s / 200.0;
        t.excess = std::max(t.excess, std::abs(cdf(p, quantile(p, v_in)) - v_in));
      }
    }
    if (t.excess >= 1e-9) {
      t.ok = false;
      if (t.note.empty()) t.note = space.name() + " quantile round trip";
    }
    return t;
  });
}

// --- solver ---------------------------------------------------------------------------------

inline PropertyCheck check_winner_containment(const SuiteContext& ctx) {
  const auto spaces = sample_spaces();
  return run_trials(ctx, "solver.winner_containment", "solver", ctx.scaled(100),
                    [&](SplitMix64& gen, std::size_t i) {
                      const auto& space = spaces[i % spaces.size()];
                      const double v = gen.uniform(0.01, 0.5);
                      const double eps = gen.uniform(0.01, 0.5);
                      SolverOptions opts;
                      opts.max_total_power = space.dim() + 1;
                      const auto r = solve_isoperimetric({space, v, eps}, opts);
                      const auto cat = catalog(space);
                      Trial t;
                      t.ok = std::find(cat.begin(), cat.end(), r.winner) != cat.end();
                      if (space.is_sphere()) t.ok = t.ok && r.winner.label == "ball";
                      if (!t.ok) t.note = space.name() + " winner " + r.winner.label;
                      return t;
                    });
}

inline PropertyCheck check_complement_consistency(const SuiteContext& ctx) {
  const auto spaces = sample_spaces();
  return run_trials(
      ctx, "solver.complement_consistency", "solver", spaces.size() * 6,
      [&](SplitMix64& gen, std::size_t i) {
        const auto& space = spaces[i % spaces.size()];
        const double v = 0.05 + 0.45 * gen.uniform();
        const double eps = gen.uniform(0.02, 0.3);
        SolverOptions opts;
        opts.max_total_power = space.dim() + 1;
        const auto direct = solve_isoperimetric({space, v, eps}, opts);
        Trial t;
        if (!(direct.enlarged < 1.0)) {
          t.vacuous = true;
          return t;
        }
        const auto comp = solve_complement(space, 1.0 - direct.enlarged, eps, opts);
        const bool core_is_winner =
            std::any_of(direct.co_winners.begin(), direct.co_winners.end(),
                        [&](const Candidate& c) { return c == comp.core; });
        t.excess = std::abs(comp.core_volume - v);
        t.ok = core_is_winner && t.excess < 1e-7 &&
               comp.winner == complement_candidate(space, comp.core);
        if (!t.ok) {
          t.note = space.name() + " v " + format_double(v) + " eps " + format_double(eps) +
                   " core " + comp.core.label + " at " + format_double(comp.core_volume);
        }
        return t;
      });
}

inline PropertyCheck check_solver_monotonicity(const SuiteContext& ctx) {
  const auto spaces = sample_spaces();
  return run_trials(ctx, "solver.monotonicity", "solver", spaces.size(), [&](SplitMix64&, std::size_t i) {
    const auto& space = spaces[i];
    Trial t;
    for (const auto& c : catalog(space)) {
      const auto p = profile_density(c, space);
      for (int a = 1; a <= 9; ++a) {
        const double v = a / 20.0;
        double prev = 0.0;
        for (int e = 1; e <= 10; ++e) {
          const double value = enlarged_volume(p, v, e * 0.05);
          if (prev < 1.0 && !(value > prev)) {
            t.ok = false;
            t.note = space.name() + " " + c.label + " in eps at v=" + format_double(v);
          }
          prev = value;
        }
      }
      for (int e = 1; e <= 5; ++e) {
        const double eps = e * 0.05;
        double prev = 0.0;
        for (int a = 1; a <= 9; ++a) {
          const double value = enlarged_volume(p, a / 20.0, eps);
          if (prev < 1.0 && !(value > prev)) {
            t.ok = false;
            t.note = space.name() + " " + c.label + " in v at eps=" + format_double(eps);
          }
          prev = value;
        }
      }
    }
    return t;
  });
}

inline PropertyCheck check_needle_consistency(const SuiteContext& ctx) {
  const auto spaces = sample_spaces();
  return run_trials(
      ctx, "solver.needle_consistency", "solver", spaces.size() * 3, [&](SplitMix64& gen, std::size_t i) {
        const auto& space = spaces[i % spaces.size()];
        const double v = gen.uniform(0.05, 0.5);
        const double eps = gen.uniform(0.02, 0.3);
        SolverOptions opts;
        opts.max_total_power = space.dim() + 1;
        const auto r = solve_isoperimetric({space, v, eps}, opts);
        Trial t;
        if (!r.check) {
          t.vacuous = true;
          return t;
        }
        bool realizes = space.is_sphere();
        if (!realizes) {
          realizes = check_realization(space, r.winner, MassPair(v, r.check->w), opts).realizes;
        }
        if (!realizes) {
          t.vacuous = true;
          return t;
        }
        t.flagged = !space.is_sphere();
        t.excess = r.check->residual;
        t.ok = t.excess < 1e-6;
        if (!t.ok) t.note = space.name() + " v " + format_double(v) + " eps " + format_double(eps);
        return t;
      },
      "cross_realized");
}

inline PropertyCheck check_solver_determinism(const SuiteContext& ctx) {
  const auto spaces = sample_spaces();
  return run_trials(ctx, "solver.determinism", "solver", 4, [&](SplitMix64& gen, std::size_t i) {
    const auto& space = spaces[(3 * i + 1) % spaces.size()];
    const double v = gen.uniform(0.05, 0.5);
    const double eps = gen.uniform(0.02, 0.3);
    SolverOptions opts;
    opts.max_total_power = space.dim() + 1;
    const auto a = to_json(solve_isoperimetric({space, v, eps}, opts)).dump();
    const auto b = to_json(solve_isoperimetric({space, v, eps}, opts)).dump();
    const auto grid = uniform_v_grid(10);
    const auto c = to_json(isoperimetric_profile_curve(space, eps, grid, opts)).dump();
    const auto d = to_json(isoperimetric_profile_curve(space, eps, grid, opts)).dump();
    Trial t;
    t.ok = a == b && c == d;
    if (!t.ok) t.note = space.name();
    return t;
  });
}

inline PropertyCheck check_main_inequality_suite(const SuiteContext& ctx) {
  return run_trials(ctx, "solver.main_inequality", "solver", 20, [&](SplitMix64& gen, std::size_t i) {
    const int n = i % 2 == 0 ? 2 : 3;
    const auto masses = random_straddling_masses(gen);
    // Monte Carlo on every fifth case keeps the suite fast.
    const std::size_t mc = i % 5 == 0 ? 100000 : 0;
    const auto r = check_main_inequality(n, masses, mc, gen.next(), ctx.opts.threads);
    Trial t;
    t.excess = std::max(0.0, r.sep_estimate - r.bound);
    t.ok = r.ok;
    if (!t.ok) t.note = "n=" + std::to_string(n) + " masses " + describe(masses);
    return t;
  });
}

}  // namespace detail

inline bool is_suite_name(std::string_view name) {
  return std::find(kSuiteNames.begin(), kSuiteNames.end(), name) != kSuiteNames.end();
}

/// Runs the named suite ("density", "separation", "needle", "spaces",
/// "solver" or "all").
inline PropertyReport run_property_suite(std::string_view suite, const RngSpec& rng,
                                         const SuiteOptions& opts = {}) {
  if (!is_suite_name(suite)) {
    throw Error(ErrorCode::InvalidArgument, "unknown suite '" + std::string(suite) + "'");
  }
  const detail::SuiteContext ctx{rng, opts};
  using CheckFn = PropertyCheck (*)(const detail::SuiteContext&);
  struct Entry {
    std::string_view suite;
    CheckFn fn;
  };
  static constexpr Entry kChecks[] = {
      {"density", detail::check_quantile_roundtrip},
      {"density", detail::check_order_reduction},
      {"density", detail::check_product_closure},
      {"density", detail::check_decomposition},
      {"density", detail::check_cdf_lipschitz},
      {"density", detail::check_classifier_examples},
      {"density", detail::check_comparison_lemma_suite},
      {"separation", detail::check_symmetry},
      {"separation", detail::check_monotonicity},
      {"separation", detail::check_degeneracy},
      {"separation", detail::check_oracle_agreement},
      {"separation", detail::check_reflection},
      {"needle", detail::check_sinn_dominance},
      {"needle", detail::check_sin2_dominance},
      {"needle", detail::check_power_monotonicity},
      {"needle", detail::check_component_bound},
      {"needle", detail::check_sphere_monotone_in_n},
      {"needle", detail::check_bound_realization},
      {"spaces", detail::check_duality},
      {"spaces", detail::check_coincidence},
      {"spaces", detail::check_admissibility},
      {"spaces", detail::check_profile_inverse},
      {"solver", detail::check_winner_containment},
      {"solver", detail::check_complement_consistency},
      {"solver", detail::check_solver_monotonicity},
      {"solver", detail::check_needle_consistency},
      {"solver", detail::check_solver_determinism},
      {"solver", detail::check_main_inequality_suite},
  };
  PropertyReport report;
  report.suite = std::string(suite);
  report.seed = rng.seed;
  report.samples = opts.samples;
  for (const auto& entry : kChecks) {
    if (suite == "all" || suite == entry.suite) report.checks.push_back(entry.fn(ctx));
  }
  return report;
}

inline Json to_json(const PropertyReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    checks.push_back(Json{{"id", c.id},
                          {"suite", c.suite},
                          {"passed", c.passed},
                          {"trials", c.trials},
                          {"failures", c.failures},
                          {"detail", c.detail}});
  }
  Json coverage = Json::array();
  for (const auto& e : kCoverageManifest) {
    if (r.suite != "all" && !e.check_id.starts_with(r.suite + ".")) {
      continue;
    }
    coverage.push_back(Json{{"module", e.module}, {"invariant", e.invariant}, {"check", e.check_id}});
  }
  return Json{{"suite", r.suite},
              {"seed", r.seed},
              {"rng", std::string(RngSpec::algorithm)},
              {"samples", r.samples},
              {"pass_count", r.pass_count()},
              {"fail_count", r.fail_count()},
              {"failures", r.failures()},
              {"checks", checks},
              {"coverage", coverage}};
}

inline PropertyReport property_report_from_json(const Json& j) {
  PropertyReport r;
  r.suite = j.at("suite").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.samples = j.at("samples").get<std::size_t>();
  for (const auto& c : j.at("checks")) {
    r.checks.push_back(PropertyCheck{c.at("id").get<std::string>(), c.at("suite").get<std::string>(),
                                     c.at("passed").get<bool>(), c.at("trials").get<std::size_t>(),
                                     c.at("failures").get<std::size_t>(),
                                     c.at("detail").get<std::string>()});
  }
  return r;
}

namespace detail {
inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}
}  // namespace detail

/// JUnit XML with one test case per check.
inline std::string to_junit_xml(const PropertyReport& r) {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<testsuite name=\"needle-iso-" << detail::xml_escape(r.suite) << "\" tests=\""
     << r.checks.size() << "\" failures=\"" << r.fail_count() << "\">\n";
  for (const auto& c : r.checks) {
    os << "  <testcase classname=\"" << detail::xml_escape(c.suite) << "\" name=\""
       << detail::xml_escape(c.id) << "\"";
    if (c.passed) {
      os << "/>\n";
    } else {
      os << ">\n    <failure message=\"" << detail::xml_escape(c.detail) << "\"/>\n  </testcase>\n";
    }
  }
  os << "</testsuite>\n";
  return os.str();
}

}  // namespace needle_iso
