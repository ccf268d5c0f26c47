// needle-iso: command-line front end.
//
// Exit codes: 0 success, 1 domain error (including failed verification),
// 2 usage error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "needle_iso.hpp"

namespace ni = needle_iso;

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { Json, Csv, Human };

void add_format(CLI::App* cmd, std::string& format, const std::string& fallback,
                std::vector<std::string> allowed = {"json", "csv", "human"}) {
  format = fallback;
  cmd->add_option("--format", format, "Output format")
      ->check(CLI::IsMember(allowed))
      ->capture_default_str();
}

Format parse_format(const std::string& f) {
  if (f == "csv") return Format::Csv;
  if (f == "human") return Format::Human;
  return Format::Json;
}

void emit_json(const ni::Json& j) { std::cout << j.dump(2) << '\n'; }

std::string fmt(double x) { return ni::format_double(x); }

// --- sep -----------------------------------------------------------------------

struct SepArgs {
  std::string family = "trig";
  double m = 0.0;
  double k = 0.0;
  double phase = 0.0;
  double power = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  std::string format;
};

ni::DensityRecord build_density(const SepArgs& a) {
  const ni::Interval iv(a.lo, a.hi);
  if (a.family == "trig") return ni::TrigDensity::normalized(a.m, a.k, iv);
  return ni::SinAffineDensity::normalized(a.phase, a.power, iv);
}

int run_sep(const SepArgs& a) {
  const ni::MassPair masses(a.k1, a.k2);
  const auto density = build_density(a);
  const auto r = std::visit([&](const auto& d) { return ni::sep_1d(d, masses); }, density);
  switch (parse_format(a.format)) {
    case Format::Json: {
      ni::Json j = ni::to_json(r);
      j["density"] = ni::density_to_json(density);
      j["k1"] = a.k1;
      j["k2"] = a.k2;
      emit_json(j);
      break;
    }
    case Format::Csv:
      std::cout << "sep,left_lo,left_hi,right_lo,right_hi,k1_side\n"
                << fmt(r.sep) << ',' << fmt(r.left.lo()) << ',' << fmt(r.left.hi()) << ','
                << fmt(r.right.lo()) << ',' << fmt(r.right.hi()) << ','
                << (r.k1_left ? "left" : "right") << '\n';
      break;
    case Format::Human:
      std::cout << "sep   " << fmt(r.sep) << '\n'
                << "left  [" << fmt(r.left.lo()) << ", " << fmt(r.left.hi()) << "] mass "
                << fmt(r.k1_left ? a.k1 : a.k2) << '\n'
                << "right [" << fmt(r.right.lo()) << ", " << fmt(r.right.hi()) << "] mass "
                << fmt(r.k1_left ? a.k2 : a.k1) << '\n';
      break;
  }
  return 0;
}

// --- bound -------------------------------------------------------------------------

struct BoundArgs {
  std::optional<std::string> space;
  std::optional<int> sphere_dim;
  double k1 = 0.0;
  double k2 = 0.0;
  std::optional<int> max_power;
  bool force = false;
  std::size_t search = 0;
  std::optional<std::uint64_t> seed;
  std::string format;
  std::vector<double> k1_grid;
  std::vector<double> k2_grid;
};

ni::CrossSpace bound_space(const BoundArgs& a) {
  if (a.space.has_value() == a.sphere_dim.has_value()) {
    throw UsageError("give exactly one of --space and --sphere-dim");
  }
  if (a.sphere_dim) return ni::CrossSpace::sphere(*a.sphere_dim);
  return ni::CrossSpace::parse(*a.space);
}

ni::NeedleBoundResult compute_bound(const ni::CrossSpace& space, const ni::MassPair& masses,
                                    const BoundArgs& a) {
  ni::BoundOptions opts;
  opts.force = a.force;
  opts.max_total_power = a.max_power;
  return space.is_sphere() ? ni::sphere_needle_bound(space.dim(), masses, opts)
                           : ni::cross_needle_bound(space, masses, opts);
}

int run_bound(const BoundArgs& a) {
  const auto space = bound_space(a);
  if (a.search > 0 && !a.seed) throw UsageError("--search needs --seed");
  const ni::MassPair masses(a.k1, a.k2);
  auto result = compute_bound(space, masses, a);

  std::optional<ni::AffineSearchResult> search;
  if (a.search > 0) {
    const int lowest = space.dim() - 1;
    const int highest = a.max_power.value_or(space.dim() + (space.is_sphere() ? 6 : 7));
    std::vector<double> powers;
    for (int p = lowest; p <= highest; ++p) powers.push_back(p);
    if (powers.empty()) powers.push_back(lowest);
    search = ni::optimize_affine_family(space.diameter(), powers, masses, a.search, *a.seed);
    if (search->best_sep > result.bound) {
      result.bound = search->best_sep;
      result.argmax = {*search->best_needle};
      result.realization = ni::family_separation(*search->best_needle, masses);
    }
  }

  switch (parse_format(a.format)) {
    case Format::Json: {
      ni::Json j = ni::to_json(result);
      j["space"] = space.name();
      j["k1"] = a.k1;
      j["k2"] = a.k2;
      if (!space.is_sphere()) j["max_total_power"] = a.max_power.value_or(space.dim() + 7);
      if (search) {
        j["search"] = {{"samples", a.search},
                       {"seed", *a.seed},
                       {"best_sep", search->best_sep},
                       {"best_needle", ni::to_json(ni::NeedleFamily{*search->best_needle})}};
      }
      emit_json(j);
      break;
    }
    case Format::Csv: {
      const std::vector<ni::BoundRow> rows{{a.k1, a.k2, result}};
      std::cout << ni::bound_rows_to_csv(rows);
      break;
    }
    case Format::Human: {
      std::cout << "N(" << fmt(a.k1) << ", " << fmt(a.k2) << ") on " << space.name() << " = "
                << fmt(result.bound) << (result.heuristic ? "  [heuristic: masses do not straddle 1/2]" : "")
                << '\n';
      for (const auto& f : result.argmax) std::cout << "  argmax " << ni::to_json(f).dump() << '\n';
      break;
    }
  }
  return 0;
}

int run_bound_profile(const BoundArgs& a) {
  const auto space = bound_space(a);
  if (a.k1_grid.empty() || a.k2_grid.empty()) throw UsageError("--k1-grid and --k2-grid are required");
  const auto rows = ni::bound_profile(
      [&](const ni::MassPair& m) { return compute_bound(space, m, a); }, a.k1_grid, a.k2_grid);
  if (parse_format(a.format) == Format::Json) {
    emit_json(ni::Json{{"space", space.name()}, {"rows", ni::bound_rows_to_json(rows)}});
  } else {
    std::cout << ni::bound_rows_to_csv(rows);
  }
  return 0;
}

// --- catalog / solve / profile -----------------------------------------------------------

int run_catalog(const std::string& name, const std::string& format) {
  const auto space = ni::CrossSpace::parse(name);
  if (parse_format(format) == Format::Human) {
    std::cout << space.name() << " dim " << space.dim() << " diameter " << fmt(space.diameter()) << '\n';
    for (const auto& c : ni::catalog(space)) {
      std::cout << "  " << c.label << " (" << c.a << "," << c.b << ")  polar: " << c.polar_label << '\n';
    }
  } else {
    emit_json(ni::catalog_to_json(space));
  }
  return 0;
}

int run_solve(const std::string& name, double v, double eps, const std::string& format) {
  const auto space = ni::CrossSpace::parse(name);
  if (v > 0.5 && v < 1.0) {
    const auto s = ni::solve_complement(space, v, eps);
    if (parse_format(format) == Format::Human) {
      std::cout << "v > 1/2: complement reduction\n"
                << "winner   " << s.winner.label << '\n'
                << "enlarged " << fmt(s.enlarged) << '\n'
                << "set      complement of the " << fmt(eps) << "-neighbourhood of the "
                << s.core.label << " of volume " << fmt(s.core_volume) << '\n';
    } else {
      emit_json(ni::to_json(s));
    }
    return 0;
  }
  const auto r = ni::solve_isoperimetric({space, v, eps});
  if (parse_format(format) == Format::Human) {
    std::cout << "winner   " << r.winner.label << '\n' << "enlarged " << fmt(r.enlarged) << '\n';
    for (const auto& cv : r.per_candidate) {
      std::cout << "  " << cv.candidate.label << "  " << fmt(cv.enlarged) << '\n';
    }
    if (r.check) {
      std::cout << "needle bound N(v, " << fmt(r.check->w) << ") = " << fmt(r.check->bound)
                << "  |N - eps| = " << fmt(r.check->residual) << '\n';
    }
  } else {
    emit_json(ni::to_json(r));
  }
  return 0;
}

int run_profile(const std::string& name, double eps, std::size_t grid, const std::string& format) {
  const auto space = ni::CrossSpace::parse(name);
  if (grid == 0) throw UsageError("--v-grid must be >= 1");
  const auto curve = ni::isoperimetric_profile_curve(space, eps, ni::uniform_v_grid(grid));
  switch (parse_format(format)) {
    case Format::Json: emit_json(ni::to_json(curve)); break;
    case Format::Csv: std::cout << ni::profile_to_csv(curve); break;
    case Format::Human:
      for (const auto& row : curve.rows) {
        std::cout << fmt(row.v) << "  " << row.winner << "  " << fmt(row.enlarged) << '\n';
      }
      for (const auto& x : curve.crossovers) {
        std::cout << "crossover at v0 = " << fmt(x.v0) << ": " << x.from << " -> " << x.to << '\n';
      }
      break;
  }
  return 0;
}

// --- verify ----------------------------------------------------------------------------------

int run_verify(const std::string& suite, std::optional<std::uint64_t> seed, std::size_t samples,
               const std::string& junit, const std::string& format) {
  if (!seed) throw UsageError("verify needs --seed");
  if (!ni::is_suite_name(suite)) throw UsageError("unknown suite '" + suite + "'");
  if (samples == 0) throw UsageError("--samples must be >= 1");
  ni::SuiteOptions opts;
  opts.samples = samples;
  const auto report = ni::run_property_suite(suite, ni::RngSpec{*seed}, opts);
  if (parse_format(format) == Format::Human) {
    for (const auto& c : report.checks) {
      std::cout << (c.passed ? "pass " : "FAIL ") << c.id << "  " << c.detail << '\n';
    }
    std::cout << report.pass_count() << " passed, " << report.fail_count() << " failed\n";
  } else {
    emit_json(ni::to_json(report));
  }
  if (!junit.empty()) {
    std::ofstream out(junit);
    if (!out) throw ni::Error(ni::ErrorCode::InvalidArgument, "cannot write " + junit);
    out << ni::to_junit_xml(report);
  }
  if (report.fail_count() > 0) {
    std::cerr << "verify: " << report.fail_count() << " of " << report.checks.size()
              << " checks failed\n";
    return kExitDomain;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Needle separation distances and CROSS isoperimetry"};
  app.require_subcommand(1);

  SepArgs sep;
  auto* cmd_sep = app.add_subcommand("sep", "Separation distance of a 1-D needle");
  cmd_sep->add_option("--family", sep.family, "Density family")
      ->check(CLI::IsMember({"trig", "affine"}))
      ->capture_default_str();
  cmd_sep->add_option("--m", sep.m, "Cosine exponent (trig)");
  cmd_sep->add_option("--k", sep.k, "Sine exponent (trig)");
  cmd_sep->add_option("--phase", sep.phase, "Phase (affine), radians");
  cmd_sep->add_option("--power", sep.power, "Power (affine)");
  cmd_sep->add_option("--lo", sep.lo, "Interval start, radians")->required();
  cmd_sep->add_option("--hi", sep.hi, "Interval end, radians")->required();
  cmd_sep->add_option("--k1", sep.k1, "First mass")->required();
  cmd_sep->add_option("--k2", sep.k2, "Second mass")->required();
  add_format(cmd_sep, sep.format, "json");

  BoundArgs bound;
  auto* cmd_bound = app.add_subcommand("bound", "Needle separation distance N(k1, k2)");
  cmd_bound->add_option("--space", bound.space, "Space name (cp1, rp3, ...)");
  cmd_bound->add_option("--sphere-dim", bound.sphere_dim, "Sphere dimension n");
  cmd_bound->add_option("--k1", bound.k1, "First mass")->required();
  cmd_bound->add_option("--k2", bound.k2, "Second mass")->required();
  cmd_bound->add_option("--max-power", bound.max_power, "Largest m + k (default dim + 7)");
  cmd_bound->add_flag("--force", bound.force, "Compute even if the masses do not straddle 1/2");
  cmd_bound->add_option("--search", bound.search, "Also search N random affine needles");
  cmd_bound->add_option("--seed", bound.seed, "Seed for --search");
  add_format(cmd_bound, bound.format, "json");

  BoundArgs profile_bound;
  auto* cmd_bprof = app.add_subcommand("bound-profile", "N(k1, k2) over a mass grid");
  cmd_bprof->add_option("--space", profile_bound.space, "Space name");
  cmd_bprof->add_option("--sphere-dim", profile_bound.sphere_dim, "Sphere dimension n");
  cmd_bprof->add_option("--k1-grid", profile_bound.k1_grid, "k1 values")->delimiter(',')->required();
  cmd_bprof->add_option("--k2-grid", profile_bound.k2_grid, "k2 values")->delimiter(',')->required();
  cmd_bprof->add_option("--max-power", profile_bound.max_power, "Largest m + k");
  cmd_bprof->add_flag("--force", profile_bound.force, "Allow non-straddling masses");
  add_format(cmd_bprof, profile_bound.format, "csv", {"csv", "json"});

  std::string catalog_space;
  std::string catalog_format;
  auto* cmd_catalog = app.add_subcommand("catalog", "Candidate sets of a space");
  cmd_catalog->add_option("--space", catalog_space, "Space name")->required();
  add_format(cmd_catalog, catalog_format, "json", {"json", "human"});

  std::string solve_space;
  double solve_v = 0.0;
  double solve_eps = 0.0;
  std::string solve_format;
  auto* cmd_solve = app.add_subcommand("solve", "Best candidate for volume v and enlargement eps");
  cmd_solve->add_option("--space", solve_space, "Space name")->required();
  cmd_solve->add_option("--v", solve_v, "Volume fraction in (0, 1)")->required();
  cmd_solve->add_option("--eps", solve_eps, "Enlargement radius, radians")->required();
  add_format(cmd_solve, solve_format, "json", {"json", "human"});

  std::string profile_space;
  double profile_eps = 0.0;
  std::size_t profile_grid = 100;
  std::string profile_format;
  auto* cmd_profile = app.add_subcommand("profile", "Winner over a grid of volumes");
  cmd_profile->add_option("--space", profile_space, "Space name")->required();
  cmd_profile->add_option("--eps", profile_eps, "Enlargement radius, radians")->required();
  cmd_profile->add_option("--v-grid", profile_grid, "Number of volumes i/(2N), i = 1..N")
      ->capture_default_str();
  add_format(cmd_profile, profile_format, "csv");

  std::string verify_suite = "all";
  std::optional<std::uint64_t> verify_seed;
  std::size_t verify_samples = 1000;
  std::string verify_junit;
  std::string verify_format;
  auto* cmd_verify = app.add_subcommand("verify", "Run the invariant suites");
  cmd_verify->add_option("--suite", verify_suite, "density|separation|needle|spaces|solver|all")
      ->capture_default_str();
  cmd_verify->add_option("--seed", verify_seed, "Seed (required)");
  cmd_verify->add_option("--samples", verify_samples, "Random needles per check")->capture_default_str();
  cmd_verify->add_option("--junit", verify_junit, "Also write JUnit XML here");
  add_format(cmd_verify, verify_format, "json", {"json", "human"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    const CLI::App* failed = &app;
    for (auto* sub : app.get_subcommands()) failed = sub;
    std::cerr << failed->help();
    return kExitUsage;
  }

  try {
    if (*cmd_sep) return run_sep(sep);
    if (*cmd_bound) return run_bound(bound);
    if (*cmd_bprof) return run_bound_profile(profile_bound);
    if (*cmd_catalog) return run_catalog(catalog_space, catalog_format);
    if (*cmd_solve) return run_solve(solve_space, solve_v, solve_eps, solve_format);
    if (*cmd_profile) return run_profile(profile_space, profile_eps, profile_grid, profile_format);
    if (*cmd_verify) {
      return run_verify(verify_suite, verify_seed, verify_samples, verify_junit, verify_format);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ni::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitUsage;
}
