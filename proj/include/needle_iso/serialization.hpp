#pragma once

// JSON and CSV emission for library results. JSON goes through
// nlohmann::json; doubles are written in shortest round-trip form so that
// every record re-parses to the value that produced it.

#include <charconv>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "needle_iso/cross_spaces.hpp"
#include "needle_iso/density.hpp"
#include "needle_iso/error.hpp"
#include "needle_iso/isoperimetry.hpp"
#include "needle_iso/needle_bound.hpp"
#include "needle_iso/separation.hpp"

namespace needle_iso {

using Json = nlohmann::json;

/// Shortest decimal text that parses back to exactly `x`.
inline std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

inline Json to_json(const Interval& iv) { return Json::array({iv.lo(), iv.hi()}); }

inline Interval interval_from_json(const Json& j) {
  return Interval(j.at(0).get<double>(), j.at(1).get<double>());
}

// --- densities ---------------------------------------------------------------

using DensityRecord = std::variant<TrigDensity, SinAffineDensity, TabulatedDensity>;

inline Json to_json(const TrigDensity& d) {
  return Json{{"family", "trig"},
              {"m", d.m()},
              {"k", d.k()},
              {"lo", d.support().lo()},
              {"hi", d.support().hi()}};
}

inline Json to_json(const SinAffineDensity& d) {
  return Json{{"family", "affine"},
              {"phase", d.phase()},
              {"power", d.power()},
              {"lo", d.support().lo()},
              {"hi", d.support().hi()}};
}

inline Json to_json(const TabulatedDensity& d) {
  return Json{{"family", "tabulated"},
              {"lo", d.support().lo()},
              {"hi", d.support().hi()},
              {"grid", std::vector<double>(d.grid().begin(), d.grid().end())},
              {"values", std::vector<double>(d.values().begin(), d.values().end())}};
}

inline Json density_to_json(const DensityRecord& d) {
  return std::visit([](const auto& x) { return to_json(x); }, d);
}

inline DensityRecord density_from_json(const Json& j) {
  const auto family = j.at("family").get<std::string>();
  if (family == "trig") {
    return TrigDensity::normalized(j.at("m").get<double>(), j.at("k").get<double>(),
                                   Interval(j.at("lo").get<double>(), j.at("hi").get<double>()));
  }
  if (family == "affine") {
    return SinAffineDensity::normalized(
        j.at("phase").get<double>(), j.at("power").get<double>(),
        Interval(j.at("lo").get<double>(), j.at("hi").get<double>()));
  }
  if (family == "tabulated") {
    return TabulatedDensity(j.at("grid").get<std::vector<double>>(),
                            j.at("values").get<std::vector<double>>());
  }
  throw Error(ErrorCode::InvalidArgument, "unknown density family '" + family + "'");
}

// --- separation ----------------------------------------------------------------

inline Json to_json(const SeparationResult& r) {
  return Json{{"sep", r.sep},
              {"left", to_json(r.left)},
              {"right", to_json(r.right)},
              {"k1_side", r.k1_left ? "left" : "right"}};
}

inline SeparationResult separation_from_json(const Json& j) {
  SeparationResult r;
  r.sep = j.at("sep").get<double>();
  r.left = interval_from_json(j.at("left"));
  r.right = interval_from_json(j.at("right"));
  r.k1_left = j.at("k1_side").get<std::string>() == "left";
  return r;
}

// --- needle bounds ---------------------------------------------------------------

inline Json to_json(const NeedleFamily& f) {
  return std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SphereCosFamily>) {
          return Json{{"family", "sphere-cos"}, {"power", x.power}};
        } else if constexpr (std::is_same_v<T, TrigFamily>) {
          return Json{{"family", "trig"}, {"m", x.m}, {"k", x.k}};
        } else {
          return Json{{"family", "affine"},
                      {"phase", x.phase},
                      {"power", x.power},
                      {"lo", x.interval.lo()},
                      {"hi", x.interval.hi()}};
        }
      },
      f);
}

inline NeedleFamily needle_family_from_json(const Json& j) {
  const auto family = j.at("family").get<std::string>();
  if (family == "sphere-cos") return SphereCosFamily{j.at("power").get<double>()};
  if (family == "trig") return TrigFamily{j.at("m").get<int>(), j.at("k").get<int>()};
  if (family == "affine") {
    return AffineFamily{j.at("phase").get<double>(), j.at("power").get<double>(),
                        Interval(j.at("lo").get<double>(), j.at("hi").get<double>())};
  }
  throw Error(ErrorCode::InvalidArgument, "unknown needle family '" + family + "'");
}

inline Json to_json(const NeedleBoundResult& r) {
  Json argmax = Json::array();
  for (const auto& f : r.argmax) argmax.push_back(to_json(f));
  return Json{{"bound", r.bound},
              {"heuristic", r.heuristic},
              {"argmax", argmax},
              {"realization", to_json(r.realization)}};
}

inline NeedleBoundResult needle_bound_from_json(const Json& j) {
  NeedleBoundResult r;
  r.bound = j.at("bound").get<double>();
  r.heuristic = j.at("heuristic").get<bool>();
  for (const auto& f : j.at("argmax")) r.argmax.push_back(needle_family_from_json(f));
  r.realization = separation_from_json(j.at("realization"));
  return r;
}

inline std::string family_tag(const NeedleFamily& f) {
  if (std::holds_alternative<SphereCosFamily>(f)) return "sphere-cos";
  if (std::holds_alternative<TrigFamily>(f)) return "trig";
  return "affine";
}

/// CSV with header k1,k2,bound,family,m,k. For sphere-cos rows m is the
/// cosine power and k is 0; affine rows carry the power in m.
inline std::string bound_rows_to_csv(std::span<const BoundRow> rows) {
  std::ostringstream os;
  os << "k1,k2,bound,family,m,k\n";
  for (const auto& row : rows) {
    os << format_double(row.k1) << ',' << format_double(row.k2) << ','
       << format_double(row.result.bound) << ',';
    const NeedleFamily& f = row.result.argmax.front();
    os << family_tag(f) << ',';
    if (const auto* s = std::get_if<SphereCosFamily>(&f)) {
      os << format_double(s->power) << ",0";
    } else if (const auto* t = std::get_if<TrigFamily>(&f)) {
      os << t->m << ',' << t->k;
    } else {
      os << format_double(std::get<AffineFamily>(f).power) << ",0";
    }
    os << '\n';
  }
  return os.str();
}

inline Json bound_rows_to_json(std::span<const BoundRow> rows) {
  Json out = Json::array();
  for (const auto& row : rows) {
    Json j = to_json(row.result);
    j["k1"] = row.k1;
    j["k2"] = row.k2;
    out.push_back(j);
  }
  return out;
}

// --- spaces and candidates ---------------------------------------------------------

inline Json to_json(const Candidate& c) {
  return Json{{"label", c.label}, {"a", c.a}, {"b", c.b}, {"polar", c.polar_label}};
}

inline Candidate candidate_from_json(const Json& j) {
  return Candidate{j.at("label").get<std::string>(), j.at("a").get<int>(), j.at("b").get<int>(),
                   j.at("polar").get<std::string>()};
}

inline Json catalog_to_json(const CrossSpace& space) {
  Json candidates = Json::array();
  for (const auto& c : catalog(space)) candidates.push_back(to_json(c));
  return Json{{"space", space.name()},
              {"dim", space.dim()},
              {"diameter", space.diameter()},
              {"candidates", candidates}};
}

// --- solver ----------------------------------------------------------------------

inline Json to_json(const SolveResult& r) {
  Json candidates = Json::array();
  for (const auto& cv : r.per_candidate) {
    Json c = to_json(cv.candidate);
    c["enlarged"] = cv.enlarged;
    candidates.push_back(c);
  }
  Json co = Json::array();
  for (const auto& c : r.co_winners) co.push_back(c.label);
  Json check = nullptr;
  if (r.check) {
    check = Json{{"w", r.check->w},
                 {"bound", r.check->bound},
                 {"residual", r.check->residual},
                 {"heuristic", r.check->heuristic}};
  }
  return Json{{"space", r.space},     {"v", r.v},
              {"epsilon", r.epsilon}, {"winner", r.winner.label},
              {"co_winners", co},     {"enlarged", r.enlarged},
              {"candidates", candidates}, {"check", check}};
}

inline SolveResult solve_result_from_json(const Json& j) {
  SolveResult r;
  r.space = j.at("space").get<std::string>();
  r.v = j.at("v").get<double>();
  r.epsilon = j.at("epsilon").get<double>();
  r.enlarged = j.at("enlarged").get<double>();
  for (const auto& c : j.at("candidates")) {
    r.per_candidate.push_back({candidate_from_json(c), c.at("enlarged").get<double>()});
  }
  const auto find = [&](const std::string& label) {
    for (const auto& cv : r.per_candidate) {
      if (cv.candidate.label == label) return cv.candidate;
    }
    throw Error(ErrorCode::InvalidArgument, "winner '" + label + "' not among candidates");
  };
  r.winner = find(j.at("winner").get<std::string>());
  for (const auto& label : j.at("co_winners")) r.co_winners.push_back(find(label.get<std::string>()));
  if (!j.at("check").is_null()) {
    const auto& c = j.at("check");
    r.check = NeedleBoundCheck{c.at("w").get<double>(), c.at("bound").get<double>(),
                               c.at("residual").get<double>(), c.at("heuristic").get<bool>()};
  }
  return r;
}

inline Json to_json(const ComplementSolution& s) {
  Json cores = Json::array();
  for (const auto& c : s.per_core) {
    Json j = to_json(c.core);
    j["core_volume"] = c.core_volume;
    j["enlarged"] = c.enlarged;
    cores.push_back(j);
  }
  return Json{{"space", s.space},
              {"v", s.v},
              {"epsilon", s.epsilon},
              {"reduction", "complement"},
              {"winner", s.winner.label},
              {"enlarged", s.enlarged},
              {"construction",
               {{"core", s.core.label},
                {"core_volume", s.core_volume},
                {"delta", s.epsilon},
                {"description", "complement of the " + format_double(s.epsilon) +
                                    "-neighbourhood of the " + s.core.label + " of volume " +
                                    format_double(s.core_volume)}}},
              {"cores", cores}};
}

inline Json to_json(const ProfileCurve& c) {
  Json rows = Json::array();
  for (const auto& r : c.rows) {
    rows.push_back(Json{{"v", r.v}, {"winner", r.winner}, {"enlarged", r.enlarged}});
  }
  Json crossovers = Json::array();
  for (const auto& x : c.crossovers) {
    crossovers.push_back(Json{{"v0", x.v0},
                              {"v_lo", x.v_lo},
                              {"v_hi", x.v_hi},
                              {"from", x.from},
                              {"to", x.to}});
  }
  return Json{{"space", c.space}, {"epsilon", c.epsilon}, {"rows", rows}, {"crossovers", crossovers}};
}

/// CSV with header v,winner,enlarged. Crossovers follow the table as
/// comment lines "#crossover,v0,from,to,v_lo,v_hi".
inline std::string profile_to_csv(const ProfileCurve& c) {
  std::ostringstream os;
  os << "v,winner,enlarged\n";
  for (const auto& r : c.rows) {
    os << format_double(r.v) << ',' << r.winner << ',' << format_double(r.enlarged) << '\n';
  }
  for (const auto& x : c.crossovers) {
    os << "#crossover," << format_double(x.v0) << ',' << x.from << ',' << x.to << ','
       << format_double(x.v_lo) << ',' << format_double(x.v_hi) << '\n';
  }
  return os.str();
}

}  // namespace needle_iso
