// Walks the volume axis of a projective space and prints where the optimal
// candidate changes, together with the needle bound at one point.
//
//   cp_crossover [space] [eps]     defaults: rp3 0.1

#include <cstdlib>
#include <iostream>
#include <string>

#include "needle_iso.hpp"

namespace ni = needle_iso;

int main(int argc, char** argv) {
  const std::string name = argc > 1 ? argv[1] : "rp3";
  const double eps = argc > 2 ? std::strtod(argv[2], nullptr) : 0.1;
  try {
    const auto space = ni::CrossSpace::parse(name);
    std::cout << space.symbol() << " index " << space.index() << ", dim " << space.dim()
              << ", diameter " << space.diameter() << "\n\ncandidates:\n";
    for (const auto& c : ni::catalog(space)) {
      std::cout << "  " << c.label << "  sin^" << c.a << " cos^" << c.b << "  (polar " << c.polar_label
                << ")\n";
    }

    const auto curve = ni::isoperimetric_profile_curve(space, eps, ni::uniform_v_grid(50));
    std::cout << "\nwinner along v in (0, 1/2], eps = " << eps << ":\n";
    std::string last;
    for (const auto& row : curve.rows) {
      if (row.winner != last) std::cout << "  from v = " << row.v << ": " << row.winner << '\n';
      last = row.winner;
    }
    for (const auto& x : curve.crossovers) {
      std::cout << "  crossover v0 = " << x.v0 << " (" << x.from << " -> " << x.to << ")\n";
    }

    const auto r = ni::solve_isoperimetric({space, 0.25, eps});
    std::cout << "\nv = 0.25: " << r.winner.label << " grows to " << r.enlarged << '\n';
    if (r.check) {
      std::cout << "needle bound N(0.25, " << r.check->w << ") = " << r.check->bound
                << ", eps = " << eps << '\n';
    }
  } catch (const ni::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
