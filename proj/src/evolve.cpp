#include "lgop/evolve.hpp"

#include "lgop/types.hpp"
#include "lgop/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace lgop {

EvolveState evolve_at(Geometric const &g, double t0, RationalMap const *guess, int M)
{
  EvolveState s;
  s.t0 = t0;
  try {
    SolveOptions o;
    o.guess = guess;
    s.m = solve_params(g.beta, g.a, t0, o);
    s.solved = true;
    s.ok = s.m.univalent;
  } catch (Error const &e) {
    if (e.code() != ErrorCode::NoConvergence) { throw; }
  }
  if (s.ok && M > 0) { s.boundary = boundary_polygon(s.m, M); }
  return s;
}

EvolveResult evolve(Geometric const &g, std::vector<double> const &t0s, int M, double bracket_tol)
{
  EvolveResult r;
  r.states.reserve(t0s.size());
  RationalMap const *guess = nullptr;
  for (double t0 : t0s) {
    r.states.push_back(evolve_at(g, t0, guess, M));
    if (r.states.back().solved) { guess = &r.states.back().m; }
  }

  for (std::size_t i = 0; i < r.states.size(); ++i) {
    for (std::size_t j = i + 1; j < r.states.size(); ++j) {
      auto const &inner = r.states[i].boundary, &outer = r.states[j].boundary;
      if (inner.empty() || outer.empty()) { continue; }
      ++r.pairs_checked;
      bool const inside =
        std::all_of(inner.begin(), inner.end(), [&](Cx z) { return point_in_polygon(outer, z); });
      if (!inside) {
        r.nested = false;
        r.nesting_failures.emplace_back(r.states[i].t0, r.states[j].t0);
      }
    }
  }

  // first change of validity along the grid
  for (std::size_t i = 0; i + 1 < r.states.size(); ++i) {
    if (r.states[i].ok == r.states[i + 1].ok) { continue; }
    bool const valid_low = r.states[i].ok;
    double lo = r.states[i].t0, hi = r.states[i + 1].t0;
    RationalMap anchor = valid_low ? r.states[i].m : r.states[i + 1].m;
    while (hi - lo > bracket_tol) {
      double const mid = 0.5 * (lo + hi);
      EvolveState const s = evolve_at(g, mid, &anchor);
      if (s.ok == valid_low) {
        lo = mid;
      } else {
        hi = mid;
      }
      if (s.ok) { anchor = s.m; }
    }
    EvolveState const last = evolve_at(g, valid_low ? lo : hi, &anchor);
    EvolveState const other = evolve_at(g, valid_low ? hi : lo, &anchor);
    Onset o;
    o.t0_lo = lo;
    o.t0_hi = hi;
    o.solution_ends = !other.solved;
    if (last.ok) {
      auto const cp = critical_points(last.m);
      o.critical_radius = std::max(std::abs(cp.first), std::abs(cp.second));
    }
    r.onset = o;
    break;
  }
  return r;
}

} // namespace lgop
