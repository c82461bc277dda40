#pragma once

#include "conformal.hpp"
#include "moments.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace lgop {

struct EvolveState
{
  double t0 = 0;
  bool solved = false;
  bool ok = false; // solved and univalent
  RationalMap m;
  std::vector<Cx> boundary; // empty unless ok
};

struct Onset
{
  double t0_lo = 0, t0_hi = 0;
  bool solution_ends = false; // no solution past the bracket, otherwise univalence loss
  std::optional<double> critical_radius;
};

struct EvolveResult
{
  std::vector<EvolveState> states;
  bool nested = true;
  int pairs_checked = 0;
  std::vector<std::pair<double, double>> nesting_failures;
  std::optional<Onset> onset;
};

EvolveState evolve_at(Geometric const &g, double t0, RationalMap const *guess, int M = 0);
EvolveResult evolve(Geometric const &g, std::vector<double> const &t0s, int M, double bracket_tol = 1e-6);

} // namespace lgop
