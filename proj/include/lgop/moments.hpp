#pragma once

#include "types.hpp"

#include <variant>
#include <vector>

namespace lgop {

struct Explicit
{
  std::vector<Cx> t; // t[k-1] = t_k
  bool truncated = false;
};

struct Geometric
{
  double beta = 0;
  Cx a{1, 0};
};

struct MomentData
{
  double t0 = 1;
  std::variant<Explicit, Geometric> kind;

  bool geometric() const { return std::holds_alternative<Geometric>(kind); }
  Geometric const &geo() const { return std::get<Geometric>(kind); }
};

struct Potential
{
  MomentData data;
  double eval_radius; // Explicit truncations only

  explicit Potential(MomentData d);
  double beta() const { return data.geometric() ? data.geo().beta : 0.0; }
};

Potential geometric_potential(double beta, Cx a, double t0);

Cx eval_V(Potential const &p, Cx z);
Cx eval_dV(Potential const &p, Cx z);
double eval_W(Potential const &p, Cx z);

// -N W(z), finite or -inf; same value as -N*eval_W but evaluated in Real
template <typename Real> Real log_weight(Potential const &p, Real N, Complex<Real> const &z);

// tail bound of a truncated explicit series at |z| (0 when exact)
double tail_bound(Explicit const &e, double absz);

bool check_confinement(Potential const &p, double N, int n_max);

} // namespace lgop
