#pragma once

#include "types.hpp"

#include <utility>
#include <vector>

namespace lgop {

// f(zeta) = r zeta + u + v/(zeta - A)
struct RationalMap
{
  double r = 1;
  Cx u{0, 0};
  Cx v{0, 0};
  Cx A{0, 0};
  bool univalent = true;
};

RationalMap make_map(double r, Cx v, Cx A);

struct Regime
{
  enum Tag { SimplyConnected, DoublyConnected } tag;
  double R1, R2;
};

Regime classify_regime(double beta, Cx a);

struct MapParams
{
  double beta;
  Cx a;
  double t0;
};

MapParams forward_params(RationalMap const &m);

struct SolveOptions
{
  int max_iter = 50;
  int homotopy_steps = 8;
  double tol = 1e-13;
  RationalMap const *guess = nullptr; // real-axis solution to continue from
};

RationalMap solve_params(double beta, Cx a, double t0, SolveOptions const &opt = {});

Cx map_forward(RationalMap const &m, Cx zeta);
Cx map_derivative(RationalMap const &m, Cx zeta);

struct Preimage
{
  Cx zeta;
  bool branch_point;
};

Preimage map_inverse(RationalMap const &m, Cx z);

double conformal_measure(RationalMap const &m, Cx z);

struct BoundarySample
{
  double theta;
  Cx z;
  double measure;
};

std::vector<BoundarySample> sample_boundary(RationalMap const &m, int M);
std::vector<Cx> boundary_polygon(RationalMap const &m, int M);

std::pair<Cx, Cx> critical_points(RationalMap const &m);
bool critical_points_inside(RationalMap const &m);
bool check_univalent(RationalMap const &m, int M = 4096);

} // namespace lgop
