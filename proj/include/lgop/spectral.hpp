#pragma once

#include "conformal.hpp"
#include "moments.hpp"
#include "orthopoly.hpp"
#include "types.hpp"

#include <utility>
#include <vector>

namespace lgop {

struct RationalFn
{
  std::vector<Cx> num, den;
  Cx operator()(Cx z) const;
};

// A(z) y^2 + B(z) y + C(z) = 0 for the Cauchy transform y = S - V'
struct AlgebraicCurve
{
  RationalFn A, B, C;
  RationalMap map;
  Potential potential;
  Cx z1, z2;
};

AlgebraicCurve build_curve(RationalMap const &m, Potential const &p);
std::pair<Cx, Cx> branch_points(RationalMap const &m);
RationalFn discriminant(AlgebraicCurve const &c);

std::pair<Cx, Cx> curve_roots(AlgebraicCurve const &c, Cx z);
Cx exterior_branch(AlgebraicCurve const &c, Cx z);
double curve_residual(AlgebraicCurve const &c, Cx z, Cx y);
// |p(z)| / sum |p_k||z|^k for a polynomial numerator
double relative_value(std::vector<Cx> const &p, Cx z);

struct BranchToken
{
  bool set = false;
  Cx last{0, 0};
};

BranchToken reference_token(AlgebraicCurve const &c);
Cx branch_jump(AlgebraicCurve const &c, Cx z, BranchToken &token);

// Re of the integral of the jump from z1, path z1 -> midpoint -> waypoints -> z
double phi(AlgebraicCurve const &c, Cx z);
double phi_via(AlgebraicCurve const &c, std::vector<Cx> const &waypoints, Cx z);

// closed form through the two preimages of z
std::pair<Cx, Cx> preimages(RationalMap const &m, Cx z);
Cx schwarz_on_sheet(RationalMap const &m, Cx zeta);
Cx antiderivative(RationalMap const &m, Cx zeta);
double antiderivative_re(RationalMap const &m, Cx zeta);
double phi_closed(AlgebraicCurve const &c, Cx z);

struct TraceOptions
{
  int resolution = 256;
  int max_levels = 3;
  double vertex_tol = 1e-4; // relative to droplet diameter
  int threads = 1;
};

struct Component
{
  std::vector<Cx> points;
  bool from_z1 = false, to_z2 = false, interior = false;
  double raw_mass = 0;
};

struct Trajectory
{
  std::vector<Cx> points;
  std::vector<double> arc_length;
  std::vector<double> rho_s; // normalized to total mass t0
  double raw_mass = 0;
  double mass = 0;
  bool rho_positive = true;
  int resolution = 0;
  double chord_deviation = 0;
  std::vector<Component> components;
};

Trajectory trace_trajectory(AlgebraicCurve const &c, std::vector<Cx> const &droplet, TraceOptions const &opt = {});

// int rho_s(z') log|z - z'|^2 |dz'|
double trajectory_log_potential(Trajectory const &t, Cx z);

struct KLResult
{
  double raw, mean_adjusted;
};

KLResult kl_divergence(AnyBasis const &b, int k, RationalMap const &m, int M);
double profile_sup_error(AnyBasis const &b, int k, RationalMap const &m, int M);

struct Distance
{
  double max, mean;
};

Distance zero_trajectory_distance(std::vector<Cx> const &zeros, std::vector<Cx> const &traj);

} // namespace lgop
