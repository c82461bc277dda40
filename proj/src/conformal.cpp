#include "lgop/conformal.hpp"
#include "lgop/geometry.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace lgop {

RationalMap make_map(double r, Cx v, Cx A)
{
  if (std::abs(A) == 0) {
    if (std::abs(v) != 0) { throw Error(ErrorCode::DegenerateMap, "A = 0 with v != 0"); }
    return RationalMap{r, 0.0, 0.0, 0.0, true};
  }
  RationalMap m{r, v / A, v, A, true};
  m.univalent = check_univalent(m);
  return m;
}

Regime classify_regime(double beta, Cx a)
{
  double const R1 = std::sqrt(beta);
  double const R2 = std::sqrt((1 + 2 * beta) / 2);
  return {std::abs(a) + R1 <= R2 ? Regime::DoublyConnected : Regime::SimplyConnected, R1, R2};
}

MapParams forward_params(RationalMap const &m)
{
  if (std::abs(m.A) == 0) {
    if (std::abs(m.v) != 0) { throw Error(ErrorCode::DegenerateMap, "A = 0 with v != 0"); }
    return {0.0, Cx(std::numeric_limits<double>::infinity(), 0), m.r * m.r};
  }
  double const s = 1 - std::norm(m.A);
  double const t0 = m.r * m.r - std::norm(m.v) / (s * s);
  Cx const Ab = std::conj(m.A);
  double const beta = (m.r * m.r - t0 - m.r * std::conj(m.v) / (Ab * Ab)).real();
  Cx const a = m.r / Ab + m.u + m.v * Ab / s;
  return {beta, a, t0};
}

namespace {

using V3 = Eigen::Vector3d;
using M3 = Eigen::Matrix3d;

// real system with a on the positive axis; x = (r, v, A)
V3 residual(V3 const &x, double beta, double a, double t0)
{
  double const r = x[0], v = x[1], A = x[2], s = 1 - A * A;
  return V3(r * r - v * v / (s * s) - t0, r * r - t0 - r * v / (A * A) - beta, (r + v) / A + v * A / s - a);
}

M3 jacobian(V3 const &x)
{
  double const r = x[0], v = x[1], A = x[2], s = 1 - A * A;
  M3 J;
  J << 2 * r, -2 * v / (s * s), -4 * v * v * A / (s * s * s), 2 * r - v / (A * A), -r / (A * A),
    2 * r * v / (A * A * A), 1 / A, 1 / A + A / s, -(r + v) / (A * A) + v * (1 + A * A) / (s * s);
  return J;
}

double scaled_norm(V3 const &F, double beta, double a, double t0)
{
  return std::max({std::abs(F[0]) / std::max(1.0, t0), std::abs(F[1]) / std::max(1.0, beta),
                   std::abs(F[2]) / std::max(1.0, a)});
}

bool admissible(V3 const &x) { return x[0] > 0 && x[2] > 0 && x[2] < 1; }

bool newton(V3 &x, double beta, double a, double t0, SolveOptions const &opt)
{
  V3 F = residual(x, beta, a, t0);
  double nF = scaled_norm(F, beta, a, t0);
  for (int it = 0; it < opt.max_iter; ++it) {
    if (nF <= opt.tol) { return true; }
    V3 const dx = jacobian(x).partialPivLu().solve(-F);
    if (!dx.allFinite()) { return false; }
    double lambda = 1;
    bool moved = false;
    for (int ls = 0; ls < 30; ++ls, lambda *= 0.5) {
      V3 const y = x + lambda * dx;
      if (!admissible(y)) { continue; }
      V3 const Fy = residual(y, beta, a, t0);
      double const ny = scaled_norm(Fy, beta, a, t0);
      if (ny < nF || (ny <= opt.tol)) {
        x = y;
        F = Fy;
        nF = ny;
        moved = true;
        break;
      }
    }
    if (!moved) { return nF <= 10 * opt.tol; }
  }
  return nF <= opt.tol;
}

} // namespace

RationalMap solve_params(double beta, Cx a, double t0, SolveOptions const &opt)
{
  if (!(t0 > 0)) { throw Error(ErrorCode::InvalidInput, "t0 must be positive"); }
  if (!(beta >= 0)) { throw Error(ErrorCode::InvalidInput, "beta must be nonnegative"); }
  double const absa = std::abs(a);
  if (absa == 0) { throw Error(ErrorCode::InvalidInput, "a must be nonzero"); }
  if (beta > 0 && classify_regime(beta, a).tag == Regime::DoublyConnected) {
    throw Error(ErrorCode::RegimeViolation, "parameters lie in the doubly connected regime");
  }
  double const phi = std::arg(a);
  double const r0 = std::sqrt(t0);
  if (beta == 0) {
    Cx const A = std::polar(std::min(r0 / absa, 0.5), phi);
    RationalMap m{r0, 0.0, 0.0, A, true};
    return m;
  }

  V3 start(r0, 0.0, std::min(r0 / absa, 0.9));
  if (opt.guess) {
    Cx const rot = std::polar(1.0, -phi);
    start = V3(opt.guess->r, (opt.guess->v * rot * rot).real(), (opt.guess->A * rot).real());
  }

  V3 x = start;
  bool ok = newton(x, beta, absa, t0, opt);
  if (!ok) {
    x = V3(r0, 0.0, std::min(r0 / absa, 0.9));
    ok = true;
    for (int s = 1; s <= opt.homotopy_steps && ok; ++s) {
      ok = newton(x, beta * s / opt.homotopy_steps, absa, t0, opt);
    }
  }
  if (!ok || !admissible(x)) {
    throw Error(ErrorCode::NoConvergence, "parameter solve did not converge");
  }
  Cx const A = std::polar(x[2], phi);
  Cx const v = x[1] * std::polar(1.0, 2 * phi);
  RationalMap m{x[0], v / A, v, A, true};
  m.univalent = check_univalent(m);
  return m;
}

Cx map_forward(RationalMap const &m, Cx zeta) { return m.r * zeta + m.u + m.v / (zeta - m.A); }

Cx map_derivative(RationalMap const &m, Cx zeta)
{
  Cx const d = zeta - m.A;
  return m.r - m.v / (d * d);
}

Preimage map_inverse(RationalMap const &m, Cx z)
{
  // r zeta^2 + (u - z - rA) zeta + (zA - uA + v) = 0
  Cx const a2 = m.r;
  Cx const b = m.u - z - m.r * m.A;
  Cx const c = z * m.A - m.u * m.A + m.v;
  Cx const disc = b * b - 4.0 * a2 * c;
  Cx const sq = std::sqrt(disc);
  Cx const q = -0.5 * (b + ((b * std::conj(sq)).real() >= 0 ? sq : -sq));
  Cx z1, z2;
  if (std::abs(q) == 0) {
    z1 = z2 = 0.0;
  } else {
    z1 = q / a2;
    z2 = c / q;
  }
  bool const bp = std::abs(disc) <= 1e-14 * (std::norm(b) + 4 * std::abs(a2 * c));
  double const m1 = std::abs(z1), m2 = std::abs(z2);
  if (m1 < 1 - 1e-10 && m2 < 1 - 1e-10) { throw Error(ErrorCode::InteriorPoint, "point lies inside the droplet"); }
  Cx pick;
  if (std::abs(m1 - m2) <= 1e-12 * std::max(1.0, std::max(m1, m2))) {
    pick = z1.real() >= z2.real() ? z1 : z2;
  } else {
    pick = m1 > m2 ? z1 : z2;
  }
  if (bp) { pick = 0.5 * (z1 + z2); }
  return {pick, bp};
}

double conformal_measure(RationalMap const &m, Cx z)
{
  Cx const zeta = map_inverse(m, z).zeta;
  if (std::abs(std::abs(zeta) - 1) > 1e-8) { throw Error(ErrorCode::InvalidInput, "point is not on the boundary"); }
  double const d = std::abs(map_derivative(m, zeta));
  if (d <= 1e-12 * m.r) { throw Error(ErrorCode::CuspSingular, "f' vanishes on the boundary"); }
  return 1 / d;
}

std::vector<Cx> boundary_polygon(RationalMap const &m, int M)
{
  std::vector<Cx> poly(M);
  for (int j = 0; j < M; ++j) { poly[j] = map_forward(m, std::polar(1.0, 2 * M_PI * j / M)); }
  return poly;
}

std::vector<BoundarySample> sample_boundary(RationalMap const &m, int M)
{
  if (M < 16) { throw Error(ErrorCode::InvalidInput, "need at least 16 boundary samples"); }
  std::vector<BoundarySample> out(M);
  std::vector<Cx> poly(M);
  for (int j = 0; j < M; ++j) {
    double const th = 2 * M_PI * j / M;
    Cx const zeta = std::polar(1.0, th);
    double const d = std::abs(map_derivative(m, zeta));
    if (d <= 1e-12 * m.r) { throw Error(ErrorCode::CuspSingular, "f' vanishes at theta = " + std::to_string(th)); }
    poly[j] = map_forward(m, zeta);
    out[j] = {th, poly[j], 1 / d};
  }
  if (polygon_self_intersects(poly)) { throw Error(ErrorCode::SelfIntersection, "boundary polyline self-intersects"); }
  return out;
}

std::pair<Cx, Cx> critical_points(RationalMap const &m)
{
  Cx const s = std::sqrt(m.v / m.r);
  return {m.A + s, m.A - s};
}

bool critical_points_inside(RationalMap const &m)
{
  auto const [c1, c2] = critical_points(m);
  return std::abs(c1) < 1 && std::abs(c2) < 1;
}

bool check_univalent(RationalMap const &m, int M)
{
  if (!critical_points_inside(m)) { return false; }
  return !polygon_self_intersects(boundary_polygon(m, M));
}

} // namespace lgop
