#include "lgop/moments.hpp"

#include <cmath>
#include <limits>

namespace lgop {

namespace {

double decay_rate(Explicit const &e)
{
  if (e.t.empty()) { return 0.0; }
  double const K = double(e.t.size());
  double const last = std::abs(e.t.back());
  return last > 0 ? std::pow(last, 1.0 / K) : 0.0;
}

void validate(MomentData const &d)
{
  if (!(d.t0 > 0)) { throw Error(ErrorCode::InvalidInput, "t0 must be positive"); }
  if (d.geometric()) {
    auto const &g = d.geo();
    if (!(g.beta >= 0)) { throw Error(ErrorCode::InvalidInput, "beta must be nonnegative"); }
    if (std::abs(g.a) == 0) { throw Error(ErrorCode::InvalidInput, "a must be nonzero"); }
  }
}

} // namespace

Potential::Potential(MomentData d)
  : data(std::move(d))
  , eval_radius(std::numeric_limits<double>::infinity())
{
  validate(data);
  if (!data.geometric()) {
    auto const &e = std::get<Explicit>(data.kind);
    double const q = decay_rate(e);
    if (e.truncated && q > 0) { eval_radius = 1.0 / q; }
  }
}

Potential geometric_potential(double beta, Cx a, double t0)
{
  return Potential(MomentData{t0, Geometric{beta, a}});
}

double tail_bound(Explicit const &e, double absz)
{
  if (!e.truncated) { return 0.0; }
  double const q = decay_rate(e);
  if (q == 0) { return 0.0; }
  double const x = q * absz;
  if (x >= 1) { return std::numeric_limits<double>::infinity(); }
  return std::pow(x, double(e.t.size() + 1)) / (1 - x);
}

namespace {

void check_domain(Potential const &p, Cx z)
{
  if (p.data.geometric()) {
    auto const &g = p.data.geo();
    if (g.beta > 0 && z == g.a) { throw Error(ErrorCode::SingularPoint, "z equals a"); }
    return;
  }
  auto const &e = std::get<Explicit>(p.data.kind);
  if (tail_bound(e, std::abs(z)) > 1e-12) {
    throw Error(ErrorCode::EvalOutsideDomain, "truncated moment series tail exceeds 1e-12");
  }
}

Cx horner(std::vector<Cx> const &t, Cx z)
{
  Cx acc = 0;
  for (auto it = t.rbegin(); it != t.rend(); ++it) { acc = (acc + *it) * z; }
  return acc;
}

} // namespace

Cx eval_V(Potential const &p, Cx z)
{
  check_domain(p, z);
  if (p.data.geometric()) {
    auto const &g = p.data.geo();
    if (g.beta == 0) { return 0.0; }
    return g.beta * std::log(1.0 - z / g.a);
  }
  return horner(std::get<Explicit>(p.data.kind).t, z);
}

Cx eval_dV(Potential const &p, Cx z)
{
  check_domain(p, z);
  if (p.data.geometric()) {
    auto const &g = p.data.geo();
    return g.beta / (z - g.a);
  }
  auto const &t = std::get<Explicit>(p.data.kind).t;
  Cx acc = 0;
  for (std::size_t k = t.size(); k >= 1; --k) { acc = acc * z + double(k) * t[k - 1]; }
  return acc;
}

double eval_W(Potential const &p, Cx z)
{
  if (p.data.geometric()) {
    auto const &g = p.data.geo();
    if (g.beta == 0) { return std::norm(z); }
    double const m = std::abs(1.0 - z / g.a);
    if (m == 0) { return std::numeric_limits<double>::infinity(); }
    return std::norm(z) - 2 * g.beta * std::log(m);
  }
  return std::norm(z) - 2 * eval_V(p, z).real();
}

template <typename Real> Real log_weight(Potential const &p, Real N, Complex<Real> const &z)
{
  using std::log;
  using std::norm;
  Real const r2 = z.real() * z.real() + z.imag() * z.imag();
  if (p.data.geometric()) {
    auto const &g = p.data.geo();
    if (g.beta == 0) { return -N * r2; }
    Complex<Real> const w = Real(1) - z / to_cx<Real>(g.a);
    Real const m2 = w.real() * w.real() + w.imag() * w.imag();
    if (m2 == 0) { return -std::numeric_limits<Real>::infinity(); }
    return -N * r2 + N * Real(g.beta) * log(m2);
  }
  check_domain(p, to_double<Real>(z));
  auto const &t = std::get<Explicit>(p.data.kind).t;
  Complex<Real> acc(0);
  for (auto it = t.rbegin(); it != t.rend(); ++it) { acc = (acc + to_cx<Real>(*it)) * z; }
  return -N * r2 + 2 * N * acc.real();
}

template double log_weight<double>(Potential const &, double, Cx const &);
template Quad log_weight<Quad>(Potential const &, Quad, CxQuad const &);

bool check_confinement(Potential const &p, double N, int n_max)
{
  if (p.data.geometric()) { return true; }
  if (!(N > 0)) { throw Error(ErrorCode::InvalidInput, "N must be positive"); }
  auto const &e = std::get<Explicit>(p.data.kind);
  double const rmax = e.truncated ? 0.999 * p.eval_radius : 1e3;
  double const c = double(n_max) / N;
  int const angles = 64 + 8 * int(e.t.size());
  double const radii[] = {rmax / 100, rmax / 10, rmax};
  for (int j = 0; j < angles; ++j) {
    Cx const dir = std::polar(1.0, 2 * M_PI * (j + 0.5) / angles);
    double prev = -std::numeric_limits<double>::infinity();
    for (double R : radii) {
      double h;
      try {
        h = eval_W(p, R * dir) - c * std::log(R * R);
      } catch (Error const &) {
        return false;
      }
      if (!(h > prev)) { return false; }
      prev = h;
    }
    if (!(prev > 0)) { return false; }
  }
  return true;
}

} // namespace lgop
