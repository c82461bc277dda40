#include "lgop/spectral.hpp"
#include "lgop/geometry.hpp"
#include "lgop/poly.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <thread>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

namespace lgop {

Cx RationalFn::operator()(Cx z) const { return poly::eval(num, z) / poly::eval(den, z); }

std::pair<Cx, Cx> branch_points(RationalMap const &m)
{
  Cx const c = m.v / m.A + m.A * m.r;
  Cx const s = 2.0 * std::sqrt(m.r * m.v);
  Cx p = c + s, q = c - s;
  auto const less = [](Cx x, Cx y) { return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag()); };
  if (less(q, p)) { std::swap(p, q); }
  return {p, q};
}

AlgebraicCurve build_curve(RationalMap const &m, Potential const &p)
{
  using Q = CxQuad;
  using namespace poly;
  if (!p.data.geometric()) { throw Error(ErrorCode::InvalidInput, "curve needs a geometric potential"); }
  if (std::abs(m.v) <= 1e-14 * m.r || std::abs(m.A) == 0) {
    throw Error(ErrorCode::DegenerateElimination, "v = 0: the Cauchy transform is rational of degree 1");
  }
  auto const q = [](Cx x) { return to_cx<Quad>(x); };
  Q const r = q(m.r), u = q(m.u), v = q(m.v), A = q(m.A);
  Q const ub = q(std::conj(m.u)), vb = q(std::conj(m.v)), Ab = q(std::conj(m.A));

  // P1(zeta) = a0 zeta^2 + b0 zeta + c0 in z; P2(zeta) = a1 zeta^2 + b1 zeta + c1 in S
  Bivariate<Q> const a0{{r}}, b0{{u - r * A, Q(-1)}}, c0{{v - u * A, A}};
  Bivariate<Q> const a1{{vb - ub * Ab}, {Ab}}, b1{{ub - r * Ab}, {Q(-1)}}, c1{{r}};
  auto const t1 = bsub(bmul(a0, c1), bmul(c0, a1));
  auto const t2 = bsub(bmul(a0, b1), bmul(b0, a1));
  auto const t3 = bsub(bmul(b0, c1), bmul(c0, b1));
  auto R = bsub(bmul(t1, t1), bmul(t2, t3));
  R.resize(3);

  // S = y + beta/(z - a)
  auto const &g = p.data.geo();
  std::vector<Q> const Pd{q(-g.a), Q(1)}, Pn{q(g.beta)};
  auto An = R[2];
  auto Bn = add(mul(R[1], Pd), scale(mul(R[2], Pn), Q(2)));
  auto Cn = add(add(mul(R[0], mul(Pd, Pd)), mul(R[1], mul(Pn, Pd))), mul(R[2], mul(Pn, Pn)));

  Quad big = 0;
  for (auto const *vec : {&An, &Bn, &Cn}) {
    for (auto const &x : *vec) { big = std::max(big, Quad(abs(x))); }
  }
  Quad const tol = big * Quad(1e-28);
  An = trim(An, tol);
  Bn = trim(Bn, tol);
  Cn = trim(Cn, tol);
  if (An.empty()) { throw Error(ErrorCode::DegenerateElimination, "resultant vanishes identically"); }
  Q const lead = An.back();
  auto const out = [&](std::vector<Q> const &x) {
    std::vector<Cx> y;
    for (auto const &c : x) { y.push_back(to_double<Quad>(c / lead)); }
    return y;
  };
  auto const [z1, z2] = branch_points(m);
  AlgebraicCurve c{{out(An), {1.0}}, {out(Bn), {-g.a, 1.0}}, {out(Cn), {g.a * g.a, -2.0 * g.a, 1.0}}, m, p, z1, z2};
  return c;
}

RationalFn discriminant(AlgebraicCurve const &c)
{
  using namespace poly;
  // common denominator den_B^2 den_A den_C
  auto const num = sub(mul(mul(c.B.num, c.B.num), mul(c.A.den, c.C.den)),
                       scale(mul(mul(c.A.num, c.C.num), mul(c.B.den, c.B.den)), Cx(4)));
  auto const den = mul(mul(c.B.den, c.B.den), mul(c.A.den, c.C.den));
  return {num, den};
}

double relative_value(std::vector<Cx> const &p, Cx z)
{
  double s = 0;
  double const az = std::abs(z);
  for (std::size_t k = p.size(); k-- > 0;) { s = s * az + std::abs(p[k]); }
  return s > 0 ? std::abs(poly::eval(p, z)) / s : 0.0;
}

std::pair<Cx, Cx> curve_roots(AlgebraicCurve const &c, Cx z)
{
  Cx const A = c.A(z), B = c.B(z), C = c.C(z);
  Cx const sq = std::sqrt(B * B - 4.0 * A * C);
  Cx const q = -0.5 * (B + ((B * std::conj(sq)).real() >= 0 ? sq : -sq));
  return {q / A, C / q};
}

Cx exterior_branch(AlgebraicCurve const &c, Cx z)
{
  auto const [y1, y2] = curve_roots(c, z);
  return std::abs(y1) < std::abs(y2) ? y1 : y2;
}

double curve_residual(AlgebraicCurve const &c, Cx z, Cx y)
{
  Cx const A = c.A(z), B = c.B(z), C = c.C(z);
  double const s = std::abs(A) * std::norm(y) + std::abs(B * y) + std::abs(C);
  return std::abs(A * y * y + B * y + C) / s;
}

namespace {

Cx raw_jump(AlgebraicCurve const &c, Cx z)
{
  Cx const A = c.A(z), B = c.B(z), C = c.C(z);
  Cx const D = B * B - 4.0 * A * C;
  double const scale = std::norm(B) + 4 * std::abs(A * C);
  if (z == c.z1 || z == c.z2 || std::abs(D) <= 1e-24 * scale) { throw Error(ErrorCode::BranchPointHit, "jump evaluated at a branch point"); }
  return std::sqrt(D) / A;
}

} // namespace

BranchToken reference_token(AlgebraicCurve const &c)
{
  return BranchToken{true, raw_jump(c, 0.5 * (c.z1 + c.z2))};
}

Cx branch_jump(AlgebraicCurve const &c, Cx z, BranchToken &token)
{
  Cx J = raw_jump(c, z);
  if (token.set && std::abs(-J - token.last) < std::abs(J - token.last)) { J = -J; }
  token.set = true;
  token.last = J;
  return J;
}

namespace {

struct KronrodRule
{
  std::vector<double> x, wk, wg; // on [-1, 1], ascending; wg = 0 off the Gauss nodes
};

KronrodRule const &kronrod()
{
  static KronrodRule const rule = [] {
    auto const &ka = boost::math::quadrature::gauss_kronrod<double, 15>::abscissa();
    auto const &kw = boost::math::quadrature::gauss_kronrod<double, 15>::weights();
    auto const &ga = boost::math::quadrature::gauss<double, 7>::abscissa();
    auto const &gw = boost::math::quadrature::gauss<double, 7>::weights();
    std::vector<std::pair<double, std::pair<double, double>>> nodes;
    for (std::size_t i = 0; i < ka.size(); ++i) {
      double g = 0;
      for (std::size_t j = 0; j < ga.size(); ++j) {
        if (std::abs(ga[j] - ka[i]) < 1e-14) { g = gw[j]; }
      }
      nodes.push_back({ka[i], {kw[i], g}});
      if (ka[i] != 0) { nodes.push_back({-ka[i], {kw[i], g}}); }
    }
    std::sort(nodes.begin(), nodes.end());
    KronrodRule r;
    for (auto const &n : nodes) {
      r.x.push_back(n.first);
      r.wk.push_back(n.second.first);
      r.wg.push_back(n.second.second);
    }
    return r;
  }();
  return rule;
}

// integral over t in [a, b] of J(w(t)) w'(t), evaluated in increasing t so the branch token carries over
Cx integrate_leg(AlgebraicCurve const &c, std::function<Cx(double)> const &w, std::function<Cx(double)> const &dw,
                 double a, double b, BranchToken &token, double tol, int depth)
{
  auto const &R = kronrod();
  double const h = (b - a) / 2, mid = (a + b) / 2;
  BranchToken tk = token;
  Cx K = 0, G = 0;
  for (std::size_t i = 0; i < R.x.size(); ++i) {
    double const t = mid + h * R.x[i];
    Cx const f = branch_jump(c, w(t), tk) * dw(t);
    K += R.wk[i] * f;
    G += R.wg[i] * f;
  }
  K *= h;
  G *= h;
  if (std::abs(K - G) <= tol || depth > 40) {
    try {
      branch_jump(c, w(b), tk);
    } catch (Error const &e) {
      if (e.code() != ErrorCode::BranchPointHit) { throw; }
    }
    token = tk;
    return K;
  }
  Cx const left = integrate_leg(c, w, dw, a, mid, token, tol / 2, depth + 1);
  return left + integrate_leg(c, w, dw, mid, b, token, tol / 2, depth + 1);
}

void check_cut(AlgebraicCurve const &c, Cx from, Cx to)
{
  double const L = std::abs(c.z2 - c.z1);
  for (Cx zb : {c.z1, c.z2}) {
    if (std::abs(to - zb) <= 1e-12 * L) { continue; }
    if (point_segment_distance(zb, from, to) <= 1e-12 * L) {
      throw Error(ErrorCode::PathCrossesCut, "integration path passes through a branch point");
    }
  }
}

} // namespace

double phi_via(AlgebraicCurve const &c, std::vector<Cx> const &waypoints, Cx z)
{
  double const L = std::abs(c.z2 - c.z1);
  if (std::abs(z - c.z1) <= 1e-14 * L) { return 0.0; }
  Cx const m = 0.5 * (c.z1 + c.z2);
  double const tol = 1e-13 * L;
  Cx total = 0;

  // z1 -> m, integrated backwards from m with w = z1 + (m - z1)(1 - t)^2
  {
    BranchToken tk = reference_token(c);
    Cx const d = m - c.z1;
    auto w = [&](double t) { return c.z1 + d * (1 - t) * (1 - t); };
    auto dw = [&](double t) { return -2.0 * d * (1 - t); };
    total -= integrate_leg(c, w, dw, 0.0, 1.0, tk, tol, 0);
  }
  BranchToken tk = reference_token(c);
  std::vector<Cx> path{m};
  path.insert(path.end(), waypoints.begin(), waypoints.end());
  path.push_back(z);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    Cx const a = path[i], b = path[i + 1];
    if (a == b) { continue; }
    check_cut(c, a, b);
    bool const ends_at_branch = std::abs(b - c.z1) <= 1e-12 * L || std::abs(b - c.z2) <= 1e-12 * L;
    if (ends_at_branch) {
      // square-root endpoint: w = b + (a - b)(1 - t)^2
      auto w = [&](double t) { return b + (a - b) * (1 - t) * (1 - t); };
      auto dw = [&](double t) { return -2.0 * (a - b) * (1 - t); };
      Cx const s = integrate_leg(c, w, dw, 0.0, 1.0, tk, tol, 0);
      total += s;
    } else {
      auto w = [&](double t) { return a + (b - a) * t; };
      auto dw = [&](double) { return b - a; };
      total += integrate_leg(c, w, dw, 0.0, 1.0, tk, tol, 0);
    }
  }
  return total.real();
}

double phi(AlgebraicCurve const &c, Cx z) { return phi_via(c, {}, z); }

std::pair<Cx, Cx> preimages(RationalMap const &m, Cx z)
{
  Cx const a2 = m.r;
  Cx const b = m.u - z - m.r * m.A;
  Cx const c = z * m.A - m.u * m.A + m.v;
  Cx const sq = std::sqrt(b * b - 4.0 * a2 * c);
  Cx const q = -0.5 * (b + ((b * std::conj(sq)).real() >= 0 ? sq : -sq));
  if (q == Cx(0)) { return {0.0, 0.0}; }
  return {q / a2, c / q};
}

Cx schwarz_on_sheet(RationalMap const &m, Cx zeta)
{
  return m.r / zeta + std::conj(m.u) + std::conj(m.v) * zeta / (1.0 - std::conj(m.A) * zeta);
}

namespace {

struct Residues
{
  Cx d, c0, c1, c2, c3, zeta0;
};

// F' = conj-f(1/zeta) f'(zeta); F = d f + c0 log zeta + c1 log(zeta - zeta0) + c2 log(zeta - A) + c3/(zeta - A)
Residues residues(RationalMap const &m)
{
  Cx const Ab = std::conj(m.A);
  Cx const zeta0 = 1.0 / Ab;
  Cx const kappa = -std::conj(m.v) / (Ab * Ab);
  Cx const d = std::conj(m.u) - std::conj(m.v) / Ab;
  Cx const r = m.r, v = m.v, A = m.A;
  Cx const alpha2 = 1.0 / ((zeta0 - A) * (zeta0 - A));
  Cx const gamma2 = 1.0 / (A - zeta0);
  return {d,
          r * r - r * v / (A * A),
          r * kappa - v * kappa * alpha2,
          r * v / (A * A) + v * kappa * alpha2,
          r * v / A + v * kappa * gamma2,
          zeta0};
}

double re_clog(Cx c, Cx w) { return c.real() * std::log(std::abs(w)) - c.imag() * std::arg(w); }

} // namespace

Cx antiderivative(RationalMap const &m, Cx zeta)
{
  auto const R = residues(m);
  return R.d * map_forward(m, zeta) + R.c0 * std::log(zeta) + R.c1 * std::log(zeta - R.zeta0) +
         R.c2 * std::log(zeta - m.A) + R.c3 / (zeta - m.A);
}

double antiderivative_re(RationalMap const &m, Cx zeta)
{
  auto const R = residues(m);
  return (R.d * map_forward(m, zeta)).real() + re_clog(R.c0, zeta) + re_clog(R.c1, zeta - R.zeta0) +
         re_clog(R.c2, zeta - m.A) + (R.c3 / (zeta - m.A)).real();
}

namespace {

bool swapped(std::pair<Cx, Cx> const &ref, std::pair<Cx, Cx> const &p)
{
  double const same = std::abs(ref.first - p.first) + std::abs(ref.second - p.second);
  double const swap = std::abs(ref.first - p.second) + std::abs(ref.second - p.first);
  return swap < same;
}

std::pair<Cx, Cx> matched(std::pair<Cx, Cx> const &ref, std::pair<Cx, Cx> p)
{
  if (swapped(ref, p)) { std::swap(p.first, p.second); }
  return p;
}

double phi_pair(RationalMap const &m, std::pair<Cx, Cx> const &p)
{
  return antiderivative_re(m, p.first) - antiderivative_re(m, p.second);
}

} // namespace

double phi_closed(AlgebraicCurve const &c, Cx z)
{
  double const L = std::abs(c.z2 - c.z1);
  if (std::abs(z - c.z1) <= 1e-14 * L || std::abs(z - c.z2) <= 1e-14 * L) { return 0.0; }
  Cx const m = 0.5 * (c.z1 + c.z2);
  check_cut(c, m, z);
  // carry the reference jump and the preimage labels along m -> z together
  BranchToken tk = reference_token(c);
  auto pre = preimages(c.map, m);
  Cx const J0 = schwarz_on_sheet(c.map, pre.first) - schwarz_on_sheet(c.map, pre.second);
  if (std::abs(J0 + tk.last) < std::abs(J0 - tk.last)) { std::swap(pre.first, pre.second); }
  int const steps = 256;
  for (int s = 1; s <= steps; ++s) {
    Cx const w = m + (z - m) * (double(s) / steps);
    pre = matched(pre, preimages(c.map, w));
  }
  return phi_pair(c.map, pre);
}

// ---------------------------------------------------------------- tracing

namespace {

struct NodeData
{
  Cx z;
  std::pair<Cx, Cx> pre;
  double F0, F1;
  bool ok;
};

struct Level
{
  int G;
  Cx origin;
  double hx, hy;
  std::vector<NodeData> nodes;
  NodeData const &at(int i, int j) const { return nodes[std::size_t(j) * (G + 1) + i]; }
};

NodeData node_at(RationalMap const &m, Cx z)
{
  NodeData n;
  n.z = z;
  n.pre = preimages(m, z);
  n.F0 = antiderivative_re(m, n.pre.first);
  n.F1 = antiderivative_re(m, n.pre.second);
  n.ok = std::isfinite(n.F0) && std::isfinite(n.F1);
  return n;
}

// Phi of node q with labels matched to reference pair
double phi_matched(NodeData const &q, std::pair<Cx, Cx> const &ref)
{
  return swapped(ref, q.pre) ? q.F1 - q.F0 : q.F0 - q.F1;
}

Cx polish_on_segment(RationalMap const &m, Cx p, Cx q, std::pair<Cx, Cx> const &ref, double fp, double fq)
{
  auto f = [&](double t) {
    auto const pre = matched(ref, preimages(m, p + (q - p) * t));
    return phi_pair(m, pre);
  };
  boost::uintmax_t iters = 100;
  auto const tol = boost::math::tools::eps_tolerance<double>(48);
  auto const br = boost::math::tools::toms748_solve(f, 0.0, 1.0, fp, fq, tol, iters);
  return p + (q - p) * (0.5 * (br.first + br.second));
}

struct Chain
{
  std::vector<Cx> pts;
  std::vector<std::pair<Cx, Cx>> labels;
};

double jump_abs(RationalMap const &m, Cx z)
{
  auto const pre = preimages(m, z);
  return std::abs(schwarz_on_sheet(m, pre.first) - schwarz_on_sheet(m, pre.second));
}

double raw_mass(RationalMap const &m, std::vector<Cx> const &pts)
{
  // rho ~ sqrt(s) next to the branch points, so end segments use 2/3 h rho(h)
  std::size_t const n = pts.size();
  if (n < 2) { return 0.0; }
  std::vector<double> rho(n);
  for (std::size_t i = 1; i + 1 < n; ++i) { rho[i] = jump_abs(m, pts[i]) / (2 * M_PI); }
  rho[0] = rho[n - 1] = 0;
  if (n == 2) { return 0.0; }
  double s = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double const h = std::abs(pts[i + 1] - pts[i]);
    if (i == 0) {
      s += 2.0 / 3.0 * h * rho[1];
    } else if (i + 2 == n) {
      s += 2.0 / 3.0 * h * rho[i];
    } else {
      s += 0.5 * h * (rho[i] + rho[i + 1]);
    }
  }
  return s;
}

struct TraceResult
{
  std::vector<Component> comps;
  int chosen = -1;
  double deviation = 0;
};

TraceResult trace_level(AlgebraicCurve const &c, std::vector<Cx> const &droplet, int G, int threads, double t0)
{
  RationalMap const &m = c.map;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (auto const &p : droplet) {
    xmin = std::min(xmin, p.real());
    xmax = std::max(xmax, p.real());
    ymin = std::min(ymin, p.imag());
    ymax = std::max(ymax, p.imag());
  }
  double const diam = std::hypot(xmax - xmin, ymax - ymin);
  double const pad = 0.02 * diam;
  // small irrational offset keeps branch points and poles off grid lines
  Level lv;
  lv.G = G;
  lv.origin = Cx(xmin - pad + 1.234567e-7 * diam, ymin - pad + 7.654321e-8 * diam);
  lv.hx = (xmax - xmin + 2 * pad) / G;
  lv.hy = (ymax - ymin + 2 * pad) / G;
  lv.nodes.resize(std::size_t(G + 1) * (G + 1));
  int const T = std::max(1, threads);
  std::vector<std::thread> pool;
  for (int t = 0; t < T; ++t) {
    pool.emplace_back([&, t] {
      for (int j = t; j <= G; j += T) {
        for (int i = 0; i <= G; ++i) {
          lv.nodes[std::size_t(j) * (G + 1) + i] = node_at(m, lv.origin + Cx(i * lv.hx, j * lv.hy));
        }
      }
    });
  }
  for (auto &th : pool) { th.join(); }

  double const diag = std::hypot(lv.hx, lv.hy);
  double const exclude = 1.5 * diag;
  double const attach = exclude + 1.5 * diag;

  auto hid = [&](int i, int j) { return 2 * (long(j) * (G + 1) + i); };
  auto vid = [&](int i, int j) { return 2 * (long(j) * (G + 1) + i) + 1; };

  std::map<long, Cx> vertex;
  std::map<long, std::pair<Cx, Cx>> vlabel;
  auto edge_vertex = [&](long id, NodeData const &p, NodeData const &q) -> bool {
    if (vertex.count(id)) { return true; }
    if (!p.ok || !q.ok) { return false; }
    double const fp = p.F0 - p.F1;
    double const fq = phi_matched(q, p.pre);
    if (!(fp * fq < 0)) { return false; }
    Cx const z = polish_on_segment(m, p.z, q.z, p.pre, fp, fq);
    vertex[id] = z;
    vlabel[id] = matched(p.pre, preimages(m, z));
    return true;
  };

  std::map<long, std::vector<long>> adj;
  for (int j = 0; j < G; ++j) {
    for (int i = 0; i < G; ++i) {
      Cx const center = lv.origin + Cx((i + 0.5) * lv.hx, (j + 0.5) * lv.hy);
      if (std::abs(center - c.z1) < exclude || std::abs(center - c.z2) < exclude) { continue; }
      NodeData const *k[4] = {&lv.at(i, j), &lv.at(i + 1, j), &lv.at(i + 1, j + 1), &lv.at(i, j + 1)};
      if (!(k[0]->ok && k[1]->ok && k[2]->ok && k[3]->ok)) { continue; }
      double f[4];
      for (int s = 0; s < 4; ++s) { f[s] = phi_matched(*k[s], k[0]->pre); }
      long const e[4] = {hid(i, j), vid(i + 1, j), hid(i, j + 1), vid(i, j)};
      bool cellx[4], edgex[4];
      int count = 0;
      bool consistent = true;
      for (int s = 0; s < 4; ++s) {
        cellx[s] = f[s] * f[(s + 1) % 4] < 0;
        NodeData const &p = *k[s], &q = *k[(s + 1) % 4];
        NodeData const &lo = (s < 2) ? p : q;
        NodeData const &hi = (s < 2) ? q : p;
        edgex[s] = edge_vertex(e[s], lo, hi);
        if (edgex[s] != cellx[s]) { consistent = false; }
        count += cellx[s];
      }
      if (!consistent || count == 0) { continue; }
      auto link = [&](int a, int b) {
        adj[e[a]].push_back(e[b]);
        adj[e[b]].push_back(e[a]);
      };
      if (count == 2) {
        int a = -1, b = -1;
        for (int s = 0; s < 4; ++s) {
          if (cellx[s]) { (a < 0 ? a : b) = s; }
        }
        link(a, b);
      } else if (count == 4) {
        NodeData const mid = node_at(m, center);
        double const fc = phi_matched(mid, k[0]->pre);
        if ((fc > 0) == (f[0] > 0)) {
          link(0, 1);
          link(2, 3);
        } else {
          link(3, 0);
          link(1, 2);
        }
      }
    }
  }

  // chains
  std::map<long, bool> used;
  std::vector<std::vector<long>> chains;
  auto walk = [&](long start) {
    std::vector<long> ch{start};
    used[start] = true;
    long cur = start, prev = -1;
    while (true) {
      long next = -1;
      for (long nb : adj[cur]) {
        if (nb != prev && !used[nb]) {
          next = nb;
          break;
        }
      }
      if (next < 0) { break; }
      used[next] = true;
      ch.push_back(next);
      prev = cur;
      cur = next;
    }
    return ch;
  };
  for (auto const &[id, nb] : adj) {
    if (nb.size() == 1 && !used[id]) { chains.push_back(walk(id)); }
  }
  for (auto const &[id, nb] : adj) {
    if (!used[id]) { chains.push_back(walk(id)); }
  }

  TraceResult res;
  double best = std::numeric_limits<double>::infinity();
  for (auto const &ch : chains) {
    Component comp;
    for (long id : ch) { comp.points.push_back(vertex[id]); }
    Cx const a = comp.points.front(), b = comp.points.back();
    bool const a1 = std::abs(a - c.z1) < attach, a2 = std::abs(a - c.z2) < attach;
    bool const b1 = std::abs(b - c.z1) < attach, b2 = std::abs(b - c.z2) < attach;
    if ((b1 && a2) && !(a1 && b2)) { std::reverse(comp.points.begin(), comp.points.end()); }
    Cx const s = comp.points.front(), e = comp.points.back();
    comp.from_z1 = std::abs(s - c.z1) < attach;
    comp.to_z2 = std::abs(e - c.z2) < attach;
    if (comp.from_z1 && comp.to_z2 && comp.points.size() >= 2) {
      comp.points.insert(comp.points.begin(), c.z1);
      comp.points.push_back(c.z2);
      comp.interior = true;
      for (std::size_t i = 1; i + 1 < comp.points.size(); ++i) {
        if (!point_in_polygon(droplet, comp.points[i])) {
          comp.interior = false;
          break;
        }
      }
      comp.raw_mass = raw_mass(m, comp.points);
      if (comp.interior && std::abs(comp.raw_mass - t0) < best) {
        best = std::abs(comp.raw_mass - t0);
        res.chosen = int(res.comps.size());
      }
    }
    res.comps.push_back(std::move(comp));
  }

  // chord deviation of the chosen component
  if (res.chosen >= 0) {
    auto const &pts = res.comps[res.chosen].points;
    double const h = std::min(lv.hx, lv.hy);
    for (std::size_t i = 1; i + 2 < pts.size(); ++i) {
      Cx const a = pts[i], b = pts[i + 1];
      Cx const mid = 0.5 * (a + b);
      Cx const d = b - a;
      if (std::abs(d) == 0) { continue; }
      Cx const nrm = Cx(-d.imag(), d.real()) / std::abs(d);
      auto const ref = preimages(m, mid);
      auto f = [&](double t) { return phi_pair(m, matched(ref, preimages(m, mid + t * nrm))); };
      double const fl = f(-h), fr = f(h);
      if (!(fl * fr < 0)) {
        res.deviation = std::max(res.deviation, h);
        continue;
      }
      boost::uintmax_t iters = 100;
      auto const br = boost::math::tools::toms748_solve(f, -h, h, fl, fr, boost::math::tools::eps_tolerance<double>(40), iters);
      res.deviation = std::max(res.deviation, std::abs(0.5 * (br.first + br.second)));
    }
    res.deviation /= diam;
  }
  return res;
}

} // namespace

Trajectory trace_trajectory(AlgebraicCurve const &c, std::vector<Cx> const &droplet, TraceOptions const &opt)
{
  if (std::abs(c.z1 - c.z2) == 0) { throw Error(ErrorCode::InvalidInput, "branch points coincide"); }
  if (droplet.size() < 3) { throw Error(ErrorCode::InvalidInput, "droplet polygon needs at least 3 points"); }
  double const t0 = c.potential.data.t0;
  int G = opt.resolution;
  TraceResult res;
  for (int level = 0; level <= opt.max_levels; ++level, G *= 2) {
    res = trace_level(c, droplet, G, opt.threads, t0);
    if (res.chosen < 0) { continue; }
    if (res.deviation <= opt.vertex_tol) { break; }
  }
  if (res.chosen < 0) {
    std::string msg = "no Phi = 0 component joins z1 and z2 inside the droplet; components:";
    for (auto const &cp : res.comps) {
      msg += " [" + std::to_string(cp.points.size()) + " pts, z1:" + std::to_string(cp.from_z1) +
             " z2:" + std::to_string(cp.to_z2) + " interior:" + std::to_string(cp.interior) + "]";
    }
    throw Error(ErrorCode::NoInteriorComponent, msg);
  }
  Trajectory t;
  auto const &comp = res.comps[res.chosen];
  t.points = comp.points;
  t.raw_mass = comp.raw_mass;
  t.mass = t0;
  t.resolution = G;
  t.chord_deviation = res.deviation;
  t.components = res.comps;
  std::size_t const n = t.points.size();
  t.arc_length.assign(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) { t.arc_length[i] = t.arc_length[i - 1] + std::abs(t.points[i] - t.points[i - 1]); }
  double const norm = t0 / comp.raw_mass;
  t.rho_s.assign(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) { t.rho_s[i] = norm * jump_abs(c.map, t.points[i]) / (2 * M_PI); }

  // J dz / (2 pi i) should keep one sign along the arc
  int pos = 0, neg = 0;
  BranchToken tk = reference_token(c);
  std::size_t const start = n / 2;
  auto visit = [&](std::size_t i, std::size_t j) {
    Cx const w = 0.5 * (t.points[i] + t.points[j]);
    Cx const J = branch_jump(c, w, tk);
    double const v = (J * (t.points[j] - t.points[i]) / Cx(0, 2 * M_PI)).real();
    (v > 0 ? pos : neg) += 1;
  };
  try {
    for (std::size_t i = start; i + 2 < n; ++i) { visit(i, i + 1); }
    tk = reference_token(c);
    for (std::size_t i = start; i-- > 1;) { visit(i, i + 1); }
  } catch (Error const &) {
  }
  t.rho_positive = pos == 0 || neg == 0;
  return t;
}

double trajectory_log_potential(Trajectory const &t, Cx z)
{
  double s = 0;
  for (std::size_t i = 0; i + 1 < t.points.size(); ++i) {
    double const h = std::abs(t.points[i + 1] - t.points[i]);
    s += 0.5 * h *
         (t.rho_s[i] * std::log(std::norm(z - t.points[i])) + t.rho_s[i + 1] * std::log(std::norm(z - t.points[i + 1])));
  }
  // end segments carry the sqrt profile: integral of rho over [0, h] is 2/3 h rho(h)
  std::size_t const n = t.points.size();
  if (n >= 3) {
    for (auto [e, i] : {std::pair<std::size_t, std::size_t>{0, 1}, {n - 1, n - 2}}) {
      double const h = std::abs(t.points[i] - t.points[e]);
      Cx const mid = 0.5 * (t.points[i] + t.points[e]);
      s -= 0.5 * h * t.rho_s[i] * std::log(std::norm(z - t.points[i]));
      s += 2.0 / 3.0 * h * t.rho_s[i] * std::log(std::norm(z - mid));
    }
  }
  return s;
}

namespace {

struct Profile
{
  std::vector<double> log_rho, log_fp;
};

Profile profile(AnyBasis const &b, int k, RationalMap const &m, int M)
{
  if (M < 128) { throw Error(ErrorCode::InvalidInput, "need M >= 128"); }
  Profile p;
  for (int j = 0; j < M; ++j) {
    Cx const zeta = std::polar(1.0, 2 * M_PI * j / M);
    double const d = std::abs(map_derivative(m, zeta));
    if (d <= 1e-12 * m.r) { throw Error(ErrorCode::CuspSingular, "f' vanishes on the boundary"); }
    p.log_fp.push_back(std::log(d));
    p.log_rho.push_back(log_density(b, k, map_forward(m, zeta)));
  }
  return p;
}

} // namespace

KLResult kl_divergence(AnyBasis const &b, int k, RationalMap const &m, int M)
{
  auto const p = profile(b, k, m, M);
  double raw = 0;
  double mx = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < M; ++j) {
    raw += -p.log_fp[j] - p.log_rho[j];
    mx = std::max(mx, p.log_rho[j] + p.log_fp[j]);
  }
  raw /= M;
  double se = 0;
  for (int j = 0; j < M; ++j) { se += std::exp(p.log_rho[j] + p.log_fp[j] - mx); }
  double const lmean = mx + std::log(se / M);
  return {raw, raw + lmean};
}

double profile_sup_error(AnyBasis const &b, int k, RationalMap const &m, int M)
{
  auto const p = profile(b, k, m, M);
  std::vector<double> e(M);
  double mean = 0;
  for (int j = 0; j < M; ++j) {
    e[j] = p.log_rho[j] + p.log_fp[j];
    mean += e[j];
  }
  mean /= M;
  double sup = 0;
  for (double x : e) { sup = std::max(sup, std::abs(x - mean)); }
  return sup;
}

Distance zero_trajectory_distance(std::vector<Cx> const &zeros, std::vector<Cx> const &traj)
{
  if (zeros.empty() || traj.empty()) { throw Error(ErrorCode::InvalidInput, "empty input"); }
  double L = std::abs(traj.back() - traj.front());
  if (L == 0) { L = 1; }
  double mx = 0, sum = 0;
  for (auto const &z : zeros) {
    double const d = point_polyline_distance(z, traj) / L;
    mx = std::max(mx, d);
    sum += d;
  }
  return {mx, sum / double(zeros.size())};
}

} // namespace lgop
