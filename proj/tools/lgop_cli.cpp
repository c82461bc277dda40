#include "lgop/conformal.hpp"
#include "lgop/evolve.hpp"
#include "lgop/geometry.hpp"
#include "lgop/io.hpp"
#include "lgop/moments.hpp"
#include "lgop/orthopoly.hpp"
#include "lgop/quadrature.hpp"
#include "lgop/spectral.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>

using namespace lgop;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Context
{
  RunConfig cfg;
  std::string out;
  int threads = 1;
  bool dump_grid = false;

  std::string path(std::string const &name) const { return (fs::path(out) / name).string(); }
  Potential potential() const { return Potential(cfg.moments); }
  Geometric const &geo() const
  {
    if (!cfg.moments.geometric()) { throw Error(ErrorCode::InvalidInput, "command needs geometric moments"); }
    return cfg.moments.geo();
  }
  double t0() const { return cfg.moments.t0; }
  GramOptions gram(int n) const
  {
    GramOptions o;
    o.N = cfg.N;
    o.grid.radial_scale = cfg.radial_scale;
    o.grid.angular_scale = cfg.angular_scale;
    o.grid.threads = threads;
    return o;
  }
  double N_for(int n) const { return cfg.N ? *cfg.N : (n > 0 ? n / t0() : 1 / t0()); }
};

std::string tag(int n) { return std::to_string(n); }

json regime_json(Regime const &r)
{
  return {{"tag", r.tag == Regime::SimplyConnected ? "SimplyConnected" : "DoublyConnected"}, {"R1", r.R1}, {"R2", r.R2}};
}

RationalMap solve(Context const &ctx)
{
  auto const &g = ctx.geo();
  return solve_params(g.beta, g.a, ctx.t0());
}

AnyBasis basis(Context const &ctx, int n)
{
  return build_basis(ctx.potential(), n, ctx.t0(), ctx.cfg.precision, ctx.gram(n));
}

char const *precision_name(AnyBasis const &b) { return extended(b) ? "extended" : "double"; }

void bbox(std::vector<Cx> const &pts, Cx &lo, Cx &hi)
{
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (auto const &z : pts) {
    x0 = std::min(x0, z.real());
    x1 = std::max(x1, z.real());
    y0 = std::min(y0, z.imag());
    y1 = std::max(y1, z.imag());
  }
  lo = {x0, y0};
  hi = {x1, y1};
}

json map_json(RationalMap const &m)
{
  return {{"r", m.r}, {"u", complex_json(m.u)}, {"v", complex_json(m.v)}, {"A", complex_json(m.A)}, {"univalent", m.univalent}};
}

void write_boundary(Context const &ctx, RationalMap const &m, std::string const &name)
{
  CsvWriter csv(ctx.path(name), {"theta", "re_z", "im_z", "measure"}, ctx.cfg.hash);
  int const M = ctx.cfg.boundary_points;
  for (int j = 0; j < M; ++j) {
    double const th = 2 * M_PI * j / M;
    Cx const zeta = std::polar(1.0, th);
    Cx const z = map_forward(m, zeta);
    double const d = std::abs(map_derivative(m, zeta));
    csv.row({th, z.real(), z.imag(), d > 0 ? 1 / d : std::numeric_limits<double>::infinity()});
  }
}

// ------------------------------------------------------------ solve-map

int cmd_solve_map(Context const &ctx)
{
  auto const &g = ctx.geo();
  Regime const reg = classify_regime(g.beta, g.a);
  json doc = {{"beta", g.beta}, {"a", complex_json(g.a)}, {"t0", ctx.t0()}, {"regime", regime_json(reg)}};
  if (g.beta > 0 && reg.tag == Regime::DoublyConnected) {
    doc["error"] = "RegimeViolation";
    write_json(ctx.path("map.json"), doc, ctx.cfg.hash);
    throw Error(ErrorCode::RegimeViolation, "parameters lie in the doubly connected regime");
  }
  RationalMap const m = solve(ctx);
  doc.update(map_json(m));
  MapParams const fp = forward_params(m);
  doc["forward"] = {{"beta", fp.beta}, {"a", complex_json(fp.a)}, {"t0", fp.t0}};
  auto const cp = critical_points(m);
  doc["critical_points"] = json::array({complex_json(cp.first), complex_json(cp.second)});
  doc["area"] = shoelace_area(boundary_polygon(m, 4096)) / M_PI;
  write_json(ctx.path("map.json"), doc, ctx.cfg.hash);
  write_boundary(ctx, m, "boundary.csv");
  return 0;
}

// ------------------------------------------------------------ density

json basis_json(AnyBasis const &b, Context const &ctx)
{
  json rows = json::array();
  std::visit(
    [&](auto const &x) {
      using Real = std::conditional_t<std::is_same_v<std::decay_t<decltype(x)>, OrthoBasis<double>>, double, Quad>;
      for (int k = 0; k <= x.n; ++k) {
        json row = json::array();
        for (int j = 0; j <= k; ++j) {
          row.push_back(json::array({to_double<Real>(x.C(k, j)).real(), to_double<Real>(x.C(k, j)).imag()}));
        }
        rows.push_back(row);
      }
    },
    b);
  json moments = {{"t0", ctx.t0()}};
  if (ctx.cfg.moments.geometric()) {
    moments["geometric"] = {{"beta", ctx.geo().beta}, {"a", complex_json(ctx.geo().a)}};
  } else {
    json ts = json::array();
    for (auto const &t : std::get<Explicit>(ctx.cfg.moments.kind).t) { ts.push_back(complex_json(t)); }
    moments["explicit"] = ts;
  }
  return {{"n", degree(b)},
          {"N", scale_N(b)},
          {"t0", ctx.t0()},
          {"precision", precision_name(b)},
          {"basis", "e_k(z) = z^k sqrt(N^(k+1)/(pi k!))"},
          {"moments", moments},
          {"coefficients", rows}};
}

void dump_grid(Context const &ctx, int n)
{
  auto const g = build_grid<double>(ctx.potential(), ctx.N_for(n), n, ctx.gram(n).grid);
  CsvWriter csv(ctx.path("grid_n" + tag(n) + ".csv"), {"re_z", "im_z", "weight", "log_weight"}, ctx.cfg.hash);
  for (std::size_t l = 0; l < g.radii.size(); ++l) {
    for (int k = 0; k < g.angular; ++k) {
      Cx const z = g.node(l, k);
      csv.row({z.real(), z.imag(), g.weight(l), g.log_weight[l * g.angular + k]});
    }
  }
}

int cmd_density(Context const &ctx)
{
  std::optional<RationalMap> m;
  std::vector<Cx> droplet;
  if (ctx.cfg.moments.geometric()) {
    m = solve(ctx);
    droplet = boundary_polygon(*m, ctx.cfg.boundary_points);
    write_boundary(ctx, *m, "boundary.csv");
  } else {
    double const R = 2 * std::sqrt(ctx.t0());
    droplet = {{-R, -R}, {R, -R}, {R, R}, {-R, R}};
  }
  Cx lo, hi;
  bbox(droplet, lo, hi);
  Cx const c = 0.5 * (lo + hi);
  double const half = 0.75 * std::max(hi.real() - lo.real(), hi.imag() - lo.imag());
  lo = c - Cx(half, half);
  hi = c + Cx(half, half);
  int const R = ctx.cfg.raster;
  double const h = 2 * half / R;

  json summary = {{"degrees", json::array()}};
  for (int n : ctx.cfg.degrees) {
    AnyBasis const b = basis(ctx, n);
    write_json(ctx.path("basis_n" + tag(n) + ".json"), basis_json(b, ctx), ctx.cfg.hash);
    if (ctx.dump_grid) { dump_grid(ctx, n); }

    std::vector<double> values(std::size_t(R) * R);
    double mass = 0;
    {
      CsvWriter csv(ctx.path("density_n" + tag(n) + ".csv"), {"re_z", "im_z", "rho"}, ctx.cfg.hash);
      for (int j = 0; j < R; ++j) {
        for (int i = 0; i < R; ++i) {
          Cx const z = lo + Cx((i + 0.5) * h, (j + 0.5) * h);
          double const rho = eval_density(b, n, z);
          values[std::size_t(j) * R + i] = rho;
          mass += rho * h * h;
          csv.row({z.real(), z.imag(), rho});
        }
      }
    }
    json entry = {{"n", n}, {"N", scale_N(b)}, {"precision", precision_name(b)}, {"raster_integral", mass}};
    if (m) {
      CsvWriter csv(ctx.path("profile_n" + tag(n) + ".csv"),
                    {"theta", "re_z", "im_z", "rho", "conformal_measure", "log_rho", "log_measure"}, ctx.cfg.hash);
      int const M = ctx.cfg.profile_points;
      for (int j = 0; j < M; ++j) {
        double const th = 2 * M_PI * j / M;
        Cx const zeta = std::polar(1.0, th);
        Cx const z = map_forward(*m, zeta);
        double const lr = log_density(b, n, z);
        double const lm = -std::log(std::abs(map_derivative(*m, zeta)));
        csv.row({th, z.real(), z.imag(), std::exp(lr), std::exp(lm), lr, lm});
      }
      entry["profile_sup_error"] = profile_sup_error(b, n, *m, M);
    }
    summary["degrees"].push_back(entry);
    if (ctx.cfg.svg) {
      std::vector<SvgLayer> layers{{droplet, "black", true, false}};
      write_svg(ctx.path("density_n" + tag(n) + ".svg"), lo, hi, R, R, values, layers, ctx.cfg.hash);
    }
  }
  write_json(ctx.path("density.json"), summary, ctx.cfg.hash);
  return 0;
}

// ------------------------------------------------------------ kl

int cmd_kl(Context const &ctx)
{
  RationalMap const m = solve(ctx);
  CsvWriter csv(ctx.path("kl.csv"), {"k", "N", "raw", "mean_adjusted", "profile_sup_error"}, ctx.cfg.hash);
  for (int k : ctx.cfg.degrees) {
    AnyBasis const b = basis(ctx, k);
    auto const kl = kl_divergence(b, k, m, ctx.cfg.profile_points);
    csv.row({double(k), scale_N(b), kl.raw, kl.mean_adjusted, profile_sup_error(b, k, m, ctx.cfg.profile_points)});
  }
  return 0;
}

// ------------------------------------------------------------ zeros

int cmd_zeros(Context const &ctx)
{
  for (int k : ctx.cfg.degrees) {
    AnyBasis const b = basis(ctx, k);
    CsvWriter csv(ctx.path("zeros_n" + tag(k) + ".csv"), {"re", "im"}, ctx.cfg.hash);
    if (k == 0) { continue; }
    for (auto const &z : zeros(b, k, ctx.cfg.seed)) { csv.row({z.real(), z.imag()}); }
  }
  return 0;
}

// ------------------------------------------------------------ trajectory

json poly_json(std::vector<Cx> const &p)
{
  json a = json::array();
  for (auto const &c : p) { a.push_back(complex_json(c)); }
  return a;
}

json rational_json(RationalFn const &f) { return {{"num", poly_json(f.num)}, {"den", poly_json(f.den)}}; }

int cmd_trajectory(Context const &ctx)
{
  RationalMap const m = solve(ctx);
  Potential const p = ctx.potential();
  AlgebraicCurve const curve = build_curve(m, p);
  auto const droplet = boundary_polygon(m, std::max(ctx.cfg.boundary_points, 1024));
  auto const D = discriminant(curve);
  write_json(ctx.path("curve.json"),
             {{"A", rational_json(curve.A)},
              {"B", rational_json(curve.B)},
              {"C", rational_json(curve.C)},
              {"discriminant", rational_json(D)},
              {"z1", complex_json(curve.z1)},
              {"z2", complex_json(curve.z2)},
              {"discriminant_at_z1", relative_value(D.num, curve.z1)},
              {"discriminant_at_z2", relative_value(D.num, curve.z2)},
              {"map", map_json(m)}},
             ctx.cfg.hash);

  TraceOptions topt;
  topt.resolution = ctx.cfg.trajectory_resolution;
  topt.threads = ctx.threads;
  Trajectory tr;
  try {
    tr = trace_trajectory(curve, droplet, topt);
  } catch (Error const &e) {
    if (e.code() == ErrorCode::NoInteriorComponent) { throw Error(ErrorCode::TrajectoryFailure, e.what()); }
    throw;
  }
  {
    CsvWriter csv(ctx.path("trajectory.csv"), {"re", "im", "rho_s", "arc_length"}, ctx.cfg.hash);
    for (std::size_t i = 0; i < tr.points.size(); ++i) {
      csv.row({tr.points[i].real(), tr.points[i].imag(), tr.rho_s[i], tr.arc_length[i]});
    }
  }
  json comps = json::array();
  for (auto const &c : tr.components) {
    comps.push_back({{"points", c.points.size()},
                     {"from_z1", c.from_z1},
                     {"to_z2", c.to_z2},
                     {"interior", c.interior},
                     {"raw_mass", c.raw_mass}});
  }
  json report = {{"raw_mass", tr.raw_mass},
                 {"mass", tr.mass},
                 {"rho_positive", tr.rho_positive},
                 {"grid_resolution", tr.resolution},
                 {"chord_deviation", tr.chord_deviation},
                 {"components", comps},
                 {"degrees", json::array()}};

  // exterior test points for the log-potential comparison
  std::vector<Cx> test;
  for (int j = 0; j < 20; ++j) { test.push_back(map_forward(m, std::polar(1.5, 2 * M_PI * j / 20))); }

  std::vector<SvgLayer> layers{{droplet, "black", true, false}, {tr.points, "blue", false, false}};
  for (int k : ctx.cfg.degrees) {
    if (k == 0) { continue; }
    AnyBasis const b = basis(ctx, k);
    auto const zs = zeros(b, k, ctx.cfg.seed);
    {
      CsvWriter csv(ctx.path("zeros_n" + tag(k) + ".csv"), {"re", "im"}, ctx.cfg.hash);
      for (auto const &z : zs) { csv.row({z.real(), z.imag()}); }
    }
    auto const d = zero_trajectory_distance(zs, tr.points);
    double const N = scale_N(b);
    double worst = 0;
    {
      CsvWriter csv(ctx.path("logpot_n" + tag(k) + ".csv"), {"re_z", "im_z", "zero_sum", "trajectory_integral"},
                    ctx.cfg.hash);
      for (auto const &z : test) {
        double const a = zero_log_potential(zs, z, N);
        double const i = trajectory_log_potential(tr, z);
        worst = std::max(worst, std::abs(a - i));
        csv.row({z.real(), z.imag(), a, i});
      }
    }
    report["degrees"].push_back({{"k", k},
                                 {"N", N},
                                 {"precision", precision_name(b)},
                                 {"max_dist", d.max},
                                 {"mean_dist", d.mean},
                                 {"log_potential_max_diff", worst}});
    layers.push_back({zs, "red", false, true});
  }
  write_json(ctx.path("distance.json"), report, ctx.cfg.hash);
  if (ctx.cfg.svg) {
    Cx lo, hi;
    bbox(droplet, lo, hi);
    Cx const pad(0.1 * (hi.real() - lo.real()), 0.1 * (hi.imag() - lo.imag()));
    write_svg(ctx.path("trajectory.svg"), lo - pad, hi + pad, 0, 0, {}, layers, ctx.cfg.hash);
  }
  return 0;
}

// ------------------------------------------------------------ evolve

int cmd_evolve(Context const &ctx)
{
  auto const &g = ctx.geo();
  if (g.beta > 0 && classify_regime(g.beta, g.a).tag == Regime::DoublyConnected) {
    throw Error(ErrorCode::RegimeViolation, "parameters lie in the doubly connected regime");
  }
  auto const &e = ctx.cfg.evolve;
  int const M = ctx.cfg.boundary_points;
  std::vector<double> ts;
  for (int i = 0; i < e.steps; ++i) { ts.push_back(e.t0_min + (e.t0_max - e.t0_min) * i / (e.steps - 1)); }
  EvolveResult const r = evolve(g, ts, M);

  {
    CsvWriter series(ctx.path("evolve.csv"),
                     {"t0", "solved", "univalent", "r", "re_v", "im_v", "re_A", "im_A", "area"}, ctx.cfg.hash);
    CsvWriter bnd(ctx.path("evolve_boundaries.csv"), {"index", "t0", "theta", "re_z", "im_z"}, ctx.cfg.hash);
    for (std::size_t i = 0; i < r.states.size(); ++i) {
      auto const &s = r.states[i];
      if (!s.solved) {
        series.row({s.t0, 0.0, 0.0, NAN, NAN, NAN, NAN, NAN, NAN});
        continue;
      }
      auto const poly = s.ok ? s.boundary : boundary_polygon(s.m, M);
      series.row({s.t0, 1.0, s.ok ? 1.0 : 0.0, s.m.r, s.m.v.real(), s.m.v.imag(), s.m.A.real(), s.m.A.imag(),
                  shoelace_area(poly) / M_PI});
      for (int j = 0; j < M; ++j) { bnd.row({double(i), s.t0, 2 * M_PI * j / M, poly[j].real(), poly[j].imag()}); }
    }
  }

  json failures = json::array();
  for (auto const &[a, b] : r.nesting_failures) { failures.push_back({a, b}); }
  json report = {{"beta", g.beta},
                 {"a", complex_json(g.a)},
                 {"t0_grid", ts},
                 {"nested", r.nested},
                 {"pairs_checked", r.pairs_checked},
                 {"nesting_failures", failures}};
  json onset = {{"found", false}};
  if (r.onset) {
    auto const &o = *r.onset;
    onset = {{"found", true},
             {"t0_lo", o.t0_lo},
             {"t0_hi", o.t0_hi},
             {"width", o.t0_hi - o.t0_lo},
             {"kind", o.solution_ends ? "solution_ends" : "univalence_loss"}};
    if (o.critical_radius) { onset["critical_radius"] = *o.critical_radius; }
  }
  report["univalence_onset"] = onset;
  write_json(ctx.path("evolve.json"), report, ctx.cfg.hash);
  if (ctx.cfg.svg) {
    std::vector<SvgLayer> layers;
    std::vector<Cx> all;
    for (auto const &st : r.states) {
      auto const &p = st.boundary;
      if (p.empty()) { continue; }
      layers.push_back({p, "black", true, false});
      all.insert(all.end(), p.begin(), p.end());
    }
    if (!all.empty()) {
      Cx lo, hi;
      bbox(all, lo, hi);
      Cx const pad(0.05 * (hi.real() - lo.real()), 0.05 * (hi.imag() - lo.imag()));
      write_svg(ctx.path("evolve.svg"), lo - pad, hi + pad, 0, 0, {}, layers, ctx.cfg.hash);
    }
  }
  return 0;
}

// ------------------------------------------------------------ validate

struct Checks
{
  json list = json::array();
  bool all = true;

  void add(std::string const &name, double value, double tol, bool pass)
  {
    list.push_back({{"name", name}, {"value", value}, {"tolerance", tol}, {"pass", pass}});
    all = all && pass;
  }
  void leq(std::string const &name, double value, double tol) { add(name, value, tol, value <= tol); }
};

int cmd_validate(Context const &ctx)
{
  Checks ck;
  Potential const p = ctx.potential();
  std::mt19937_64 rng(ctx.cfg.seed);
  std::uniform_real_distribution<double> U(-1, 1);
  int const n = *std::max_element(ctx.cfg.degrees.begin(), ctx.cfg.degrees.end());

  if (ctx.cfg.moments.geometric()) {
    auto const &g = ctx.geo();
    double worst = 0;
    double const N = ctx.N_for(n);
    for (int i = 0; i < 2000; ++i) {
      Cx const z(4 * U(rng), 4 * U(rng));
      if (std::abs(z) >= 4 || std::abs(z - g.a) < 1e-3) { continue; }
      double const lhs = -N * eval_W(p, z);
      double const rhs = -N * std::norm(z) + 2 * N * g.beta * std::log(std::abs(1.0 - z / g.a));
      worst = std::max(worst, std::abs(std::expm1(lhs - rhs)));
    }
    ck.leq("weight_factorization", worst, 1e-13);

    double series = 0;
    for (int i = 0; i < 200; ++i) {
      Cx const z = 0.5 * std::abs(g.a) * std::sqrt(std::abs(U(rng))) * std::polar(1.0, M_PI * U(rng));
      Cx s = 0, zk = 1;
      for (int k = 1; k <= 60; ++k) {
        zk *= z;
        s += -g.beta / double(k) * std::pow(g.a, -k) * zk;
      }
      series = std::max(series, std::abs(eval_V(p, z) - s));
    }
    ck.leq("series_consistency", series, 1e-12);

    // roundtrip on random admissible triples
    double rt = 0;
    int done = 0;
    while (done < ctx.cfg.validate_trials) {
      double const beta = 0.05 + 0.95 * std::abs(U(rng));
      double const t0 = 0.2 + 1.3 * std::abs(U(rng));
      Cx const a = (1.2 + 2 * std::abs(U(rng))) * std::sqrt(t0 + beta) * std::polar(1.0, M_PI * U(rng));
      if (classify_regime(beta, a).tag != Regime::SimplyConnected) { continue; }
      auto const m = solve_params(beta, a, t0);
      auto const f = forward_params(m);
      rt = std::max({rt, std::abs(f.beta - beta) / beta, std::abs(f.a - a) / std::abs(a), std::abs(f.t0 - t0) / t0});
      ++done;
    }
    ck.leq("map_roundtrip", rt, 1e-10);

    if (g.beta > 0) {
      RationalMap const m = solve(ctx);
      double area = std::abs(shoelace_area(boundary_polygon(m, 4096)) / (M_PI * ctx.t0()) - 1);
      ck.leq("area_consistency", area, 1e-6);
      try {
        AlgebraicCurve const c = build_curve(m, p);
        double res = 0;
        for (int j = 0; j < 100; ++j) {
          Cx const zeta = std::polar(1.0, 2 * M_PI * (j + 0.5) / 100);
          Cx const z = map_forward(m, zeta);
          res = std::max(res, curve_residual(c, z, schwarz_on_sheet(m, zeta) - eval_dV(p, z)));
        }
        ck.leq("curve_schwarz_residual", res, 1e-9);
        auto const D = discriminant(c);
        ck.leq("branch_point_discriminant", std::max(relative_value(D.num, c.z1), relative_value(D.num, c.z2)), 1e-9);
      } catch (Error const &e) {
        ck.add(std::string("curve: ") + e.what(), 1, 0, false);
      }
    }

    int const mint = integer_beta(g.beta, ctx.N_for(n));
    if (mint >= 0 && !ctx.cfg.N.has_value()) {
      auto const G = compute_gram<double>(p, n, ctx.t0(), ctx.gram(n));
      MatrixC<double> const O = prewhitened_oracle<double>(n, mint, g.a, G.N);
      double err = 0;
      for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
          err = std::max(err, std::abs(G.entries(i, j) - O(i, j)) / std::sqrt(std::abs(O(i, i) * O(j, j))));
        }
      }
      ck.leq("gram_oracle", err, 1e-9);
    }
  }

  // orthonormality against a refined grid and density normalization
  auto const b = basis(ctx, n);
  std::visit(
    [&](auto const &x) {
      using Real = std::conditional_t<std::is_same_v<std::decay_t<decltype(x)>, OrthoBasis<double>>, double, Quad>;
      GramOptions fine = ctx.gram(n);
      fine.grid.radial_scale *= 1.5;
      fine.grid.angular_scale *= 1.5;
      auto const G2 = compute_gram<Real>(p, n, ctx.t0(), fine);
      ck.leq("orthonormality_refined", orthonormality_residual(x, G2.entries), 1e-8);
      auto const grid = build_grid<double>(p, x.N, 2 * n + 2, fine.grid);
      double worst = 0;
      for (int k = 0; k <= n; ++k) {
        double s = 0;
        for (std::size_t l = 0; l < grid.radii.size(); ++l) {
          for (int q = 0; q < grid.angular; ++q) { s += grid.weight(l) * eval_density(x, k, grid.node(l, q)); }
        }
        worst = std::max(worst, std::abs(s - 1));
      }
      ck.leq("density_normalization", worst, 1e-8);
    },
    b);

  if (ctx.cfg.moments.geometric() && ctx.geo().beta == 0) {
    RationalMap const m = solve(ctx);
    for (int k : ctx.cfg.degrees) {
      if (k == 0) { continue; }
      auto const bk = basis(ctx, k);
      ck.leq("kl_disk_n" + tag(k), std::abs(kl_divergence(bk, k, m, ctx.cfg.profile_points).mean_adjusted), 1e-10);
    }
  }

  write_json(ctx.path("validate.json"), {{"checks", ck.list}, {"all_pass", ck.all}}, ctx.cfg.hash);
  return ck.all ? 0 : 1;
}

} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Laplacian growth via planar orthogonal polynomials"};
  app.require_subcommand(1);
  std::string config, out;
  int threads = 1;
  bool ext = false, dump = false;
  std::optional<std::uint64_t> seed;

  std::map<std::string, std::function<int(Context const &)>> const commands{
    {"solve-map", cmd_solve_map}, {"density", cmd_density},       {"kl", cmd_kl},           {"zeros", cmd_zeros},
    {"trajectory", cmd_trajectory}, {"evolve", cmd_evolve},     {"validate", cmd_validate}};
  for (auto const &[name, fn] : commands) {
    auto *sub = app.add_subcommand(name);
    sub->add_option("--config", config, "config file (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory")->required();
    sub->add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 256));
    sub->add_flag("--extended-precision", ext, "force ~32-digit arithmetic");
    sub->add_option("--seed", seed, "root finder seed");
    sub->add_flag("--dump-grid", dump, "write quadrature nodes");
  }
  CLI11_PARSE(app, argc, argv);

  std::string const name = app.get_subcommands().front()->get_name();
  Context ctx;
  ctx.out = out;
  ctx.threads = threads;
  ctx.dump_grid = dump;
  try {
    fs::create_directories(out);
    ctx.cfg = load_config(config);
    if (ext) { ctx.cfg.precision = Precision::Extended; }
    if (seed) { ctx.cfg.seed = *seed; }
    return commands.at(name)(ctx);
  } catch (Error const &e) {
    std::fprintf(stderr, "%s\n", e.what());
    try {
      write_json(ctx.path("error.json"),
                 {{"command", name}, {"error", to_string(e.code())}, {"message", e.what()}, {"exit_code", exit_code(e.code())}},
                 ctx.cfg.hash);
    } catch (...) {
    }
    return exit_code(e.code());
  } catch (std::exception const &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
