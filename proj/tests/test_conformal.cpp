#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lgop/conformal.hpp"
#include "lgop/geometry.hpp"

#include <cmath>
#include <random>

using namespace lgop;

namespace {

ErrorCode code_of(std::function<void()> const &f)
{
  try {
    f();
  } catch (Error const &e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidInput;
}

// residue of the Schwarz function at z = a: (1/2 pi i) of conj-f(1/zeta) f'(zeta) around zeta = 1/conj(A)
double residue_oracle(RationalMap const &m)
{
  Cx const c = 1.0 / std::conj(m.A);
  double const rho = 0.25 * (std::abs(c) - 1);
  int const K = 4096;
  Cx s = 0;
  for (int k = 0; k < K; ++k) {
    Cx const e = std::polar(1.0, 2 * M_PI * k / K);
    Cx const zeta = c + rho * e;
    Cx const S = std::conj(map_forward(m, 1.0 / std::conj(zeta)));
    s += S * map_derivative(m, zeta) * Cx(0, rho) * e;
  }
  return (s / double(K) * 2.0 * M_PI / Cx(0, 2 * M_PI)).real();
}

} // namespace

TEST_CASE("regime classification")
{
  auto const r = classify_regime(0.5, 2.6667);
  CHECK(r.R1 == doctest::Approx(std::sqrt(0.5)));
  CHECK(r.R2 == doctest::Approx(1.0));
  CHECK(r.tag == Regime::SimplyConnected);
  auto const d = classify_regime(2.0, 0.05);
  CHECK(d.R1 == doctest::Approx(1.41421).epsilon(1e-5));
  CHECK(d.R2 == doctest::Approx(1.58114).epsilon(1e-5));
  CHECK(d.tag == Regime::DoublyConnected);
  auto const z = classify_regime(0.0, 0.5);
  CHECK(z.R1 == 0.0);
  CHECK(z.R2 == doctest::Approx(std::sqrt(0.5)));
  CHECK(z.tag == Regime::DoublyConnected);
  CHECK(classify_regime(0.0, 0.8).tag == Regime::SimplyConnected);
}

TEST_CASE("forward parameters: area and pole")
{
  auto const m = make_map(1, 0.25, 0.5);
  auto const f = forward_params(m);
  CHECK(f.t0 == doctest::Approx(8.0 / 9).epsilon(1e-14));
  CHECK(std::abs(f.a - Cx(8.0 / 3)) <= 1e-14);
  auto const g = forward_params(make_map(1.2, 0.3, 0.4));
  CHECK(g.t0 == doctest::Approx(1.44 - 0.09 / 0.7056).epsilon(1e-14));
  CHECK(std::abs(g.a - Cx(3 + 0.75 + 0.12 / 0.84)) <= 1e-13);
}

TEST_CASE("forward beta equals the Schwarz residue at a")
{
  for (auto const &m : {make_map(1, 0.25, 0.5), make_map(1.2, 0.3, 0.4), make_map(1, -0.25, 0.5),
                        make_map(0.9, Cx(-0.05, 0.1), Cx(0.3, 0.2))}) {
    CHECK(forward_params(m).beta == doctest::Approx(residue_oracle(m)).epsilon(1e-10));
  }
}

TEST_CASE("disk map")
{
  RationalMap m;
  m.r = 1;
  auto const f = forward_params(m);
  CHECK(f.t0 == 1.0);
  CHECK(f.beta == 0.0);
  for (double th : {0.0, 1.0, 2.5}) {
    Cx const z = std::polar(1.0, th);
    CHECK(std::abs(map_forward(m, z) - z) <= 1e-15);
    CHECK(std::abs(map_inverse(m, z).zeta - z) <= 1e-12);
  }
  auto const s = sample_boundary(m, 16);
  for (int j : {0, 4, 8, 12}) { CHECK(s[j].measure == doctest::Approx(1.0)); }
  CHECK(std::abs(s[4].z - Cx(0, 1)) <= 1e-15);
}

TEST_CASE("solve reproduces a known map")
{
  // (1, -0.25, 0.5) has beta = 10/9, a = 4/3, t0 = 8/9
  auto const m = solve_params(10.0 / 9, 4.0 / 3, 8.0 / 9);
  CHECK(m.r == doctest::Approx(1).epsilon(1e-12));
  CHECK(std::abs(m.v - Cx(-0.25)) <= 1e-12);
  CHECK(std::abs(m.A - Cx(0.5)) <= 1e-12);
  CHECK(std::abs(m.u - m.v / m.A) <= 1e-15);
}

TEST_CASE("rotation covariance")
{
  auto const m0 = solve_params(10.0 / 9, 4.0 / 3, 8.0 / 9);
  auto const m = solve_params(10.0 / 9, Cx(0, 4.0 / 3), 8.0 / 9);
  CHECK(m.r == doctest::Approx(m0.r).epsilon(1e-14));
  CHECK(std::abs(m.A - Cx(0, 0.5)) <= 1e-12);
  CHECK(std::abs(m.v - Cx(0.25)) <= 1e-12);
  double const phi = 2.1;
  auto const mr = solve_params(0.5, std::polar(2.0, phi), 1.0);
  auto const ref = solve_params(0.5, 2.0, 1.0);
  CHECK(std::abs(mr.A - ref.A * std::polar(1.0, phi)) <= 1e-14);
  CHECK(std::abs(mr.v - ref.v * std::polar(1.0, 2 * phi)) <= 1e-14);
}

TEST_CASE("beta = 0 gives the disk of area t0")
{
  auto const m = solve_params(0.0, 3.0, 1.0);
  CHECK(m.r == doctest::Approx(1.0));
  CHECK(std::abs(m.v) == 0.0);
  auto const m2 = solve_params(0.0, 3.0, 2.0);
  CHECK(m2.r == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("roundtrip on random admissible triples")
{
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> U(0, 1);
  int done = 0;
  double worst = 0;
  while (done < 100) {
    double const beta = 0.05 + 0.95 * U(rng);
    double const t0 = 0.2 + 1.3 * U(rng);
    Cx const a = (1.2 + 2 * U(rng)) * std::sqrt(t0 + beta) * std::polar(1.0, 2 * M_PI * U(rng));
    if (classify_regime(beta, a).tag != Regime::SimplyConnected) { continue; }
    auto const m = solve_params(beta, a, t0);
    auto const f = forward_params(m);
    worst = std::max({worst, std::abs(f.beta - beta) / beta, std::abs(f.a - a) / std::abs(a), std::abs(f.t0 - t0) / t0});
    CHECK(m.r > 0);
    CHECK(std::abs(m.A) < 1);
    ++done;
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("doubly connected input is refused")
{
  CHECK(code_of([] { solve_params(2.0, 0.05, 1.0); }) == ErrorCode::RegimeViolation);
}

TEST_CASE("forward map examples")
{
  auto const m = make_map(1, 0.25, 0.5);
  CHECK(std::abs(map_forward(m, 2.0) - Cx(2.5 + 0.25 / 1.5)) <= 1e-15);
  CHECK(std::abs(map_forward(m, 1.0) - Cx(2.0)) <= 1e-15);
  CHECK(std::abs(map_inverse(m, map_forward(m, 2.0)).zeta - Cx(2.0)) <= 1e-12);
}

TEST_CASE("inverse at the boundary branch point is the double root")
{
  auto const m = make_map(1, 0.25, 0.5);
  auto const p = map_inverse(m, 2.0);
  CHECK(p.branch_point);
  CHECK(std::abs(p.zeta - Cx(1.0)) <= 1e-7);
  // r zeta^2 + (u - z - rA) zeta + (zA - uA + v) at z = 2 is (zeta - 1)^2
  Cx const b = m.u - 2.0 - m.r * m.A, c = 2.0 * m.A - m.u * m.A + m.v;
  CHECK(std::abs(b - Cx(-2)) <= 1e-15);
  CHECK(std::abs(c - Cx(1)) <= 1e-15);
}

TEST_CASE("inverse consistency")
{
  auto const m = solve_params(0.5, 2.0, 1.0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0, 1);
  for (int i = 0; i < 1000; ++i) {
    Cx const zeta = std::polar(1 + 4 * U(rng), 2 * M_PI * U(rng));
    CHECK(std::abs(map_inverse(m, map_forward(m, zeta)).zeta - zeta) <= 1e-10);
  }
}

TEST_CASE("interior points are rejected")
{
  auto const m = solve_params(0.5, 2.0, 1.0);
  CHECK(code_of([&] { map_inverse(m, 0.1); }) == ErrorCode::InteriorPoint);
}

TEST_CASE("conformal measure")
{
  auto const m = make_map(1, 0.25, 0.5);
  Cx const z = map_forward(m, -1.0);
  CHECK(std::abs(z - Cx(-1 + 0.5 - 0.25 / 1.5)) <= 1e-15);
  CHECK(conformal_measure(m, z) == doctest::Approx(1.125).epsilon(1e-12));
  RationalMap disk;
  disk.r = std::sqrt(2.0);
  CHECK(conformal_measure(disk, std::polar(disk.r, 0.7)) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(code_of([&] { sample_boundary(m, 64); }) == ErrorCode::CuspSingular);
}

TEST_CASE("sampled boundary is simple with area t0")
{
  auto const m = solve_params(0.3, 2.0, 1.0);
  auto const s = sample_boundary(m, 256);
  std::vector<Cx> poly;
  for (auto const &x : s) { poly.push_back(x.z); }
  CHECK_FALSE(polygon_self_intersects(poly));
  CHECK(shoelace_area(poly) / M_PI == doctest::Approx(1.0).epsilon(1e-3));
  auto const fine = boundary_polygon(m, 4096);
  CHECK(std::abs(shoelace_area(fine) / M_PI - forward_params(m).t0) <= 1e-6);
}

TEST_CASE("univalence metadata")
{
  auto const m = solve_params(0.5, 2.0, 1.0);
  CHECK(m.univalent);
  CHECK(critical_points_inside(m));
  CHECK_FALSE(critical_points_inside(make_map(1, 0.25, 0.5)));
  // a map whose boundary loops over itself
  RationalMap bad = make_map(1, Cx(0.9), Cx(0.3));
  CHECK_FALSE(check_univalent(bad));
}

TEST_CASE("convergence near the regime boundary")
{
  double const beta = 0.5;
  auto const r = classify_regime(beta, 1.0);
  double const a = r.R2 * 1.05 - r.R1 + 0.01;
  CHECK_NOTHROW(solve_params(beta, a, 0.5));
}
