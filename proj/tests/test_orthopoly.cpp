#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lgop/conformal.hpp"
#include "lgop/geometry.hpp"
#include "lgop/orthopoly.hpp"
#include "lgop/roots.hpp"

#include <cmath>

using namespace lgop;

namespace {

double gaussian_log_density(int k, double N, Cx z)
{
  return (k + 1) * std::log(N) - std::log(M_PI) - std::lgamma(k + 1.0) + k * std::log(std::norm(z)) - N * std::norm(z);
}

// plain grid sum of rho_k, no Gram involved
double density_mass(OrthoBasis<double> const &b, int k, Potential const &p)
{
  GridOptions o;
  o.radial_scale = 1.5;
  o.angular_scale = 1.5;
  auto const g = build_grid<double>(p, b.N, 2 * b.n + 2, o);
  double s = 0;
  for (std::size_t l = 0; l < g.radii.size(); ++l) {
    for (int q = 0; q < g.angular; ++q) { s += g.weight(l) * eval_density(b, k, g.node(l, q)); }
  }
  return s;
}

} // namespace

TEST_CASE("Gaussian Gram and basis are the identity")
{
  auto const p = geometric_potential(0.0, 2.0, 1.0);
  for (int n : {0, 3, 12}) {
    auto const g = compute_gram<double>(p, n, 1.0);
    int const n1 = n + 1;
    CHECK((g.entries - MatrixC<double>::Identity(n1, n1)).cwiseAbs().maxCoeff() <= 1e-12);
    auto const b = orthogonalize(g, p, 1.0);
    CHECK((b.C - MatrixC<double>::Identity(n1, n1)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("n = 0 entry is the normalized mass")
{
  auto const p = geometric_potential(0.5, 2.0, 1.0);
  auto const g = compute_gram<double>(p, 0, 1.0);
  CHECK(g.N == 1.0);
  CHECK(g.entries(0, 0).real() > 0);
  CHECK(std::abs(g.entries(0, 0).imag()) <= 1e-15);
}

TEST_CASE("identity Gram orthogonalizes to the identity")
{
  auto const p = geometric_potential(0.0, 2.0, 1.0);
  GramMatrix<double> g{4, 4.0, MatrixC<double>::Identity(5, 5)};
  auto const b = orthogonalize(g, p, 1.0);
  CHECK((b.C - MatrixC<double>::Identity(5, 5)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("2x2 hand Cholesky")
{
  auto const p = geometric_potential(0.0, 2.0, 1.0);
  Cx const c(0.3, -0.4);
  MatrixC<double> G(2, 2);
  G << 1.0, c, std::conj(c), 1.0;
  auto const b = orthogonalize(GramMatrix<double>{1, 1.0, G}, p, 1.0);
  double const s = std::sqrt(1 - std::norm(c));
  CHECK(std::abs(b.C(1, 0) - (-std::conj(c) / s)) <= 1e-15);
  CHECK(std::abs(b.C(1, 1) - Cx(1 / s)) <= 1e-15);
  CHECK(b.C(1, 1).imag() == 0.0);
  CHECK(b.C(1, 1).real() > 0);
}

TEST_CASE("indefinite Gram reports the failing pivot")
{
  auto const p = geometric_potential(0.0, 2.0, 1.0);
  MatrixC<double> G(2, 2);
  G << 1.0, 2.0, 2.0, 1.0;
  try {
    orthogonalize(GramMatrix<double>{1, 1.0, G}, p, 1.0);
    FAIL("expected NotPositiveDefinite");
  } catch (Error const &e) {
    CHECK(e.code() == ErrorCode::NotPositiveDefinite);
    CHECK(exit_code(e.code()) == 5);
  }
}

TEST_CASE("orthonormality against a refined Gram at n = 8")
{
  auto const p = geometric_potential(0.5, 2.0, 1.0);
  auto const b = orthogonalize(compute_gram<double>(p, 8, 1.0), p, 1.0);
  GramOptions fine;
  fine.grid.radial_scale = 2;
  fine.grid.angular_scale = 2;
  auto const G2 = compute_gram<double>(p, 8, 1.0, fine);
  CHECK(orthonormality_residual(b, G2.entries) <= 1e-8);
  for (int k = 0; k <= 8; ++k) {
    CHECK(b.C(k, k).imag() == 0.0);
    CHECK(b.C(k, k).real() > 0);
  }
}

TEST_CASE("refinement check passes on a resolved grid")
{
  auto const p = geometric_potential(0.45, Cx(1.5, 0.7), 1.0);
  GramOptions o;
  o.check_refinement = true;
  CHECK_NOTHROW(compute_gram<double>(p, 10, 1.0, o));
}

TEST_CASE("Gaussian density closed form")
{
  auto const p = geometric_potential(0.0, 2.0, 1.0);
  auto const b = orthogonalize(compute_gram<double>(p, 10, 1.0), p, 1.0);
  for (int k : {0, 1, 5, 10}) {
    for (Cx z : {Cx(0.3, 0.1), Cx(-1, 0.5), Cx(0, std::sqrt(k / 10.0))}) {
      if (z == Cx(0)) { continue; }
      CHECK(log_density(b, k, z) == doctest::Approx(gaussian_log_density(k, 10, z)).epsilon(1e-12));
    }
  }
  // peak of rho_k sits on |z| = sqrt(k/N)
  double const r0 = std::sqrt(5 / 10.0);
  CHECK(eval_density(b, 5, r0) > eval_density(b, 5, r0 * 1.01));
  CHECK(eval_density(b, 5, r0) > eval_density(b, 5, r0 * 0.99));
}

TEST_CASE("log-domain evaluation does not overflow")
{
  auto const p = geometric_potential(0.5, 2.0, 1.0);
  auto const b = orthogonalize(compute_gram<double>(p, 20, 1.0), p, 1.0);
  double const v = eval_density(b, 20, Cx(40, 30));
  CHECK(v == 0.0);
  CHECK(std::isfinite(log_density(b, 20, Cx(40, 30))));
  CHECK(log_density_potential(b, 20, Cx(1e4, 0)) == -1e6);
}

TEST_CASE("density normalization for k <= 20")
{
  auto const p = geometric_potential(0.5, 2.0, 1.0);
  auto const b = orthogonalize(compute_gram<double>(p, 20, 1.0), p, 1.0);
  for (int k = 0; k <= 20; ++k) { CHECK(std::abs(density_mass(b, k, p) - 1) <= 1e-8); }
}

TEST_CASE("Gaussian zeros are at the origin")
{
  auto const p = geometric_potential(0.0, 2.0, 1.0);
  auto const b = orthogonalize(compute_gram<double>(p, 3, 1.0), p, 1.0);
  auto const z = zeros(b, 3);
  REQUIRE(z.size() == 3);
  // a triple root moves by eps^(1/3) under rounding of the coefficients
  for (auto const &x : z) { CHECK(std::abs(x) <= 1e-4); }
}

TEST_CASE("linear zero")
{
  auto const p = geometric_potential(0.5, Cx(1.2, 0.9), 1.0);
  auto const b = orthogonalize(compute_gram<double>(p, 4, 1.0), p, 1.0);
  auto const z = zeros(b, 1);
  REQUIRE(z.size() == 1);
  // P_1 = C10 sqrt(N/pi) + C11 sqrt(N^2/pi) z
  Cx const root = -b.C(1, 0) / (b.C(1, 1) * std::sqrt(b.N));
  CHECK(std::abs(z[0] - root) <= 1e-13);
}

TEST_CASE("zeros: count, backward error, determinism")
{
  auto const p = geometric_potential(0.5, 2.0, 1.0);
  auto const b = orthogonalize(compute_gram<double>(p, 20, 1.0), p, 1.0);
  auto const z = zeros(b, 20, 9);
  CHECK(z.size() == 20);
  auto const c = b.scaled_coefficients(20);
  for (auto const &x : z) { CHECK(backward_error<double>(c, x * std::sqrt(b.N)) <= 1e-8); }
  CHECK(z == zeros(b, 20, 9));
}

TEST_CASE("degree-50 zeros lie inside the droplet")
{
  auto const p = geometric_potential(0.5, 2.0, 1.0);
  auto const m = solve_params(0.5, 2.0, 1.0);
  auto const poly = boundary_polygon(m, 1024);
  auto const b = orthogonalize(compute_gram<Quad>(p, 50, 1.0), p, 1.0);
  auto const z = zeros(b, 50);
  REQUIRE(z.size() == 50);
  for (auto const &x : z) { CHECK(point_in_polygon(poly, x)); }
}

TEST_CASE("Gaussian log-density potential")
{
  auto const p = geometric_potential(0.0, 2.0, 1.0);
  int const k = 16;
  auto const b = orthogonalize(compute_gram<double>(p, k, 1.0), p, 1.0);
  Cx const z(2, 0);
  CHECK(log_density_potential(b, k, z) == doctest::Approx(gaussian_log_density(k, 16, z) / 16).epsilon(1e-12));
  // leading order: -W(z) + t0 log|z|^2 + t0, error O(log N / N)
  double const lead = -std::norm(z) + std::log(std::norm(z)) + 1;
  CHECK(std::abs(log_density_potential(b, k, z) - lead) <= 2 * std::log(16.0) / 16);
}

TEST_CASE("far-field slopes follow the degree")
{
  auto const p = geometric_potential(0.5, 2.0, 1.0);
  int const k = 20;
  auto const b = orthogonalize(compute_gram<double>(p, k, 1.0), p, 1.0);
  double const N = b.N;
  Cx const z1(1e3, 0), z2(1e3 * std::exp(0.01), 0);
  double const dpoly =
    (log_density(b, k, z2) + N * eval_W(p, z2) - log_density(b, k, z1) - N * eval_W(p, z1)) / N / 0.01;
  auto const zs = zeros(b, k);
  double const dzero = (zero_log_potential(zs, z2, N) - zero_log_potential(zs, z1, N)) / 0.01;
  CHECK(std::abs(dpoly - 2.0 * k / N) <= 1e-3);
  CHECK(std::abs(dzero - 2.0 * k / N) <= 1e-3);
}

TEST_CASE("precision escalation is automatic above the threshold")
{
  auto const p = geometric_potential(0.5, 2.0, 1.0);
  CHECK_FALSE(extended(build_basis(p, 10, 1.0, Precision::Auto)));
  CHECK(extended(build_basis(p, 30, 1.0, Precision::Auto)));
  CHECK(extended(build_basis(p, 5, 1.0, Precision::Extended)));
}
