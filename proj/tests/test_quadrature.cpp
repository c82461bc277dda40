#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lgop/quadrature.hpp"

#include <boost/math/special_functions/binomial.hpp>

#include <cmath>

using namespace lgop;

namespace {

// Gaussian moment: int |z|^(2i) e^{-N|z|^2} d^2z = pi i! / N^(i+1)
double gaussian_moment(int i, double N) { return M_PI * std::tgamma(i + 1.0) / std::pow(N, i + 1); }

// independent binomial expansion of |1 - z/a|^(2m) against z^i conj(z)^j
Cx binomial_oracle(int i, int j, int m, Cx a, double N)
{
  Cx s = 0;
  for (int p = 0; p <= m; ++p) {
    for (int q = 0; q <= m; ++q) {
      if (i + p != j + q) { continue; }
      double const c = boost::math::binomial_coefficient<double>(m, p) * boost::math::binomial_coefficient<double>(m, q);
      s += c * std::pow(-1.0 / a, p) * std::pow(std::conj(-1.0 / a), q) * gaussian_moment(i + p, N);
    }
  }
  return s;
}

} // namespace

TEST_CASE("Gaussian mass")
{
  auto const p = geometric_potential(0.0, 2.0, 1.0);
  for (double N : {1.0, 8.0, 40.0}) {
    auto const g = build_grid<double>(p, N, 8);
    Cx const s = integrate(g, [](Cx) { return Cx(1); });
    CHECK(std::abs(s - M_PI / N) <= 1e-13 * M_PI / N);
  }
}

TEST_CASE("Gaussian moments at N = 8")
{
  auto const p = geometric_potential(0.0, 2.0, 1.0);
  auto const g = build_grid<double>(p, 8.0, 8);
  Cx const s = integrate(g, [](Cx z) { return std::pow(std::norm(z), 4); });
  CHECK(std::abs(s.real() / gaussian_moment(4, 8) - 1) <= 1e-12);
  CHECK(std::abs(s.real() / (M_PI * 24 / std::pow(8.0, 5)) - 1) <= 1e-12);
}

TEST_CASE("prewhitened Gram of the Gaussian is the identity")
{
  auto const p = geometric_potential(0.0, 2.0, 1.0);
  for (int n : {0, 5, 20}) {
    double const N = n > 0 ? n : 1;
    auto const G = gram_matrix(build_grid<double>(p, N, n), n);
    CHECK((G - MatrixC<double>::Identity(n + 1, n + 1)).cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("raw oracle matches an independent binomial expansion")
{
  Cx const a(2, 0.5);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      Cx const o = gram_oracle_integer_beta<double>(i, j, 3, a, 6.0);
      Cx const b = binomial_oracle(i, j, 3, a, 6.0);
      CHECK(std::abs(o - b) <= 1e-13 * std::sqrt(gaussian_moment(i, 6) * gaussian_moment(j, 6)) * 100);
    }
  }
}

TEST_CASE("Gram matches the integer-beta oracle at n = 8")
{
  auto const p = geometric_potential(0.5, 2.0, 1.0);
  int const n = 8, m = integer_beta(0.5, 8.0);
  CHECK(m == 4);
  auto const G = gram_matrix(build_grid<double>(p, 8.0, n), n);
  auto const O = prewhitened_oracle<double>(n, m, 2.0, 8.0);
  double err = 0;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) { err = std::max(err, std::abs(G(i, j) - O(i, j)) / std::sqrt(std::abs(O(i, i) * O(j, j)))); }
  }
  CHECK(err <= 1e-9);
}

TEST_CASE("integrand-level oracle: monomial against the weight")
{
  auto const p = geometric_potential(0.5, Cx(1.5, 1.0), 1.0);
  double const N = 6;
  auto const g = build_grid<double>(p, N, 6);
  for (auto [i, j] : {std::pair{0, 0}, {2, 1}, {3, 3}, {1, 4}}) {
    Cx const s = integrate(g, [i = i, j = j](Cx z) { return std::pow(z, i) * std::pow(std::conj(z), j); });
    Cx const o = binomial_oracle(i, j, 3, Cx(1.5, 1.0), N);
    CHECK(std::abs(s - o) <= 1e-12 * std::sqrt(gaussian_moment(i, N) * gaussian_moment(j, N)));
  }
}

TEST_CASE("extended precision Gram against the oracle")
{
  auto const p = geometric_potential(0.5, 2.0, 1.0);
  int const n = 30;
  auto const G = gram_matrix(build_grid<Quad>(p, 30.0, n), n);
  auto const O = prewhitened_oracle<Quad>(n, 15, 2.0, 30.0);
  Quad err = 0;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      using std::abs;
      using std::sqrt;
      err = std::max(err, Quad(abs(G(i, j) - O(i, j)) / sqrt(abs(O(i, i) * O(j, j)))));
    }
  }
  CHECK(double(err) <= 1e-28);
}

TEST_CASE("Hermitian by construction and thread-count independent")
{
  auto const p = geometric_potential(0.45, Cx(1.2, -1.1), 1.0);
  auto const g = build_grid<double>(p, 12.0, 12);
  auto const G1 = gram_matrix(g, 12, 1);
  auto const G4 = gram_matrix(g, 12, 4);
  CHECK((G1 - G1.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((G1 - G4).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("non-integer beta is resolved by refinement")
{
  auto const p = geometric_potential(0.45, 2.0, 1.0);
  int const n = 20;
  auto const G = gram_matrix(build_grid<double>(p, 20.0, n), n);
  GridOptions fine;
  fine.radial_scale = 2;
  fine.angular_scale = 2;
  auto const G2 = gram_matrix(build_grid<double>(p, 20.0, n, fine), n);
  CHECK((G - G2).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK_THROWS(integer_beta(0.45, 21.0));
  CHECK(integer_beta(0.45, 40.0) == 18);
}

TEST_CASE("angular count covers the band limit")
{
  auto const p = geometric_potential(0.5, 2.0, 1.0);
  auto const g = build_grid<double>(p, 8.0, 8);
  CHECK(g.angular >= 4 * 9 + 2 * 4);
  CHECK(g.angular % 8 == 0);
  CHECK(g.outer_radius > 2.0);
  CHECK_FALSE(g.describe().empty());
}
