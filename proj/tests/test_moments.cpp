#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lgop/moments.hpp"

#include <cmath>
#include <random>

using namespace lgop;

TEST_CASE("V vanishes at the origin")
{
  auto const p = geometric_potential(0.5, 2.0, 1.0);
  CHECK(std::abs(eval_V(p, 0.0)) == 0.0);
  CHECK(eval_W(p, 0.0) == 0.0);
}

TEST_CASE("V matches the summed moment series at z = 1")
{
  auto const p = geometric_potential(1.0, 2.0, 1.0);
  // t_k = -beta/k a^-k summed directly
  double s = 0;
  for (int k = 1; k <= 200; ++k) { s += -1.0 / k * std::pow(0.5, k); }
  CHECK(std::abs(eval_V(p, 1.0) - s) <= 1e-12);
  CHECK(eval_W(p, 1.0) == doctest::Approx(1 - 2 * s).epsilon(1e-14));
}

TEST_CASE("small-z slope is t_1 = -beta/a")
{
  Cx const a(1.3, -0.7);
  auto const p = geometric_potential(0.8, a, 1.0);
  Cx const z(1e-7, 2e-7);
  CHECK(std::abs(eval_V(p, z) / z - (-0.8 / a)) <= 1e-6);
  CHECK(std::abs(eval_dV(p, 0.0) - (-0.8 / a)) <= 1e-15);
}

TEST_CASE("disk potential is Gaussian")
{
  auto const p = geometric_potential(0.0, 2.0, 1.0);
  for (Cx z : {Cx(0.3, 0.4), Cx(-2, 1), Cx(2, 0)}) { CHECK(eval_W(p, z) == doctest::Approx(std::norm(z))); }
}

TEST_CASE("weight factorization on random points")
{
  Cx const a(2, 0);
  double const beta = 0.5, N = 8;
  auto const p = geometric_potential(beta, a, 1.0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-4, 4);
  double worst = 0;
  int used = 0;
  while (used < 10000) {
    Cx const z(U(rng), U(rng));
    if (std::abs(z) >= 4) { continue; }
    ++used;
    double const w = std::exp(-N * eval_W(p, z));
    double const ref = std::exp(-N * std::norm(z)) * std::pow(std::abs(1.0 - z / a), 2 * N * beta);
    if (ref > 0) { worst = std::max(worst, std::abs(w - ref) / ref); }
  }
  CHECK(worst <= 1e-13);
}

TEST_CASE("weight is zero at the pole")
{
  auto const p = geometric_potential(0.5, 2.0, 1.0);
  CHECK(std::isinf(eval_W(p, 2.0)));
  CHECK(std::exp(-8 * eval_W(p, 2.0)) == 0.0);
  CHECK_THROWS_AS(eval_V(p, 2.0), Error);
  try {
    eval_V(p, 2.0);
  } catch (Error const &e) {
    CHECK(e.code() == ErrorCode::SingularPoint);
  }
}

TEST_CASE("series consistency inside |a|/2")
{
  Cx const a(-1.1, 1.6);
  double const beta = 0.7;
  auto const p = geometric_potential(beta, a, 1.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0, 1);
  for (int i = 0; i < 500; ++i) {
    Cx const z = std::polar(0.5 * std::abs(a) * std::sqrt(U(rng)), 2 * M_PI * U(rng));
    Cx s = 0, zk = 1;
    for (int k = 1; k <= 60; ++k) {
      zk *= z;
      s += -beta / k * std::pow(a, -k) * zk;
    }
    CHECK(std::abs(eval_V(p, z) - s) <= 1e-12);
  }
}

TEST_CASE("W is rotation invariant")
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-2, 2);
  for (int i = 0; i < 200; ++i) {
    Cx const z(U(rng), U(rng));
    Cx const rot = std::polar(1.0, U(rng));
    double const w0 = eval_W(geometric_potential(0.4, 1.7, 1.0), z);
    double const w1 = eval_W(geometric_potential(0.4, 1.7 * rot, 1.0), z * rot);
    CHECK(w1 == doctest::Approx(w0).epsilon(1e-13));
  }
}

TEST_CASE("log_weight agrees in both precisions")
{
  auto const p = geometric_potential(0.5, 2.0, 1.0);
  Cx const z(0.7, -0.4);
  double const d = log_weight<double>(p, 20.0, z);
  Quad const q = log_weight<Quad>(p, Quad(20), to_cx<Quad>(z));
  CHECK(d == doctest::Approx(-20 * eval_W(p, z)).epsilon(1e-14));
  CHECK(std::abs(double(q) - d) <= 1e-13 * std::abs(d));
}

TEST_CASE("confinement")
{
  CHECK(check_confinement(geometric_potential(0.5, 2.0, 1.0), 8, 16));
  CHECK(check_confinement(geometric_potential(0.0, 2.0, 1.0), 8, 16));
  Explicit e;
  e.t = {0.0, 0.6};
  CHECK_FALSE(check_confinement(Potential(MomentData{1.0, e}), 8, 16));
  e.t = {0.0, 0.2};
  CHECK(check_confinement(Potential(MomentData{1.0, e}), 8, 16));
}

TEST_CASE("truncated explicit lists refuse evaluation beyond the tail bound")
{
  Explicit e;
  e.t = {0.5, 0.25, 0.125, 0.0625};
  e.truncated = true;
  Potential const p(MomentData{1.0, e});
  CHECK_NOTHROW(eval_V(p, 1e-4));
  try {
    eval_V(p, 1.5);
    FAIL("expected EvalOutsideDomain");
  } catch (Error const &err) {
    CHECK(err.code() == ErrorCode::EvalOutsideDomain);
  }
}

TEST_CASE("invalid moment data")
{
  CHECK_THROWS_AS(geometric_potential(0.5, 0.0, 1.0), Error);
  CHECK_THROWS_AS(geometric_potential(0.5, 2.0, -1.0), Error);
  CHECK_THROWS_AS(geometric_potential(-0.5, 2.0, 1.0), Error);
}
