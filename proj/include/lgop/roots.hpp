#pragma once

#include "types.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace lgop {

template <typename Real> struct PolyEval
{
  Complex<Real> p, dp;
  Real scale; // sum |c_j| |z|^j
};

// c ascending
template <typename Real> PolyEval<Real> horner(std::vector<Complex<Real>> const &c, Complex<Real> const &z)
{
  using std::abs;
  Complex<Real> p(0), dp(0);
  Real s(0);
  Real const az = abs(z);
  for (std::size_t j = c.size(); j-- > 0;) {
    dp = dp * z + p;
    p = p * z + c[j];
    s = s * az + abs(c[j]);
  }
  return {p, dp, s};
}

template <typename Real> Real backward_error(std::vector<Complex<Real>> const &c, Complex<Real> const &z)
{
  using std::abs;
  auto const e = horner<Real>(c, z);
  return e.scale > 0 ? abs(e.p) / e.scale : Real(0);
}

// all roots of sum c_j z^j by Aberth-Ehrlich iteration with seeded restarts
template <typename Real>
std::vector<Complex<Real>> aberth(std::vector<Complex<Real>> c, std::uint64_t seed, double tol = 1e-8, int restarts = 6)
{
  using std::abs;
  using std::pow;
  while (!c.empty() && c.back() == Complex<Real>(0)) { c.pop_back(); }
  if (c.size() < 2) { throw Error(ErrorCode::RootFindingFailure, "polynomial has no roots"); }
  std::vector<Complex<Real>> roots;
  std::size_t z0 = 0;
  while (c[z0] == Complex<Real>(0)) { ++z0; }
  roots.assign(z0, Complex<Real>(0));
  c.erase(c.begin(), c.begin() + z0);
  int const k = int(c.size()) - 1;
  if (k == 0) { return roots; }
  Complex<Real> const lead = c.back();
  for (auto &x : c) { x /= lead; }
  if (k == 1) {
    roots.push_back(-c[0]);
    return roots;
  }

  Real const eps = std::numeric_limits<Real>::epsilon() * 16;
  Real const R0 = pow(abs(c[0]), Real(1) / Real(k));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);

  for (int attempt = 0; attempt <= restarts; ++attempt) {
    double const rscale = attempt == 0 ? 1.0 : 0.5 + 1.5 * U(rng);
    double const offset = attempt == 0 ? 0.4 : 2 * M_PI * U(rng);
    std::vector<Complex<Real>> z(k);
    for (int i = 0; i < k; ++i) {
      double const th = 2 * M_PI * i / k + offset;
      z[i] = Real(rscale) * R0 * Complex<Real>(Real(std::cos(th)), Real(std::sin(th)));
    }
    std::vector<bool> done(k, false);
    for (int it = 0; it < 2000; ++it) {
      bool all = true;
      for (int i = 0; i < k; ++i) {
        if (done[i]) { continue; }
        auto const e = horner<Real>(c, z[i]);
        if (abs(e.p) <= eps * e.scale) {
          done[i] = true;
          continue;
        }
        Complex<Real> const ratio = e.p / e.dp;
        Complex<Real> s(0);
        for (int j = 0; j < k; ++j) {
          if (j != i) { s += Real(1) / (z[i] - z[j]); }
        }
        Complex<Real> const w = ratio / (Real(1) - ratio * s);
        z[i] -= w;
        if (abs(w) <= eps * abs(z[i])) {
          done[i] = true;
        } else {
          all = false;
        }
      }
      if (all) { break; }
    }
    // Newton polish
    for (auto &x : z) {
      for (int it = 0; it < 3; ++it) {
        auto const e = horner<Real>(c, x);
        if (e.dp == Complex<Real>(0)) { break; }
        Complex<Real> const y = x - e.p / e.dp;
        if (backward_error<Real>(c, y) < backward_error<Real>(c, x)) {
          x = y;
        } else {
          break;
        }
      }
    }
    bool ok = true;
    for (auto const &x : z) {
      if (!(backward_error<Real>(c, x) <= Real(tol))) { ok = false; }
    }
    if (ok) {
      roots.insert(roots.end(), z.begin(), z.end());
      return roots;
    }
  }
  throw Error(ErrorCode::RootFindingFailure, "residual target not met after restarts");
}

} // namespace lgop
