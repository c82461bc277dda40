#pragma once

#include "moments.hpp"
#include "types.hpp"

#include <string>
#include <vector>

namespace lgop {

struct GridOptions
{
  double radial_scale = 1;  // >1 shrinks panels
  double angular_scale = 1; // >1 adds angular nodes
  int threads = 1;
};

// polar tensor grid: radial composite Gauss-Legendre x periodic trapezoid in theta
template <typename Real> struct PlanarGrid
{
  Potential potential;
  Real N;
  int max_degree = 0;
  int radial_order = 0;
  int panels = 0;
  int angular = 0;
  Real outer_radius;
  std::vector<Real> radii;
  std::vector<Real> radial_weights;   // includes the Jacobian r
  std::vector<Complex<Real>> unit;    // e^{2 pi i m / angular}
  std::vector<Real> log_weight;       // -N W at (l, k), row-major in l

  std::size_t size() const { return radii.size() * std::size_t(angular); }
  Complex<Real> node(std::size_t l, int k) const { return radii[l] * unit[k]; }
  Real weight(std::size_t l) const;
  std::string describe() const;
};

template <typename Real>
PlanarGrid<Real> build_grid(Potential const &p, double N, int max_degree, GridOptions const &opt = {});

// sum_j w_j f(z_j) e^{-N W(z_j)} with fixed blocked reduction order
template <typename Real, typename F> Complex<Real> integrate(PlanarGrid<Real> const &g, F &&f, int threads = 1);

// prewhitened Gram matrix of e_k(z) = z^k sqrt(N^{k+1}/(pi k!)) for k = 0..n
template <typename Real> MatrixC<Real> gram_matrix(PlanarGrid<Real> const &g, int n, int threads = 1);

// closed-form raw Gram entry for integer m = N beta
template <typename Real> Complex<Real> gram_oracle_integer_beta(int i, int j, int m, Cx a, double N);
// checks integrality of m
int integer_beta(double beta, double N);
template <typename Real> MatrixC<Real> prewhitened_oracle(int n, int m, Cx a, double N);

} // namespace lgop

#include "quadrature_impl.hpp"
