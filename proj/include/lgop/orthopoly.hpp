#pragma once

#include "moments.hpp"
#include "quadrature.hpp"
#include "types.hpp"

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace lgop {

template <typename Real> struct GramMatrix
{
  int n = 0;
  double N = 0;
  MatrixC<Real> entries; // prewhitened basis
};

template <typename Real> struct OrthoBasis
{
  int n = 0;
  double N = 0;
  double t0 = 0;
  Potential potential;
  MatrixC<Real> C; // P_k = sum_j C(k, j) e_j

  // coefficients of P_k in s = sqrt(N) z, without the sqrt(N/pi) prefactor
  std::vector<Complex<Real>> scaled_coefficients(int k) const;
};

struct GramOptions
{
  std::optional<double> N; // default n / t0
  GridOptions grid;
  bool check_refinement = false;
  double refinement_tol = 1e-10;
};

template <typename Real> GramMatrix<Real> compute_gram(Potential const &p, int n, double t0, GramOptions const &opt = {});
template <typename Real> OrthoBasis<Real> orthogonalize(GramMatrix<Real> const &g, Potential const &p, double t0);

template <typename Real> double log_density(OrthoBasis<Real> const &b, int k, Cx z);
template <typename Real> double eval_density(OrthoBasis<Real> const &b, int k, Cx z);
template <typename Real> std::vector<Cx> zeros(OrthoBasis<Real> const &b, int k, std::uint64_t seed = 1);
template <typename Real> double log_density_potential(OrthoBasis<Real> const &b, int k, Cx z);
double zero_log_potential(std::vector<Cx> const &zs, Cx z, double N);

// max_ij |(C G C^H - I)_ij|
template <typename Real> double orthonormality_residual(OrthoBasis<Real> const &b, MatrixC<Real> const &G);

using AnyBasis = std::variant<OrthoBasis<double>, OrthoBasis<Quad>>;

AnyBasis build_basis(Potential const &p, int n, double t0, Precision prec, GramOptions const &opt = {});

int degree(AnyBasis const &b);
double scale_N(AnyBasis const &b);
double log_density(AnyBasis const &b, int k, Cx z);
double eval_density(AnyBasis const &b, int k, Cx z);
std::vector<Cx> zeros(AnyBasis const &b, int k, std::uint64_t seed = 1);
bool extended(AnyBasis const &b);

} // namespace lgop
