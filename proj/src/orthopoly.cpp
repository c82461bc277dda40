#include "lgop/orthopoly.hpp"
#include "lgop/roots.hpp"

#include <cmath>
#include <limits>

namespace lgop {

template <typename Real> std::vector<Complex<Real>> OrthoBasis<Real>::scaled_coefficients(int k) const
{
  using std::sqrt;
  std::vector<Complex<Real>> c(k + 1);
  Real fact = 1;
  for (int j = 0; j <= k; ++j) {
    if (j > 0) { fact *= Real(j); }
    c[j] = C(k, j) / sqrt(fact);
  }
  return c;
}

template <typename Real> GramMatrix<Real> compute_gram(Potential const &p, int n, double t0, GramOptions const &opt)
{
  if (n < 0) { throw Error(ErrorCode::InvalidInput, "degree must be nonnegative"); }
  if (!(t0 > 0)) { throw Error(ErrorCode::InvalidInput, "t0 must be positive"); }
  double const N = opt.N ? *opt.N : (n > 0 ? n / t0 : 1 / t0);
  auto const grid = build_grid<Real>(p, N, n, opt.grid);
  GramMatrix<Real> g{n, N, gram_matrix<Real>(grid, n, opt.grid.threads)};
  if (opt.check_refinement) {
    GridOptions fine = opt.grid;
    fine.radial_scale *= 2;
    fine.angular_scale *= 2;
    auto const G2 = gram_matrix<Real>(build_grid<Real>(p, N, n, fine), n, opt.grid.threads);
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) {
        using std::abs;
        using std::sqrt;
        Real const s = sqrt(abs(g.entries(i, i)) * abs(g.entries(j, j)));
        if (abs(G2(i, j) - g.entries(i, j)) > Real(opt.refinement_tol) * s) {
          throw Error(ErrorCode::QuadratureUnstable, "grid refinement changed the Gram matrix");
        }
      }
    }
  }
  return g;
}

template <typename Real> OrthoBasis<Real> orthogonalize(GramMatrix<Real> const &g, Potential const &p, double t0)
{
  int const n1 = g.n + 1;
  MatrixC<Real> L = MatrixC<Real>::Zero(n1, n1);
  // explicit Cholesky so the failing pivot is reported
  for (int j = 0; j < n1; ++j) {
    using std::sqrt;
    using std::conj;
    Real d = g.entries(j, j).real();
    for (int k = 0; k < j; ++k) { d -= (L(j, k) * conj(L(j, k))).real(); }
    if (!(d > 0)) {
      throw Error(ErrorCode::NotPositiveDefinite, "Cholesky pivot " + std::to_string(j) + " is not positive");
    }
    Real const ljj = sqrt(d);
    L(j, j) = Complex<Real>(ljj, 0);
    for (int i = j + 1; i < n1; ++i) {
      Complex<Real> s = g.entries(i, j);
      for (int k = 0; k < j; ++k) { s -= L(i, k) * conj(L(j, k)); }
      L(i, j) = s / ljj;
    }
  }
  MatrixC<Real> const I = MatrixC<Real>::Identity(n1, n1);
  MatrixC<Real> C = L.template triangularView<Eigen::Lower>().solve(I);
  for (int k = 0; k < n1; ++k) {
    for (int j = k + 1; j < n1; ++j) { C(k, j) = Complex<Real>(0); }
  }
  return OrthoBasis<Real>{g.n, g.N, t0, p, std::move(C)};
}

template <typename Real> double log_density(OrthoBasis<Real> const &b, int k, Cx z)
{
  using std::abs;
  using std::log;
  using std::sqrt;
  if (k < 0 || k > b.n) { throw Error(ErrorCode::InvalidInput, "degree out of range"); }
  Real const N(b.N);
  Real const lw = log_weight<Real>(b.potential, N, to_cx<Real>(z));
  if (lw == -std::numeric_limits<Real>::infinity()) { return -std::numeric_limits<double>::infinity(); }
  auto const c = b.scaled_coefficients(k);
  Complex<Real> const s = sqrt(N) * to_cx<Real>(z);
  // Horner with exponent tracking
  Real const big = Real(1e100);
  Real const lbig = log(big);
  Real shift = 0, inv = 1;
  Complex<Real> acc(0);
  for (std::size_t j = c.size(); j-- > 0;) {
    acc = acc * s + c[j] * inv;
    if (abs(acc) > big) {
      acc /= big;
      inv /= big;
      shift += lbig;
    }
  }
  Real const mag = abs(acc);
  if (mag == 0) { return -std::numeric_limits<double>::infinity(); }
  Real const lp = log(mag) + shift + log(N / boost::math::constants::pi<Real>()) / 2;
  return double(2 * lp + lw);
}

template <typename Real> double eval_density(OrthoBasis<Real> const &b, int k, Cx z)
{
  return std::exp(log_density(b, k, z));
}

template <typename Real> std::vector<Cx> zeros(OrthoBasis<Real> const &b, int k, std::uint64_t seed)
{
  using std::sqrt;
  if (k < 1 || k > b.n) { throw Error(ErrorCode::InvalidInput, "degree out of range"); }
  auto const r = aberth<Real>(b.scaled_coefficients(k), seed);
  Real const sN = sqrt(Real(b.N));
  std::vector<Cx> out;
  out.reserve(r.size());
  for (auto const &x : r) { out.push_back(to_double<Real>(x / sN)); }
  return out;
}

template <typename Real> double log_density_potential(OrthoBasis<Real> const &b, int k, Cx z)
{
  return std::max(-1e6, log_density(b, k, z) / b.N);
}

double zero_log_potential(std::vector<Cx> const &zs, Cx z, double N)
{
  double s = 0;
  for (auto const &x : zs) { s += std::log(std::norm(z - x)); }
  return std::max(-1e6, s / N);
}

template <typename Real> double orthonormality_residual(OrthoBasis<Real> const &b, MatrixC<Real> const &G)
{
  using std::abs;
  MatrixC<Real> const R = b.C * G * b.C.adjoint() - MatrixC<Real>::Identity(b.n + 1, b.n + 1);
  Real m = 0;
  for (int i = 0; i < R.rows(); ++i) {
    for (int j = 0; j < R.cols(); ++j) { m = std::max(m, Real(abs(R(i, j)))); }
  }
  return double(m);
}

#define LGOP_INSTANTIATE(R)                                                                                         \
  template struct OrthoBasis<R>;                                                                                    \
  template GramMatrix<R> compute_gram<R>(Potential const &, int, double, GramOptions const &);                   \
  template OrthoBasis<R> orthogonalize<R>(GramMatrix<R> const &, Potential const &, double);                     \
  template double log_density<R>(OrthoBasis<R> const &, int, Cx);                                                \
  template double eval_density<R>(OrthoBasis<R> const &, int, Cx);                                               \
  template std::vector<Cx> zeros<R>(OrthoBasis<R> const &, int, std::uint64_t);                                  \
  template double log_density_potential<R>(OrthoBasis<R> const &, int, Cx);                                     \
  template double orthonormality_residual<R>(OrthoBasis<R> const &, MatrixC<R> const &);

LGOP_INSTANTIATE(double)
LGOP_INSTANTIATE(Quad)

AnyBasis build_basis(Potential const &p, int n, double t0, Precision prec, GramOptions const &opt)
{
  if (use_extended(prec, n)) { return orthogonalize<Quad>(compute_gram<Quad>(p, n, t0, opt), p, t0); }
  try {
    return orthogonalize<double>(compute_gram<double>(p, n, t0, opt), p, t0);
  } catch (Error const &e) {
    // pivot breakdown in double: escalate
    if (prec != Precision::Auto || e.code() != ErrorCode::NotPositiveDefinite) { throw; }
  }
  return orthogonalize<Quad>(compute_gram<Quad>(p, n, t0, opt), p, t0);
}

int degree(AnyBasis const &b)
{
  return std::visit([](auto const &x) { return x.n; }, b);
}

double scale_N(AnyBasis const &b)
{
  return std::visit([](auto const &x) { return x.N; }, b);
}

double log_density(AnyBasis const &b, int k, Cx z)
{
  return std::visit([&](auto const &x) { return log_density(x, k, z); }, b);
}

double eval_density(AnyBasis const &b, int k, Cx z)
{
  return std::visit([&](auto const &x) { return eval_density(x, k, z); }, b);
}

std::vector<Cx> zeros(AnyBasis const &b, int k, std::uint64_t seed)
{
  return std::visit([&](auto const &x) { return zeros(x, k, seed); }, b);
}

bool extended(AnyBasis const &b) { return std::holds_alternative<OrthoBasis<Quad>>(b); }

} // namespace lgop
