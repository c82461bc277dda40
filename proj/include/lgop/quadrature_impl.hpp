#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss.hpp>

namespace lgop {

namespace detail {

template <typename Real> constexpr bool is_quad = std::is_same_v<Real, Quad>;

// Neumaier summation; plain summation for extended precision
template <typename Real> struct Accumulator
{
  Real sum = 0, c = 0;
  void add(Real x)
  {
    if constexpr (is_quad<Real>) {
      sum += x;
    } else {
      Real const t = sum + x;
      if (std::abs(sum) >= std::abs(x)) {
        c += (sum - t) + x;
      } else {
        c += (x - t) + sum;
      }
      sum = t;
    }
  }
  Real value() const { return sum + c; }
};

template <typename Real> struct Rule
{
  std::vector<Real> x, w; // on [-1, 1]
};

template <typename Real, unsigned Points> Rule<Real> make_rule()
{
  auto const &ab = boost::math::quadrature::gauss<Real, Points>::abscissa();
  auto const &wt = boost::math::quadrature::gauss<Real, Points>::weights();
  Rule<Real> r;
  for (std::size_t i = ab.size(); i-- > 0;) {
    if (ab[i] == 0) { continue; }
    r.x.push_back(-ab[i]);
    r.w.push_back(wt[i]);
  }
  for (std::size_t i = 0; i < ab.size(); ++i) {
    r.x.push_back(ab[i]);
    r.w.push_back(wt[i]);
  }
  return r;
}

template <typename Real> Rule<Real> const &radial_rule()
{
  if constexpr (is_quad<Real>) {
    static Rule<Real> const r = make_rule<Real, 30>();
    return r;
  } else {
    static Rule<Real> const r = make_rule<Real, 20>();
    return r;
  }
}

// e-folds kept below the integrand peak
template <typename Real> constexpr double drop() { return is_quad<Real> ? 84.0 : 42.0; }

// log of max over theta of r^{2n+1} e^{-N W}
inline double envelope(Potential const &p, double N, int n, double r)
{
  double const lr = (2 * n + 1) * std::log(r);
  if (p.data.geometric()) {
    auto const &g = p.data.geo();
    return lr - N * r * r + 2 * N * g.beta * std::log1p(r / std::abs(g.a));
  }
  double best = -std::numeric_limits<double>::infinity();
  int const K = 128 + 16 * int(std::get<Explicit>(p.data.kind).t.size());
  for (int k = 0; k < K; ++k) {
    best = std::max(best, -N * eval_W(p, std::polar(r, 2 * M_PI * k / K)));
  }
  return lr + best;
}

// partition [0, n) into fixed-size blocks and run body(block) on up to `threads` workers
template <typename Body> void for_blocks(std::size_t blocks, int threads, Body &&body)
{
  int const T = std::max(1, std::min<int>(threads, int(blocks)));
  if (T == 1) {
    for (std::size_t b = 0; b < blocks; ++b) { body(b); }
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < T; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t b = t; b < blocks; b += T) { body(b); }
    });
  }
  for (auto &th : pool) { th.join(); }
}

inline constexpr std::size_t kBlock = 16;

template <typename Real> std::vector<Real> log_factorials(int n)
{
  using std::log;
  std::vector<Real> lf(n + 1, Real(0));
  for (int k = 1; k <= n; ++k) { lf[k] = lf[k - 1] + log(Real(k)); }
  return lf;
}

} // namespace detail

template <typename Real> Real PlanarGrid<Real>::weight(std::size_t l) const
{
  return radial_weights[l] * 2 * boost::math::constants::pi<Real>() / Real(angular);
}

template <typename Real> std::string PlanarGrid<Real>::describe() const
{
  std::ostringstream os;
  os << "polar grid: " << panels << " radial panels x GL" << radial_order << ", " << angular
     << " angular nodes, R_cut=" << double(outer_radius);
  return os.str();
}

template <typename Real>
PlanarGrid<Real> build_grid(Potential const &p, double N, int max_degree, GridOptions const &opt)
{
  using std::log;
  if (!(N > 0)) { throw Error(ErrorCode::InvalidInput, "N must be positive"); }
  if (!check_confinement(p, N, 2 * max_degree + 2)) {
    throw Error(ErrorCode::NotConfining, "weight has no finite moments of the required order");
  }
  int const n = max_degree;
  double const D = detail::drop<Real>();

  // radial scan for the envelope peak and the cutoff
  double const dr = 0.02 / std::sqrt(N);
  double emax = -std::numeric_limits<double>::infinity();
  double rcut = 0;
  int below = 0;
  for (int s = 1; s < 2000000; ++s) {
    double const r = s * dr;
    double const e = detail::envelope(p, N, n, r);
    if (e > emax) {
      emax = e;
      below = 0;
    }
    if (e < emax - D) {
      if (++below == 1) { rcut = r; }
      if (below > 200) { break; }
    } else {
      below = 0;
    }
  }
  if (rcut == 0) { throw Error(ErrorCode::NotConfining, "integrand envelope does not decay"); }

  PlanarGrid<Real> g{p, Real(N), 0, 0, 0, 0, Real(0), {}, {}, {}, {}};
  g.max_degree = n;
  g.outer_radius = Real(rcut);
  auto const &rule = detail::radial_rule<Real>();
  g.radial_order = int(rule.x.size());

  std::vector<double> edges;
  double const width = 0.5 / std::sqrt(N) / opt.radial_scale;
  int const P = std::max(4, int(std::ceil(rcut / width)));
  for (int k = 0; k <= P; ++k) { edges.push_back(rcut * k / P); }
  double absa = 0;
  if (p.data.geometric() && p.beta() > 0) {
    absa = std::abs(p.data.geo().a);
    if (absa < rcut) {
      edges.push_back(absa);
      std::sort(edges.begin(), edges.end());
      edges.erase(std::unique(edges.begin(), edges.end(),
                              [&](double x, double y) { return std::abs(x - y) < 1e-3 * width; }),
                  edges.end());
      if (edges.back() < rcut) { edges.back() = rcut; }
    }
  }
  g.panels = int(edges.size()) - 1;
  for (int k = 0; k < g.panels; ++k) {
    Real const lo = Real(edges[k]), hi = Real(edges[k + 1]);
    Real const half = (hi - lo) / 2, mid = (hi + lo) / 2;
    for (std::size_t q = 0; q < rule.x.size(); ++q) {
      Real const r = mid + half * rule.x[q];
      g.radii.push_back(r);
      g.radial_weights.push_back(half * rule.w[q] * r);
    }
  }

  // angular count: floor from the degree plus an aliasing estimate
  double const beta = p.beta();
  int M = 4 * (n + 1) + 2 * int(std::ceil(N * beta));
  if (p.data.geometric() && beta > 0) {
    // |1 - z/a|^{2m} is a trig polynomial of degree m for integer m; otherwise
    // bound its Fourier tail by a Cauchy estimate on shells away from |a|
    double const m = N * beta;
    bool const integral = std::abs(m - std::round(m)) < 1e-12 * std::max(1.0, m);
    if (integral) {
      M = std::max(M, n + int(std::round(m)) + 1);
    } else {
      M += 2 * int(std::ceil(m));
      double kmax = 0;
      for (auto const &rl : g.radii) {
        double const r = double(rl);
        double const q = std::min(r / absa, absa / r);
        if (q > 0.9) { continue; }
        double const e = detail::envelope(p, N, n, r) - emax;
        double const num = e + 2 * m * std::log((1 + std::sqrt(q)) / (1 + q)) + D;
        if (num > 0) { kmax = std::max(kmax, 2 * num / -std::log(q)); }
      }
      M = std::max(M, n + int(std::ceil(kmax)));
    }
  } else if (!p.data.geometric()) {
    auto const &t = std::get<Explicit>(p.data.kind).t;
    double spread = 0;
    for (std::size_t k = 0; k < t.size(); ++k) {
      spread += double(k + 1) * std::abs(t[k]) * std::pow(rcut, double(k + 1));
    }
    M = std::max(M, n + int(std::ceil(4 * N * spread + D)));
  }
  M = int(std::ceil(M * opt.angular_scale));
  M = std::min(16384, (M + 7) / 8 * 8);
  g.angular = M;
  g.unit.resize(M);
  Real const twopi = 2 * boost::math::constants::pi<Real>();
  for (int k = 0; k < M; ++k) {
    using std::cos;
    using std::sin;
    Real const th = twopi * Real(k) / Real(M);
    g.unit[k] = Complex<Real>(cos(th), sin(th));
  }

  std::size_t const L = g.radii.size();
  g.log_weight.resize(L * M);
  std::size_t const blocks = (L + detail::kBlock - 1) / detail::kBlock;
  detail::for_blocks(blocks, opt.threads, [&](std::size_t b) {
    for (std::size_t l = b * detail::kBlock; l < std::min(L, (b + 1) * detail::kBlock); ++l) {
      for (int k = 0; k < M; ++k) { g.log_weight[l * M + k] = log_weight<Real>(p, g.N, g.node(l, k)); }
    }
  });
  return g;
}

template <typename Real, typename F> Complex<Real> integrate(PlanarGrid<Real> const &g, F &&f, int threads)
{
  using std::exp;
  std::size_t const L = g.radii.size();
  int const M = g.angular;
  std::size_t const blocks = (L + detail::kBlock - 1) / detail::kBlock;
  std::vector<Complex<Real>> partial(blocks);
  detail::for_blocks(blocks, threads, [&](std::size_t b) {
    detail::Accumulator<Real> re, im;
    for (std::size_t l = b * detail::kBlock; l < std::min(L, (b + 1) * detail::kBlock); ++l) {
      Real const w = g.weight(l);
      for (int k = 0; k < M; ++k) {
        Real const lw = g.log_weight[l * M + k];
        if (lw == -std::numeric_limits<Real>::infinity()) { continue; }
        Complex<Real> const v = f(g.node(l, k)) * (w * exp(lw));
        re.add(v.real());
        im.add(v.imag());
      }
    }
    partial[b] = Complex<Real>(re.value(), im.value());
  });
  Complex<Real> total(0);
  for (auto const &v : partial) { total += v; }
  return total;
}

template <typename Real> MatrixC<Real> gram_matrix(PlanarGrid<Real> const &g, int n, int threads)
{
  using std::exp;
  using std::log;
  using std::sqrt;
  if (n > g.max_degree) { throw Error(ErrorCode::InvalidInput, "degree exceeds grid max_degree"); }
  std::size_t const L = g.radii.size();
  int const M = g.angular;
  int const n1 = n + 1;
  Real const N = g.N;
  Real const pi = boost::math::constants::pi<Real>();
  Real const sqrtN = sqrt(N);
  auto const lf = detail::log_factorials<Real>(n);
  std::size_t const blocks = (L + detail::kBlock - 1) / detail::kBlock;
  std::vector<MatrixC<Real>> partial(blocks);

  detail::for_blocks(blocks, threads, [&](std::size_t b) {
    MatrixC<Real> acc = MatrixC<Real>::Zero(n1, n1);
    std::vector<Real> w(M);
    std::vector<Complex<Real>> F(n1);
    std::vector<Real> E(n1);
    for (std::size_t l = b * detail::kBlock; l < std::min(L, (b + 1) * detail::kBlock); ++l) {
      Real const r = g.radii[l];
      Real const rho = sqrtN * r;
      Real const rho2 = rho * rho;
      Real shift = -std::numeric_limits<Real>::infinity();
      for (int k = 0; k < M; ++k) { shift = std::max(shift, g.log_weight[l * M + k] + rho2); }
      if (shift == -std::numeric_limits<Real>::infinity()) { continue; }
      for (int k = 0; k < M; ++k) { w[k] = exp(g.log_weight[l * M + k] + rho2 - shift); }
      // angular Fourier sums F(d) = sum_k w_k e^{i d theta_k}
      for (int d = 0; d < n1; ++d) {
        detail::Accumulator<Real> re, im;
        for (int k = 0; k < M; ++k) {
          Complex<Real> const &u = g.unit[(std::size_t(d) * k) % M];
          re.add(w[k] * u.real());
          im.add(w[k] * u.imag());
        }
        F[d] = Complex<Real>(re.value(), im.value());
      }
      Real const lrho = log(rho);
      for (int i = 0; i < n1; ++i) { E[i] = exp(Real(i) * lrho - lf[i] / 2 + (shift - rho2) / 2); }
      Real const c = g.weight(l) * N / pi;
      for (int i = 0; i < n1; ++i) {
        for (int j = i; j < n1; ++j) {
          // e^{i(i-j)theta}: F(i-j) = conj(F(j-i))
          Complex<Real> const f = F[j - i];
          Real const s = c * E[i] * E[j];
          acc(i, j) += Complex<Real>(s * f.real(), -s * f.imag());
        }
      }
    }
    partial[b] = std::move(acc);
  });

  MatrixC<Real> G = MatrixC<Real>::Zero(n1, n1);
  for (auto const &P : partial) {
    if (P.size()) { G += P; }
  }
  for (int i = 0; i < n1; ++i) {
    G(i, i) = Complex<Real>(G(i, i).real(), Real(0));
    for (int j = i + 1; j < n1; ++j) {
      using std::conj;
      G(j, i) = conj(G(i, j));
    }
  }
  return G;
}

inline int integer_beta(double beta, double N)
{
  double const m = beta * N;
  double const mr = std::round(m);
  if (std::abs(m - mr) > 1e-12 * std::max(1.0, m) || mr < 0) {
    throw Error(ErrorCode::NonIntegerBeta, "N*beta is not a nonnegative integer");
  }
  return int(mr);
}

namespace detail {

// sum over p, q with i + p = j + q of binomials and Gaussian moments; term(p, q, s) supplies the moment factor
template <typename Real, typename Moment>
Complex<Real> oracle_sum(int i, int j, int m, Cx a, Moment &&moment)
{
  using std::pow;
  Complex<Real> const x = Real(-1) / to_cx<Real>(a);
  Complex<Real> xb(x.real(), -x.imag());
  std::vector<Real> binom(m + 1, Real(1));
  for (int k = 1; k <= m; ++k) { binom[k] = binom[k - 1] * Real(m - k + 1) / Real(k); }
  std::vector<Complex<Real>> xp(m + 1, Complex<Real>(1)), xbp(m + 1, Complex<Real>(1));
  for (int k = 1; k <= m; ++k) {
    xp[k] = xp[k - 1] * x;
    xbp[k] = xbp[k - 1] * xb;
  }
  Complex<Real> sum(0);
  for (int p = 0; p <= m; ++p) {
    int const q = i + p - j;
    if (q < 0 || q > m) { continue; }
    sum += binom[p] * binom[q] * xp[p] * xbp[q] * moment(p, i + p);
  }
  return sum;
}

} // namespace detail

template <typename Real> Complex<Real> gram_oracle_integer_beta(int i, int j, int m, Cx a, double N)
{
  using std::exp;
  using std::log;
  if (m < 0) { throw Error(ErrorCode::NonIntegerBeta, "m must be nonnegative"); }
  auto const lf = detail::log_factorials<Real>(std::max(i, j) + m);
  Real const pi = boost::math::constants::pi<Real>();
  Real const lN = log(Real(N));
  return detail::oracle_sum<Real>(i, j, m, a, [&](int, int s) { return pi * exp(lf[s] - Real(s + 1) * lN); });
}

template <typename Real> MatrixC<Real> prewhitened_oracle(int n, int m, Cx a, double N)
{
  using std::exp;
  using std::log;
  auto const lf = detail::log_factorials<Real>(n + m);
  Real const lN = log(Real(N));
  MatrixC<Real> G(n + 1, n + 1);
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      // w_i w_j pi s!/N^{s+1} = s!/sqrt(i! j!) N^{(i+j)/2 - s}
      G(i, j) = detail::oracle_sum<Real>(i, j, m, a, [&](int, int s) {
        return exp(lf[s] - (lf[i] + lf[j]) / 2 + (Real(i + j) / 2 - Real(s)) * lN);
      });
    }
  }
  return G;
}

} // namespace lgop
