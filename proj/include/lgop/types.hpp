#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/complex128.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/float128.hpp>
#include <Eigen/Dense>

namespace lgop {

using Cx = std::complex<double>;
using Quad = boost::multiprecision::float128;
using CxQuad = boost::multiprecision::complex128;

template <typename Real> struct ComplexOf { using type = std::complex<Real>; };
template <> struct ComplexOf<Quad> { using type = CxQuad; };
template <typename Real> using Complex = typename ComplexOf<Real>::type;

template <typename Real> using MatrixC = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real> using VectorC = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;

enum class Precision { Double, Extended, Auto };

// n above this switches Auto to extended precision
inline constexpr int kExtendedThreshold = 24;

inline bool use_extended(Precision p, int n)
{
  return p == Precision::Extended || (p == Precision::Auto && n > kExtendedThreshold);
}

template <typename Real> Complex<Real> to_cx(Cx z) { return Complex<Real>(Real(z.real()), Real(z.imag())); }
template <typename Real> Cx to_double(Complex<Real> const &z) { return Cx(double(z.real()), double(z.imag())); }

enum class ErrorCode {
  InvalidInput,
  EvalOutsideDomain,
  SingularPoint,
  NotConfining,
  RegimeViolation,
  NoConvergence,
  DegenerateMap,
  InteriorPoint,
  CuspSingular,
  SelfIntersection,
  QuadratureUnstable,
  NonIntegerBeta,
  NotPositiveDefinite,
  RootFindingFailure,
  DegenerateElimination,
  BranchPointHit,
  PathCrossesCut,
  NoInteriorComponent,
  TrajectoryFailure
};

char const *to_string(ErrorCode c);

class Error : public std::runtime_error
{
public:
  Error(ErrorCode c, std::string const &msg)
    : std::runtime_error(std::string(to_string(c)) + ": " + msg)
    , code_(c)
  {
  }
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

// CLI exit status for an error
int exit_code(ErrorCode c);

} // namespace lgop
