#include "lgop/types.hpp"

namespace lgop {

char const *to_string(ErrorCode c)
{
  switch (c) {
  case ErrorCode::InvalidInput: return "InvalidInput";
  case ErrorCode::EvalOutsideDomain: return "EvalOutsideDomain";
  case ErrorCode::SingularPoint: return "SingularPoint";
  case ErrorCode::NotConfining: return "NotConfining";
  case ErrorCode::RegimeViolation: return "RegimeViolation";
  case ErrorCode::NoConvergence: return "NoConvergence";
  case ErrorCode::DegenerateMap: return "DegenerateMap";
  case ErrorCode::InteriorPoint: return "InteriorPoint";
  case ErrorCode::CuspSingular: return "CuspSingular";
  case ErrorCode::SelfIntersection: return "SelfIntersection";
  case ErrorCode::QuadratureUnstable: return "QuadratureUnstable";
  case ErrorCode::NonIntegerBeta: return "NonIntegerBeta";
  case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
  case ErrorCode::RootFindingFailure: return "RootFindingFailure";
  case ErrorCode::DegenerateElimination: return "DegenerateElimination";
  case ErrorCode::BranchPointHit: return "BranchPointHit";
  case ErrorCode::PathCrossesCut: return "PathCrossesCut";
  case ErrorCode::NoInteriorComponent: return "NoInteriorComponent";
  case ErrorCode::TrajectoryFailure: return "TrajectoryFailure";
  }
  return "Unknown";
}

int exit_code(ErrorCode c)
{
  switch (c) {
  case ErrorCode::RegimeViolation: return 2;
  case ErrorCode::NoConvergence:
  case ErrorCode::DegenerateMap:
  case ErrorCode::InteriorPoint:
  case ErrorCode::CuspSingular:
  case ErrorCode::SelfIntersection: return 3;
  case ErrorCode::NotConfining:
  case ErrorCode::EvalOutsideDomain:
  case ErrorCode::SingularPoint:
  case ErrorCode::QuadratureUnstable:
  case ErrorCode::NonIntegerBeta: return 4;
  case ErrorCode::NotPositiveDefinite:
  case ErrorCode::RootFindingFailure: return 5;
  case ErrorCode::DegenerateElimination:
  case ErrorCode::BranchPointHit:
  case ErrorCode::PathCrossesCut:
  case ErrorCode::NoInteriorComponent:
  case ErrorCode::TrajectoryFailure: return 6;
  case ErrorCode::InvalidInput: return 1;
  }
  return 1;
}

} // namespace lgop
