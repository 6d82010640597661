#pragma once

#include <stdexcept>
#include <string>

namespace bnls {

class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define BNLS_DEFINE_ERROR(Name)                                                \
  class Name : public Error {                                                  \
  public:                                                                      \
    explicit Name(const std::string& msg) : Error(#Name ": " + msg) {}         \
  }

BNLS_DEFINE_ERROR(InvalidDimension);
BNLS_DEFINE_ERROR(InvalidResolution);
BNLS_DEFINE_ERROR(GridMismatch);
BNLS_DEFINE_ERROR(NonPositiveLambda);
BNLS_DEFINE_ERROR(ZeroState);
BNLS_DEFINE_ERROR(NonAdmissibleDirection);
BNLS_DEFINE_ERROR(ZeroDirection);
BNLS_DEFINE_ERROR(DegenerateQuartic);
BNLS_DEFINE_ERROR(NonPositiveQuadratic);
BNLS_DEFINE_ERROR(NonConvergence);
BNLS_DEFINE_ERROR(CollapseToZero);
BNLS_DEFINE_ERROR(DomainTooSmall);
BNLS_DEFINE_ERROR(WindowTooNarrow);
BNLS_DEFINE_ERROR(BelowNoiseFloor);
BNLS_DEFINE_ERROR(SolverBreakdown);
BNLS_DEFINE_ERROR(WeightDegenerate);
BNLS_DEFINE_ERROR(InvalidCap);
BNLS_DEFINE_ERROR(DegenerateThreshold);
BNLS_DEFINE_ERROR(PathCollapse);
BNLS_DEFINE_ERROR(ConfigInvalid);
BNLS_DEFINE_ERROR(TaskFailed);

#undef BNLS_DEFINE_ERROR

} // namespace bnls
