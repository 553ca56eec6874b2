#pragma once

#include <stdexcept>
#include <string>

namespace skyrme {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "Error"; }
};

#define SKYRME_ERROR(Name)                                                   \
    class Name : public Error {                                              \
    public:                                                                  \
        using Error::Error;                                                  \
        const char* kind() const noexcept override { return #Name; }         \
    };

SKYRME_ERROR(BoundsError)
SKYRME_ERROR(ResolutionError)
SKYRME_ERROR(GridMismatch)
SKYRME_ERROR(DegreeOverflow)
SKYRME_ERROR(SingularMetric)
SKYRME_ERROR(ConstraintViolated)
SKYRME_ERROR(MomentConditionFailed)
SKYRME_ERROR(ChartExit)
SKYRME_ERROR(NotRiemannian)
SKYRME_ERROR(TargetMismatch)
SKYRME_ERROR(TraceConstraintFailed)
SKYRME_ERROR(RankDeficient)
SKYRME_ERROR(ParamInconsistent)
SKYRME_ERROR(NormalizationFailed)
SKYRME_ERROR(ConfigError)

#undef SKYRME_ERROR

}  // namespace skyrme
