#pragma once

#include <stdexcept>
#include <string>

namespace rydgate {

// Base class for all library errors. The CLI maps ConfigError to exit
// code 2 and every other Error to exit code 3, printing kind() on stderr.
class Error : public std::runtime_error {
public:
    Error(const std::string& kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(kind) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define RYDGATE_DEFINE_ERROR(NAME)                                        \
    class NAME : public Error {                                           \
    public:                                                               \
        explicit NAME(const std::string& what) : Error(#NAME, what) {}    \
    }

RYDGATE_DEFINE_ERROR(DimensionMismatch);
RYDGATE_DEFINE_ERROR(NonHermitianInput);
RYDGATE_DEFINE_ERROR(TimeOutOfRange);
RYDGATE_DEFINE_ERROR(NormDrift);
RYDGATE_DEFINE_ERROR(TraceDrift);
RYDGATE_DEFINE_ERROR(PositivityLoss);
RYDGATE_DEFINE_ERROR(AmbiguousTracking);
RYDGATE_DEFINE_ERROR(DegenerateGap);
RYDGATE_DEFINE_ERROR(DegenerateAngle);
RYDGATE_DEFINE_ERROR(LowReturn);
RYDGATE_DEFINE_ERROR(BracketInvalid);
RYDGATE_DEFINE_ERROR(SupportOutsideQubitSubspace);
RYDGATE_DEFINE_ERROR(ConfigError);
RYDGATE_DEFINE_ERROR(SolverError);

#undef RYDGATE_DEFINE_ERROR

}  // namespace rydgate
