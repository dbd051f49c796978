#pragma once

#include <stdexcept>
#include <string>

namespace ibdl {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct NonZeroMeanForSingularOperator : Error { using Error::Error; };
struct DegenerateCurve : Error { using Error::Error; };
struct CoincidentPoints : Error { using Error::Error; };
struct NotConverged : Error { using Error::Error; };
struct SolvabilityViolated : Error { using Error::Error; };
struct EmptyComplement : Error { using Error::Error; };
struct AmbiguousCorner : Error { using Error::Error; };
struct DegenerateSegment : Error { using Error::Error; };
struct EmptyRegion : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct SingularEvaluation : Error { using Error::Error; };
struct SingularSystem : Error { using Error::Error; };
struct UnknownProblem : Error { using Error::Error; };

/// Config-file / CLI usage errors; `field` names the offending key.
struct ConfigError : Error {
    std::string field;
    ConfigError(const std::string& field_, const std::string& what)
        : Error("config error [" + field_ + "]: " + what), field(field_) {}
};

}  // namespace ibdl
