#ifndef ONECIRCUIT_ERRORS_HPP
#define ONECIRCUIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace onecircuit {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// measures
struct TailDegreeExceeded : Error { using Error::Error; };
struct NegativeSupport : Error { using Error::Error; };
struct AtomNotFound : Error { using Error::Error; };
struct EmptyMeasure : Error { using Error::Error; };

// q-series
struct DivergentProduct : Error { using Error::Error; };
struct ParameterOutOfRange : Error { using Error::Error; };
struct NotFound : Error { using Error::Error; };

// sequences
struct NonPositiveEntry : Error { using Error::Error; };

// graph
struct InvalidVertex : Error { using Error::Error; };

// weighted models
struct TruncationExhausted : Error { using Error::Error; };
struct EmptyPreimage : Error { using Error::Error; };
struct ThetaOutOfRange : Error { using Error::Error; };
struct SeedViolatesI10 : Error { using Error::Error; };
struct MonotonicityViolated : Error { using Error::Error; };

// extension checks; `defect` is the measured violation size
struct ConditionViolated : Error {
  double defect;
  ConditionViolated(const std::string& msg, double d) : Error(msg), defect(d) {}
};
struct ConditionIBViolated : ConditionViolated { using ConditionViolated::ConditionViolated; };
struct ConditionICViolated : ConditionViolated { using ConditionViolated::ConditionViolated; };
struct ConditionIDViolated : ConditionViolated { using ConditionViolated::ConditionViolated; };

// exotic builds
struct SeedPairViolated : Error { using Error::Error; };
struct EulerPredicateFailed : Error { using Error::Error; };
struct EmptyBlock : Error { using Error::Error; };

}  // namespace onecircuit

#endif
