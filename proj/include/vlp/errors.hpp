#pragma once

#include <stdexcept>
#include <string>

namespace vlp {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A projection or Jacobian denominator (depth along the optical axis) is zero.
struct DegenerateDepth : Error { using Error::Error; };

// The point lies behind the camera under the fixed sign convention.
struct BehindCamera : Error { using Error::Error; };

struct EmptyScene : Error { using Error::Error; };
struct RankZero : Error { using Error::Error; };
struct NoValidPose : Error { using Error::Error; };
struct EmptyObservations : Error { using Error::Error; };
struct InvalidGrid : Error { using Error::Error; };
struct InsufficientData : Error { using Error::Error; };
struct NonPositiveX : Error { using Error::Error; };
struct SingularDesign : Error { using Error::Error; };
struct UnsupportedKind : Error { using Error::Error; };
struct InfeasibleSpacing : Error { using Error::Error; };
struct FixtureMissing : Error { using Error::Error; };

// Raised when two algebraic routes that must agree do not (e.g. a negative
// closed-form radicand far beyond roundoff). CLI maps this to exit code 3.
struct NumericalConsistencyError : Error { using Error::Error; };

// Invalid configuration; CLI maps this to exit code 2.
struct ConfigError : Error { using Error::Error; };

}  // namespace vlp
