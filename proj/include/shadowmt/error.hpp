#pragma once

#include <stdexcept>
#include <string>

namespace shadowmt {

/// Absolute tolerance for mass and position equality.
inline constexpr double kEps = 1e-9;

/// Slack used for `a <= b` comparisons in the order checks.
inline double slack(double value) { return kEps * (1.0 + (value < 0 ? -value : value)); }

enum class ErrorKind {
    ZeroMass,
    OutOfRange,
    MassMismatch,
    BarycenterMismatch,
    NegativeMass,
    NotDominated,
    EmptySet,
    OutsideHull,
    MassError,
    NotInConvexOrder,
    BoundaryMismatch,
    OrderViolation,
    InvalidCost,
    DimensionMismatch,
    MaxStepsExceeded,
    Parse,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace shadowmt
