#pragma once

#include <stdexcept>
#include <string>

namespace vplab {

/// Base class for all domain errors raised by geometric operations.
struct GeometryError : std::runtime_error {
    explicit GeometryError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when a boundary normal is requested at a ridge, vertex or edge
/// where the normal cone is more than one-dimensional.
struct NonUniqueNormalError : GeometryError {
    explicit NonUniqueNormalError(const std::string& msg) : GeometryError(msg) {}
};

/// Raised when a curvature-dependent operation hits a boundary point whose
/// generalized curvature vanishes (some indicatrix eigenvalue below floor).
struct FlatPointError : GeometryError {
    explicit FlatPointError(const std::string& msg) : GeometryError(msg) {}
};

/// Raised when fitted boundary data is inconsistent with convexity.
struct ConvexityError : GeometryError {
    explicit ConvexityError(const std::string& msg) : GeometryError(msg) {}
};

/// Raised when a statistical comparison cannot be resolved at the requested
/// significance (noise exceeds the effect size everywhere).
struct InconclusiveError : std::runtime_error {
    explicit InconclusiveError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace vplab
