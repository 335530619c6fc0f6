#pragma once

#include <stdexcept>
#include <string>

namespace displacemon {

/// Thrown when an input violates a documented precondition or invariant.
/// `field()` names the offending input, e.g. "BeamGeometry.ell".
class InvalidArgument : public std::invalid_argument {
public:
    InvalidArgument(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what)
        , field_(std::move(field))
    {
    }

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Thrown when a numerical routine cannot produce a trustworthy result.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const char* field, const char* what)
{
    if (!ok)
        throw InvalidArgument(field, what);
}

} // namespace detail
} // namespace displacemon
