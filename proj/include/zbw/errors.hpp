#pragma once

#include <stdexcept>
#include <string>

namespace zbw {

/// Thrown when an iterative numeric procedure cannot reach its requested
/// tolerance. Carries the achieved and requested error estimates so callers
/// can decide whether the partial result would have been usable.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, double achieved, double requested)
        : std::runtime_error(what), achieved_(achieved), requested_(requested) {}

    double achieved() const noexcept { return achieved_; }
    double requested() const noexcept { return requested_; }

private:
    double achieved_;
    double requested_;
};

} // namespace zbw
