#ifndef QOM_ERRORS_HPP
#define QOM_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace qom {

/// Base class for all qom errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A mode cutoff or matrix dimension is invalid (e.g. cutoff = 0).
class InvalidDimensionError : public Error {
public:
    using Error::Error;
};

/// A truncated representation cannot hold the requested state to tolerance.
/// `required_cutoff` carries the recommended cutoff when known, `sector` the
/// offending photon sector for joint-evolution failures (-1 otherwise).
class TruncationError : public Error {
public:
    TruncationError(const std::string& msg, long required_cutoff_ = -1,
                    long sector_ = -1, double leaked_ = 0.0)
        : Error(msg), required_cutoff(required_cutoff_), sector(sector_), leaked(leaked_) {}
    long required_cutoff;
    long sector;
    double leaked;
};

/// Non-finite input or a value outside the numeric domain of an operation.
class NumericDomainError : public Error {
public:
    using Error::Error;
};

/// Mode index out of range.
class IndexError : public Error {
public:
    using Error::Error;
};

/// Coupling configuration makes the dressed spectrum unphysical
/// (argument of the squeezing logarithm or a radicand is non-positive).
class UnphysicalCouplingError : public Error {
public:
    using Error::Error;
};

/// Revival times are undefined (vacuum cavity state or zero coupling).
class UndefinedRevivalError : public Error {
public:
    using Error::Error;
};

/// Requested analysis is outside its validity regime (e.g. unresolved
/// transmission peaks handed to the peak extractor).
class RegimeError : public Error {
public:
    using Error::Error;
};

/// An iterative evaluation failed to reach tolerance within its cap.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& msg, long iterations_ = 0, double partial_error_ = 0.0)
        : Error(msg), iterations(iterations_), partial_error(partial_error_) {}
    long iterations;
    double partial_error;
};

/// Hypergeometric parameter c hit a non-positive integer.
class PoleError : public Error {
public:
    using Error::Error;
};

/// Invalid or inconsistent run configuration (CLI layer maps this to exit 2).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg, std::vector<std::string> details_ = {})
        : Error(msg), details(std::move(details_)) {}
    std::vector<std::string> details;
};

} // namespace qom

#endif // QOM_ERRORS_HPP
