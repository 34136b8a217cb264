#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace confcoord {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Division by zero, log of a non-positive value and similar domain violations.
class SingularityError : public Error {
public:
    using Error::Error;
};

class OrderExceededError : public Error {
public:
    using Error::Error;
};

class DegenerateMetricError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class UnsupportedError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class SolverFailure : public Error {
public:
    using Error::Error;
};

class ConstructionFailure : public Error {
public:
    using Error::Error;
};

/// Singular Jacobian or otherwise unusable coordinate chart.
class ChartFailure : public Error {
public:
    using Error::Error;
};

/// Newton inversion of a chart did not converge; carries the last iterate.
class InversionFailure : public Error {
public:
    InversionFailure(const std::string& what, std::array<double, 4> last) : Error(what), last_iterate(last) {}
    std::array<double, 4> last_iterate;
};

class InstabilityError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace confcoord
