#pragma once

#include <stdexcept>
#include <string>

namespace riesz_lake {

// Base for every failure raised by the library. The CLI maps ConfigError to
// exit code 2 and everything else to exit code 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Evaluation of a singular kernel at coincident points.
class SingularityError : public Error {
public:
    using Error::Error;
};

// Quadrature or iterative solve did not reach the requested tolerance.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double achieved)
        : Error(what + " (achieved error estimate " + std::to_string(achieved) + ")"), achieved_(achieved) {}
    double achieved() const { return achieved_; }

private:
    double achieved_;
};

class IllPosedError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class UnsupportedError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    SolverError(const std::string& what, double residual)
        : Error(what + " (relative residual " + std::to_string(residual) + ")"), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

class StabilityError : public Error {
public:
    using Error::Error;
};

class SamplingError : public Error {
public:
    using Error::Error;
};

class GridMismatchError : public Error {
public:
    using Error::Error;
};

class InvalidKernelError : public Error {
public:
    using Error::Error;
};

class InsufficientSamplesError : public Error {
public:
    using Error::Error;
};

// Scenario configuration is invalid; `field()` names the offending key.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what)
        : Error("config field '" + field + "': " + what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

}  // namespace riesz_lake
