#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace mcgta {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

class NotPositiveSemidefinite : public Error {
public:
    using Error::Error;
};

class InsufficientSamples : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

class DegenerateBinning : public Error {
public:
    using Error::Error;
};

class GenerationFailure : public Error {
public:
    using Error::Error;
};

/// Graphical lasso ran out of sweeps. Carries the covariance of the last iterate.
class ConvergenceFailure : public Error {
public:
    ConvergenceFailure(const std::string& what, Eigen::MatrixXd last_iterate)
        : Error(what), last_iterate_(std::move(last_iterate)) {}

    const Eigen::MatrixXd& last_iterate() const noexcept { return last_iterate_; }

private:
    Eigen::MatrixXd last_iterate_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, long row) : Error(what), row_(row) {}

    /// 1-based data row (header excluded); 0 when the header itself is bad.
    long row() const noexcept { return row_; }

private:
    long row_;
};

class CacheCorrupt : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Wraps an error with the pipeline stage it came from. The original
/// exception is kept as the nested exception.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& what)
        : Error(stage + ": " + what), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

}  // namespace mcgta
