#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace amrc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Class labels are 1-based: {1, ..., n_classes}.
using Label = int;

/// Bad argument supplied by the caller (dimension mismatch, label out of range, ...).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Operation invoked on an object that is not in a usable state.
class StateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Observation update with zero innovation variance.
class DegenerateVarianceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A broken numerical invariant detected at runtime.
class InternalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnsupportedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed CSV input. Carries the 1-based data row where parsing failed.
class IngestionError : public std::runtime_error {
public:
    IngestionError(std::size_t row, const std::string& what)
        : std::runtime_error("row " + std::to_string(row) + ": " + what), row_(row) {}
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

}  // namespace amrc
