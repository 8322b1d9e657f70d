#pragma once

#include <stdexcept>
#include <string>

namespace lpvr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shape or size inconsistency between matrices, trajectories or orders.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A rational coefficient was evaluated where its denominator is zero.
class DenominatorZeroError : public Error {
public:
    using Error::Error;
};

/// The model document could not be parsed; `what()` carries the field path.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Orders n_a = 0 and n_b = 1 leave no state to realize.
class DegenerateOrderError : public Error {
public:
    using Error::Error;
};

/// An iterative numerical kernel failed to converge or met non-finite data.
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace lpvr
