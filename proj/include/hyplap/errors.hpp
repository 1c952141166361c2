#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hyplap {

/// Base class for all errors thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A node id outside [0, n).
struct InvalidNodeError : Error {
    using Error::Error;
};

/// A hyperedge or clique-edge weight that is not strictly positive.
struct InvalidWeightError : Error {
    using Error::Error;
};

/// An observed node without a class assignment.
struct MissingLabelError : Error {
    using Error::Error;
};

/// An empty observed set.
struct EmptyObservationError : Error {
    using Error::Error;
};

/// Mismatched matrix/vector shapes.
struct DimensionError : Error {
    using Error::Error;
};

/// An operation called outside the exponent regime it supports.
struct WrongModeError : Error {
    using Error::Error;
};

/// A class whose requested observation sample is empty.
struct EmptyClassSampleError : Error {
    using Error::Error;
};

/// A quantity that is undefined for the given inputs (e.g. accuracy with
/// no unlabeled nodes).
struct UndefinedError : Error {
    using Error::Error;
};

/// A parameter outside its documented domain.
struct InvalidParameterError : Error {
    using Error::Error;
};

/// Malformed input file; the message names the file and line.
struct ParseError : Error {
    ParseError(const std::string& file, std::size_t line, const std::string& what)
        : Error(file + ":" + std::to_string(line) + ": " + what) {}
    explicit ParseError(const std::string& what) : Error(what) {}
};

} // namespace hyplap
