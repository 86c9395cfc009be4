#pragma once

#include <stdexcept>
#include <string>

namespace threebox {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Occupation or coherent amplitude does not fit in the declared truncation.
class TruncationError : public Error {
public:
    using Error::Error;
};

// Occupation tuple violates the declared total-boson-number sector.
class SectorError : public Error {
public:
    using Error::Error;
};

// Projector list is not mutually orthogonal / orthonormal.
class ProjectorError : public Error {
public:
    using Error::Error;
};

// Mode index out of range or repeated.
class ModeIndexError : public Error {
public:
    using Error::Error;
};

// Operator kind does not admit the requested operation.
class KindError : public Error {
public:
    using Error::Error;
};

// cos^2 fit did not converge; parameters outside the beam-splitter regime.
class CalibrationError : public Error {
public:
    using Error::Error;
};

// Unknown paradox variant.
class VariantError : public Error {
public:
    using Error::Error;
};

// Basis mismatch between vector and operator.
class BasisError : public Error {
public:
    using Error::Error;
};

// Invalid argument (empty opened set, degenerate grid, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

// Probability table is missing a required entry.
class TableError : public Error {
public:
    using Error::Error;
};

// Phase-space grids do not match.
class GridError : public Error {
public:
    using Error::Error;
};

// Operation requires a single-mode state.
class ModeError : public Error {
public:
    using Error::Error;
};

}  // namespace threebox
