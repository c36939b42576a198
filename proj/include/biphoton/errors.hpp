#pragma once

#include <stdexcept>
#include <string>

namespace biphoton {

/// Base class for every error this library throws.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configuration or coefficient set violates an invariant
/// (non-positive length, angle out of range, ...).
class invalid_config : public error {
public:
    using error::error;
};

/// Adaptive quadrature could not reach the requested tolerance.
class quadrature_failure : public error {
public:
    using error::error;
};

/// The transverse mismatch exceeds the pump wavenumber, so the
/// longitudinal pump wavevector would be imaginary.
class evanescent_pump : public error {
public:
    using error::error;
};

/// A discretized oracle is not converged in its grid resolution
/// (or the requested resolution is outside the supported range).
class resolution_failure : public error {
public:
    using error::error;
};

/// Config-file syntax error, with 1-based line/column location.
class parse_error : public error {
public:
    parse_error(const std::string& origin, int line, int column, const std::string& what_happened)
        : error(origin + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what_happened),
          line_(line),
          column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

/// Filesystem-level failure, message carries the path.
class io_error : public error {
public:
    using error::error;
};

} // namespace biphoton
