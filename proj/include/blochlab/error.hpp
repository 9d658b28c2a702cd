#pragma once

#include <stdexcept>
#include <string>

namespace blochlab {

/// Base class for every error raised by the library. `kind()` is a stable
/// machine-readable tag used in the CLI's structured error output.
class Error : public std::runtime_error {
 public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

 private:
    std::string kind_;
};

class InvalidInputError : public Error {
 public:
    explicit InvalidInputError(const std::string& what) : Error("invalid_input", what) {}
};

class SymmetryError : public Error {
 public:
    explicit SymmetryError(const std::string& what) : Error("symmetry", what) {}
};

class ResourceError : public Error {
 public:
    explicit ResourceError(const std::string& what) : Error("resource", what) {}
};

/// Eigensolver failure; carries the number of QR sweeps performed.
class NumericalError : public Error {
 public:
    NumericalError(const std::string& what, long iterations)
        : Error("numerical", what), iterations_(iterations) {}

    long iterations() const noexcept { return iterations_; }

 private:
    long iterations_;
};

class TrackingError : public Error {
 public:
    TrackingError(const std::string& what, double p_lo, double p_hi)
        : Error("tracking", what), p_lo_(p_lo), p_hi_(p_hi) {}

    double p_lo() const noexcept { return p_lo_; }
    double p_hi() const noexcept { return p_hi_; }

 private:
    double p_lo_;
    double p_hi_;
};

/// Raised when a gap of the unperturbed operator is closed (or negative),
/// so the reality threshold is undefined.
class GapClosedError : public Error {
 public:
    GapClosedError(const std::string& what, int gap_index, double width)
        : Error("gap_closed", what), gap_index_(gap_index), width_(width) {}

    int gap_index() const noexcept { return gap_index_; }
    double width() const noexcept { return width_; }

 private:
    int gap_index_;
    double width_;
};

class DegeneracyError : public Error {
 public:
    explicit DegeneracyError(const std::string& what) : Error("degeneracy", what) {}
};

class ConditionNotMetError : public Error {
 public:
    explicit ConditionNotMetError(const std::string& what) : Error("condition_not_met", what) {}
};

class ContradictionError : public Error {
 public:
    explicit ContradictionError(const std::string& what) : Error("contradiction", what) {}
};

class OracleError : public Error {
 public:
    explicit OracleError(const std::string& what) : Error("oracle", what) {}
};

/// Configuration parse/validation failure. `line()` is 0 when the problem
/// is not tied to a particular line.
class ParseError : public Error {
 public:
    ParseError(const std::string& what, int line)
        : Error("parse", line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    int line() const noexcept { return line_; }

 private:
    int line_;
};

}  // namespace blochlab
