#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dxa {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A precondition on input data was violated (empty series, length mismatch,
/// non-finite sample, insufficient noise, ...).
class InvalidInput : public Error {
  public:
    explicit InvalidInput(const std::string& what) : Error(what) {}
};

/// A numeric parameter is outside its admissible range.
class InvalidParameter : public Error {
  public:
    explicit InvalidParameter(const std::string& what) : Error(what) {}
};

/// The input is formally valid but statistically degenerate
/// (zero variance, zero values inside a log-log fit range, ...).
class DegenerateInput : public Error {
  public:
    explicit DegenerateInput(const std::string& what) : Error(what) {}
};

/// A text field could not be parsed. Carries the 1-based source row.
class ParseError : public Error {
  public:
    ParseError(std::size_t row, const std::string& what)
        : Error("row " + std::to_string(row) + ": " + what), row_(row) {}

    std::size_t row() const { return row_; }

  private:
    std::size_t row_;
};

/// Filesystem-level failure (missing file, unwritable destination).
class IoError : public Error {
  public:
    explicit IoError(const std::string& what) : Error(what) {}
};

} // namespace dxa
