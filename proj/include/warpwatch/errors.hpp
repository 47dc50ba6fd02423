#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace warpwatch {

/// Base of every error raised by the library. The CLI maps these onto exit
/// codes: InfeasibleError -> 3, everything else -> 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a computation is well-formed but has no admissible answer.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    explicit ParseError(const std::string& what) : Error(what), line_(0) {}

    /// 1-based line (or row) number, 0 when not tied to a line.
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class MissingColumnError : public Error {
public:
    using Error::Error;
};

class RangeError : public Error {
public:
    using Error::Error;
};

class EmptySeriesError : public Error {
public:
    using Error::Error;
};

class GapError : public Error {
public:
    GapError(std::string what, std::vector<std::string> missing)
        : Error(std::move(what)), missing_(std::move(missing)) {}

    /// ISO dates of every missing day.
    const std::vector<std::string>& missing() const noexcept { return missing_; }

private:
    std::vector<std::string> missing_;
};

class DuplicateDateError : public Error {
public:
    using Error::Error;
};

class NonFiniteValueError : public Error {
public:
    using Error::Error;
};

class DegenerateRangeError : public Error {
public:
    using Error::Error;
};

class NoOverlapError : public Error {
public:
    using Error::Error;
};

class BandInfeasibleError : public InfeasibleError {
public:
    using InfeasibleError::InfeasibleError;
};

class CoverageError : public Error {
public:
    using Error::Error;
};

class LengthMismatchError : public Error {
public:
    using Error::Error;
};

class WindowTooShortError : public Error {
public:
    using Error::Error;
};

class InsufficientHistoryError : public Error {
public:
    using Error::Error;
};

class TooFewNodesError : public Error {
public:
    using Error::Error;
};

class RangeMismatchError : public Error {
public:
    using Error::Error;
};

class TooLargeError : public Error {
public:
    using Error::Error;
};

class DegenerateGroupsError : public Error {
public:
    using Error::Error;
};

class UsageError : public Error {
public:
    using Error::Error;
};

}  // namespace warpwatch
