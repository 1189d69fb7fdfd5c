#pragma once

#include <stdexcept>
#include <string>

namespace protoperf {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value or configuration violates a documented precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Least-squares fitting cannot proceed (degenerate design, singular system).
class FitError : public Error {
public:
    using Error::Error;
};

/// A file does not match its documented schema (registry JSON, CSV).
class FormatError : public Error {
public:
    using Error::Error;
};

/// Protocol DSL rejection, carries the 1-based source position.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line, int column)
        : Error(msg + " at " + std::to_string(line) + ":" + std::to_string(column)),
          line_(line),
          column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

/// A backend does not support the requested (algorithm, mode, key_bits).
class CapabilityError : public Error {
public:
    using Error::Error;
};

/// The timer cannot resolve the requested measurement.
class PrecisionError : public Error {
public:
    using Error::Error;
};

} // namespace protoperf
