#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pairspec {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numeric argument violates its documented domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A lookup fell outside the range covered by a table or calibration.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Absorbance requested at total absorption (alpha2 = 1): the value is
/// infinite and callers must clamp before converting.
class SaturationError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Text-table parsing failure; carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    explicit ParseError(const std::string& what) : Error(what), line_(0) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Invalid or inconsistent configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A trial or ensemble produced too little data to estimate from
/// (e.g. zero herald counts in every trial).
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Filesystem problem: unreadable input or unwritable output.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace pairspec
