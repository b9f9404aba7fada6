#pragma once

#include <stdexcept>
#include <string>

namespace quditrep {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid user input: bad parameter ranges, impossible code parameters,
/// inconsistent configuration. Maps to CLI exit code 2.
class ValidationError : public Error {
  public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

/// The requested physical regime is outside the validity of the worst-case
/// loss approximation (repeater spacing too large, p_appr[0] < 0).
/// Maps to CLI exit code 3.
class InvalidRegimeError : public Error {
  public:
    explicit InvalidRegimeError(const std::string& msg) : Error(msg) {}
};

}  // namespace quditrep
