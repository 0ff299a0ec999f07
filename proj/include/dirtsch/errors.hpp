#pragma once

#include <stdexcept>
#include <string>

namespace dirtsch {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid configuration value (bad area, radius, beam count, ...).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

// Argument outside the mathematical domain of a formula.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

// Unknown node id or missing table entry.
class LookupError : public Error {
public:
    explicit LookupError(const std::string& what) : Error(what) {}
};

// Malformed input file or config line.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
};

}  // namespace dirtsch
