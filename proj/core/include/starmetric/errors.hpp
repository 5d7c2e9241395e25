#pragma once

#include <stdexcept>
#include <string>

namespace starmetric {

/// Bad operand: negative, NaN, infinite, or otherwise outside the domain.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Mismatched or invalid configuration (wrong definer across factors, bad spec, ...).
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Point set exceeds a hard cap for an exhaustive computation.
class SizeError : public std::length_error {
public:
    explicit SizeError(const std::string& what) : std::length_error(what) {}
};

/// Bisection exhausted its iteration budget without a passing value.
class NoRadiusError : public std::runtime_error {
public:
    explicit NoRadiusError(const std::string& what) : std::runtime_error(what) {}
};

/// A part of a disjoint union has distances above 1 and auto-truncation is off.
class BoundError : public std::runtime_error {
public:
    explicit BoundError(const std::string& what) : std::runtime_error(what) {}
};

/// A sequence prefix is too short for the requested schedule and has no generator.
class InsufficientDataError : public std::runtime_error {
public:
    explicit InsufficientDataError(const std::string& what) : std::runtime_error(what) {}
};

/// A nested family fails its declared nesting on sampled points.
class InvalidFamilyError : public std::runtime_error {
public:
    explicit InvalidFamilyError(const std::string& what) : std::runtime_error(what) {}
};

/// A set claimed dense produced no sample inside a required ball.
class DensityViolationError : public std::runtime_error {
public:
    int level;
    explicit DensityViolationError(int level_, const std::string& what)
        : std::runtime_error(what), level(level_) {}
};

/// An operation was invoked on a space that fails its axiom precondition.
class PreconditionError : public std::runtime_error {
public:
    explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed CSV/JSON input.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace starmetric
