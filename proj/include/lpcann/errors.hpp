#pragma once

#include <stdexcept>
#include <string>

namespace lpcann {

/// Invalid kinematic input (non-positive stretch, non-finite control).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Exponential argument above the overflow cap while evaluating a model term.
class OverflowError : public std::overflow_error {
public:
    OverflowError(int term, double argument);

    int term() const noexcept { return term_; }
    double argument() const noexcept { return argument_; }

private:
    int term_;
    double argument_;
};

/// Bad configuration: zero normalization divisor, zero penalty norm, bad mask, ...
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed dataset file. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line);

    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Well-formed row with content the dataset schema does not allow.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace lpcann
