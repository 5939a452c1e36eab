#include "lpcann/errors.hpp"

namespace lpcann {

OverflowError::OverflowError(int term, double argument)
    : std::overflow_error("exponential overflow in term " + std::to_string(term + 1) +
                          " (argument " + std::to_string(argument) + ")"),
      term_(term),
      argument_(argument) {}

ParseError::ParseError(const std::string& what, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      line_(line) {}

}  // namespace lpcann
