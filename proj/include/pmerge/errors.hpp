#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pmerge {

// Malformed or inconsistent input (logs, event streams, CLI values).
class InputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class ParseError : public InputError {
  public:
    ParseError(const std::string &source, std::size_t line, const std::string &what)
        : InputError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

class ValidationError : public InputError {
  public:
    using InputError::InputError;
};

} // namespace pmerge
