#pragma once

#include <stdexcept>
#include <string>

namespace amapf {

// Malformed map, scenario or solution text. Carries the 1-based line number
// when one is known (0 otherwise).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// Instance preconditions violated (blocked cell, duplicates, disconnected pairs...).
class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TimeoutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Horizon cap k + |V| - 2 exceeded without reaching full flow.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace amapf
