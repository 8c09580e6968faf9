#ifndef LPI_ERROR_HPP
#define LPI_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lpi {

// Malformed input text. `line()` is 1-based; 0 when the error is not tied
// to a particular line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(line == 0 ? what
                                     : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A documented precondition of an algorithm does not hold.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A solver gave up: round/sweep guard exceeded, or no progress is possible.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lpi

#endif  // LPI_ERROR_HPP
