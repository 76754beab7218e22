#ifndef VPCRO_ERROR_HPP
#define VPCRO_ERROR_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace vpcro {

/// Argument outside an operation's domain (non-finite coordinate, bad SOC, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed network, vehicle, or report file. `what()` carries source:line context.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& message)
      : std::runtime_error(line > 0 ? source + ":" + std::to_string(line) + ": " + message
                                    : source + ": " + message),
        source_(source),
        line_(line) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

/// A parsed network that breaks one or more structural invariants.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out = "network validation failed";
    for (const auto& item : items) {
      out += "\n  ";
      out += item;
    }
    return out;
  }

  std::vector<std::string> violations_;
};

/// A battery-only vehicle was asked to cover more distance than its remaining energy allows.
class RangeExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vpcro

#endif  // VPCRO_ERROR_HPP
