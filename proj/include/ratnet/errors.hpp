#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ratnet {

// evaluation produced a non-finite value (pole hit, overflow, ...)
class EvalError : public std::runtime_error {
public:
  EvalError(const std::string& what, double at) : std::runtime_error(what), x(at) {}
  double x;
};

// argument outside the supported/certified range; `admissible` holds the
// nearest acceptable value when one exists (e.g. smallest epsilon, largest N)
class RangeError : public std::domain_error {
public:
  explicit RangeError(const std::string& what)
      : std::domain_error(what),
        admissible(std::numeric_limits<double>::quiet_NaN()) {}
  RangeError(const std::string& what, double admissible_value)
      : std::domain_error(what + " (admissible: " +
                          std::to_string(admissible_value) + ")"),
        admissible(admissible_value) {}
  RangeError(const std::string& what, const std::string& admissible_desc)
      : std::domain_error(what + " (admissible: " + admissible_desc + ")"),
        admissible(std::numeric_limits<double>::quiet_NaN()) {}
  double admissible;  // NaN when only a description applies
};

// an iteration failed to converge or lost precision beyond repair
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// a caller-supplied structure violates a documented precondition
class PreconditionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// a file could not be read, written, or parsed
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// training diverged; carries the loss history up to the failure
class TrainingError : public std::runtime_error {
public:
  TrainingError(const std::string& what, std::vector<std::pair<double, double>> hist)
      : std::runtime_error(what), history(std::move(hist)) {}
  std::vector<std::pair<double, double>> history;  // (train_mse, val_mse) per epoch
};

}  // namespace ratnet
