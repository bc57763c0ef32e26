#pragma once

#include <stdexcept>
#include <string>

namespace ionjch {

enum class ConfigErrorKind {
  kMalformed,
  kMissingKey,
  kNonPositiveFrequency,
  kInvalidAspectRatio,
  kOutOfRange,
  kInvalidValue,
};

const char* to_string(ConfigErrorKind kind);

/// Invalid or incomplete user input. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(ConfigErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ConfigErrorKind kind() const noexcept { return kind_; }

 private:
  ConfigErrorKind kind_;
};

/// Solver non-convergence or breakdown of perturbation theory. Exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ionjch
