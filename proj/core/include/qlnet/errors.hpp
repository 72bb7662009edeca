#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace qlnet {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A game, strategy or file violates a structural invariant (bad
// dimensions, self-edges, non-simplex vectors, malformed JSON).
class StructuralError : public Error {
 public:
  using Error::Error;
};

// A parameter is outside its admissible range.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// A mathematical function is evaluated outside its domain
// (log of a zero probability, Lambert W below -1/e).
class DomainError : public Error {
 public:
  using Error::Error;
};

// An iterative method failed or a simulation produced non-finite values.
// Carries whatever partial information was available at the failure point.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what,
                          std::optional<std::size_t> step = std::nullopt,
                          std::optional<double> last_estimate = std::nullopt);

  std::optional<std::size_t> step() const { return step_; }
  std::optional<double> last_estimate() const { return last_estimate_; }

 private:
  std::optional<std::size_t> step_;
  std::optional<double> last_estimate_;
};

// Process exit codes used by the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

// Maps an exception to the CLI exit code.
int exit_code_for(const std::exception& e) noexcept;

}  // namespace qlnet
