#pragma once

#include <stdexcept>
#include <string>

namespace lfc {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inconsistent or out-of-range input (dimensions, signs, missing entries).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// The integrator produced a non-finite state.
class SimulationError : public Error {
 public:
  SimulationError(const std::string& what, double time) : Error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace lfc
