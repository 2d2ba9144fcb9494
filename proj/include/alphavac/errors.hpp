#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace alphavac {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Matrix of the wrong shape for the requested operation.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A state or operator violates Hermiticity, trace or positivity.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain (f > 1/3, alpha >= 0, lambda = 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Raised by the numerical integrators; the message names the time and invariant.
class IntegrationError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline std::string format_real(long double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace detail

}  // namespace alphavac
