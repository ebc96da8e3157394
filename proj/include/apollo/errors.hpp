#pragma once

#include <stdexcept>
#include <string>

namespace apollo {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

/// A reflection was requested through a vector with zero self-pairing.
class NullNormal : public Error {
 public:
  explicit NullNormal(const std::string& msg) : Error(msg) {}
};

/// An argument violates an operation's precondition (non-spacelike normal,
/// non-null cusp, point at infinity, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

class NoSolution : public Error {
 public:
  explicit NoSolution(const std::string& msg) : Error(msg) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& msg) : Error(msg) {}
};

class BudgetExceeded : public Error {
 public:
  explicit BudgetExceeded(const std::string& msg) : Error(msg) {}
};

/// Packed 64-bit arithmetic would have overflowed.
class ArithmeticOverflow : public BudgetExceeded {
 public:
  explicit ArithmeticOverflow(const std::string& msg) : BudgetExceeded(msg) {}
};

class ValidationFailure : public Error {
 public:
  explicit ValidationFailure(const std::string& msg) : Error(msg) {}
};

class ChamberError : public Error {
 public:
  explicit ChamberError(const std::string& msg) : Error(msg) {}
};

class InsufficientData : public Error {
 public:
  explicit InsufficientData(const std::string& msg) : Error(msg) {}
};

}  // namespace apollo
