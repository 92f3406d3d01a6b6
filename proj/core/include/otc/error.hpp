#pragma once

#include <stdexcept>
#include <string>

namespace otc {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes do not fit the operation.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// An entry lies outside the domain of a function (log of a non-positive
// value, division by ~0, negative weights where nonnegativity is required).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A precondition on arguments was violated.
class ContractError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

// Iterations lost precision (e.g. the Sinkhorn kernel underflowed).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class FileError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

// A persisted model does not match the data it is applied to.
class CompatibilityError : public Error {
 public:
  using Error::Error;
};

}  // namespace otc
