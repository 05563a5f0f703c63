#pragma once

#include <stdexcept>
#include <string>

namespace deltaset {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition violations: mixed groups, empty inputs, bad parameters.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The requested operation is not defined for the operand's representation
/// (e.g. complement of a stream).
class UnsupportedRepresentation : public Error {
 public:
  using Error::Error;
};

/// A bounded search gave up. Constructions raise this only as a diagnostic;
/// admissible candidates always exist.
class SearchBudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// A stage certificate failed while a construction was being built.
class CertificateFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace deltaset
