// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace vidsum {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input parsed but violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Input could not be parsed (malformed JSON, bad binary header).
class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Filesystem failures: missing files, short reads, failed writes.
class IoError : public Error {
 public:
  using Error::Error;
};

/// The requested selection has no feasible solution.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// An exhaustive oracle was asked to enumerate more than its limit.
class CombinatorialLimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace vidsum
