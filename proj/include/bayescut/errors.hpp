#pragma once

#include <stdexcept>
#include <string>

namespace bayescut {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied an argument that violates an operation's precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A graph is structurally unsuitable for the requested operation
/// (not chordal, contains a directed cycle, orientation conflict, ...).
class GraphError : public Error {
 public:
  using Error::Error;
};

/// A configured resource cap (enumeration size, table budget) was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// A numerical precondition failed (zero-mass conditioning, absolute
/// continuity violation, indistinguishable configurations).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace bayescut
