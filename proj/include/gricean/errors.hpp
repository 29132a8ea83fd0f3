#pragma once

#include <stdexcept>
#include <string>

namespace gricean {

// Every failure the library reports derives from Error so callers (the CLI in
// particular) can map families of failures onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed structure: bad token index, empty denotation, bad world count.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Out-of-range model parameter (nonpositive weights, alpha <= 0, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A query outside the operation's domain, e.g. a speaker asked to continue a
/// context that is false in the given world.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A test was asked to divide by a zero probability.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// Enumeration or sampling would exceed the configured budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Two independent computations of the same quantity disagree.
class InternalConsistencyError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace gricean
