#pragma once

#include <stdexcept>
#include <string>

namespace ovc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Blocks overlap, leave holes, or are otherwise not a partition.
class MalformedPartition : public Error {
 public:
  using Error::Error;
};

/// Input/output counts of composed objects do not line up.
class ArityMismatch : public Error {
 public:
  using Error::Error;
};

/// Some inputs carry colors and others do not.
class ColorMismatch : public Error {
 public:
  using Error::Error;
};

/// A requested size exceeds a configured enumeration or order bound.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its domain (e.g. a reduced half
/// coproduct on a unit word).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A morphism was queried beyond the grading it was built for.
class OrderOverflow : public Error {
 public:
  using Error::Error;
};

/// A generator table does not contain the requested entry.
class MissingEntry : public Error {
 public:
  using Error::Error;
};

/// Generators violate the relation required for a well-defined operadic
/// extension.
class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

/// Text or JSON input could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace ovc
