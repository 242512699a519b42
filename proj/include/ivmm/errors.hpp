#pragma once

#include <stdexcept>
#include <string>

namespace ivmm {

/**
 * Base class for all recoverable engine errors. Callers that need to keep a
 * batch alive catch this type; anything else escaping the library is a bug.
 */
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

/// Structurally invalid input text (XML, CSV, config). Message carries the
/// line number where scanning gave up.
class MalformedInput : public Error {
 public:
  using Error::Error;
};

/// A single malformed row in a trajectory file; message carries the line.
class MalformedRow : public Error {
 public:
  using Error::Error;
};

/// Extract contained no usable road way after filtering.
class EmptyExtract : public Error {
 public:
  using Error::Error;
};

/// Segment endpoints coincide; projection is undefined.
class DegenerateSegment : public Error {
 public:
  using Error::Error;
};

/// Asset file header does not announce a format this build understands.
class VersionMismatch : public Error {
 public:
  using Error::Error;
};

/// Asset file violates its own invariants (column count, ranges, parse).
class CorruptAsset : public Error {
 public:
  using Error::Error;
};

/// A routing graph cannot be built from zero pieces.
class EmptyNetwork : public Error {
 public:
  using Error::Error;
};

/// Fewer usable pings than the configured minimum.
class TooFewPings : public Error {
 public:
  using Error::Error;
};

/// Time delta is zero or negative where a positive interval is required.
class NonPositiveInterval : public Error {
 public:
  using Error::Error;
};

/// A path with no pieces was handed to a computation that needs one.
class EmptyPath : public Error {
 public:
  using Error::Error;
};

/// An operation that needs at least one sample received none.
class EmptyInput : public Error {
 public:
  using Error::Error;
};

/// Raw trajectory length is zero, so a relative variation is undefined.
class ZeroLengthRaw : public Error {
 public:
  using Error::Error;
};

/// Bad key, value, or syntax in a configuration source.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Two fixes for one device share a timestamp; ordering is ambiguous.
class NonMonotonicTimestamps : public Error {
 public:
  using Error::Error;
};

}  // namespace ivmm
