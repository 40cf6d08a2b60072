#pragma once

#include <stdexcept>
#include <string>

namespace phonemv {

/// Base of every domain error raised by the library. The CLI maps these to
/// exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Wrong magic bytes or unsupported format version.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Payload shorter than its header promises.
class TruncatedError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input that violates a domain invariant (NaN values, bad
/// shapes, unknown labels, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A manifest record whose view cannot be resolved to a readable file.
class ResolutionError : public Error {
 public:
  ResolutionError(const std::string& segment_id, const std::string& what)
      : Error("segment '" + segment_id + "': " + what),
        segment_id_(segment_id) {}

  const std::string& segment_id() const { return segment_id_; }

 private:
  std::string segment_id_;
};

}  // namespace phonemv
