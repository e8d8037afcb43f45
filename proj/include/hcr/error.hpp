#pragma once

#include <stdexcept>
#include <string>

namespace hcr {

// Base class for every error raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

// An argument violates the function's contract (bad shape, bad range, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Data values are unusable (non-finite features, out-of-range heatmaps, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// An operation was requested in a state that cannot serve it.
class InvalidState : public Error {
 public:
  using Error::Error;
};

// A vector required to have positive norm is (numerically) zero.
class DegenerateVector : public Error {
 public:
  using Error::Error;
};

// A file or byte stream does not match its declared layout.
class FormatError : public Error {
 public:
  using Error::Error;
};

// The operating system refused a read/write/rename.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hcr
