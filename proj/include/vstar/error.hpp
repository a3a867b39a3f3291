#pragma once

#include <stdexcept>
#include <string>

namespace vstar {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A remote backend could not be reached or answered with garbage.
class TransportError : public Error {
 public:
  using Error::Error;
};

/// An input file or record is malformed.
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace vstar
