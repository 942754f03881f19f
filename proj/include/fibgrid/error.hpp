#pragma once

#include <stdexcept>
#include <string>

namespace fibgrid {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Fixed-width arithmetic would have wrapped.
class Overflow : public Error {
 public:
  using Error::Error;
};

class ResourceLimit : public Error {
 public:
  using Error::Error;
};

// A message or digit sequence broke the routing protocol.
class ProtocolViolation : public Error {
 public:
  using Error::Error;
};

// A distance or path count could be shortened by tiles outside the ball.
class Uncertified : public Error {
 public:
  using Error::Error;
};

// Two distinct tiles collapsed under the merge tolerance.
class DedupFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace fibgrid
