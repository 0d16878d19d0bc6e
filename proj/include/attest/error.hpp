#pragma once

#include <stdexcept>
#include <string>

namespace attest {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A normalization was requested for a (near) zero vector or quaternion.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// A yaw definition or resolution step hit its singular configuration.
class SingularityError : public Error {
 public:
  using Error::Error;
};

class InvalidConfigError : public Error {
 public:
  using Error::Error;
};

class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

}  // namespace attest
