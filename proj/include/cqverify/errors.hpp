// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace cq {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller passed malformed input (dimension mismatch, bad spec string, bad index).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// A point falls outside (or too close to the edge of) a chart domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Rank loss or near-dependence where a nondegenerate object is required.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cq
