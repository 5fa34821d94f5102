#pragma once

#include <stdexcept>
#include <string>

namespace castbridge {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition violation on numeric inputs (pass@k, aggregation).
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace castbridge
