#pragma once

#include <stdexcept>
#include <string>

namespace mdisc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A spectral function or divergence was asked for outside its domain
// (log of a singular matrix, relative entropy against a non-definite Y, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Input data that parses but violates a documented invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// A combinatorial construction would exceed its configured size cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

}  // namespace mdisc
