#pragma once

#include <stdexcept>
#include <string>

namespace levelcross {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user configuration: bad lengths, non-positive variances, etc.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// An evaluator was called outside its stated preconditions.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// Y1*Y3 - Y2^2 is not numerically positive; (X1, X2) has no density.
class DegenerateCovariance : public Error {
 public:
  using Error::Error;
};

// Every basis function vanishes at the evaluation point.
class DegeneratePoint : public Error {
 public:
  using Error::Error;
};

// A zero of S - K lies on (or numerically at) the counting contour.
class BoundaryHit : public Error {
 public:
  using Error::Error;
};

}  // namespace levelcross
