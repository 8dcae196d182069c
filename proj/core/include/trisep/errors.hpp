#pragma once

#include <stdexcept>
#include <string>

namespace trisep {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class HermiticityError : public Error {
 public:
  using Error::Error;
};

class CommutatorError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class NotPPT : public Error {
 public:
  using Error::Error;
};

class RankMismatch : public Error {
 public:
  using Error::Error;
};

class BasisSearchExhausted : public Error {
 public:
  using Error::Error;
};

class RangeMembershipError : public Error {
 public:
  using Error::Error;
};

class FactorNotProduct : public Error {
 public:
  using Error::Error;
};

class ThresholdNotMet : public Error {
 public:
  using Error::Error;
};

class NumericalBreakdown : public Error {
 public:
  using Error::Error;
};

class NotEdge : public Error {
 public:
  using Error::Error;
};

}  // namespace trisep
