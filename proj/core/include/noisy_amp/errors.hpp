#pragma once

#include <stdexcept>
#include <string>

namespace noisy_amp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Probability mass outside the retained Fock space exceeds the spec's trunc_tol.
/// The caller is expected to retry with a larger dimension.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double deficit)
      : Error(what), deficit_(deficit) {}
  double deficit() const noexcept { return deficit_; }

 private:
  double deficit_;
};

/// A (conditional) state has trace at or below num_tol and cannot be normalized.
class ZeroTrace : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Root-finding target is not bracketed; carries the values reached at the ends.
class NoBracket : public Error {
 public:
  NoBracket(const std::string& what, double value_lo, double value_hi)
      : Error(what), value_lo_(value_lo), value_hi_(value_hi) {}
  double value_lo() const noexcept { return value_lo_; }
  double value_hi() const noexcept { return value_hi_; }

 private:
  double value_lo_;
  double value_hi_;
};

}  // namespace noisy_amp
