#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace besovns {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A sample or coefficient that is NaN or infinite.
class NonFiniteError : public Error {
 public:
  NonFiniteError(const std::string& what, std::size_t index)
      : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Coefficients whose inverse transform would not be real.
class HermitianError : public Error {
 public:
  HermitianError(const std::string& what, int k1, int k2, int k3, double violation)
      : Error(what), k_{k1, k2, k3}, violation_(violation) {}
  const int* worst_mode() const noexcept { return k_; }
  double violation() const noexcept { return violation_; }

 private:
  int k_[3];
  double violation_;
};

/// Two fields living on different grids were combined.
class GridMismatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace besovns
