#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bonnet {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A coordinate lies outside (or too close to the poles of) a family domain.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, double endpoint)
      : Error(what), endpoint_(endpoint) {}
  double endpoint() const { return endpoint_; }

 private:
  double endpoint_;
};

class GridMismatchError : public Error {
 public:
  using Error::Error;
};

class NonFiniteError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// The 2x2 coframe matrix is (numerically) singular at a node.
class SingularCoframeError : public Error {
 public:
  SingularCoframeError(std::size_t i, std::size_t j, double det);
  std::size_t i() const { return i_; }
  std::size_t j() const { return j_; }
  double determinant() const { return det_; }

 private:
  std::size_t i_, j_;
  double det_;
};

/// An integrated quantity exceeded its blow-up guard.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, double where)
      : Error(what), where_(where) {}
  double where() const { return where_; }

 private:
  double where_;
};

/// H' reached zero: the integration left the region where the
/// construction is valid. Carries the last s at which H' > 0.
class RegimeExitError : public Error {
 public:
  RegimeExitError(const std::string& what, double last_valid_s)
      : Error(what), last_valid_s_(last_valid_s) {}
  double last_valid_s() const { return last_valid_s_; }

 private:
  double last_valid_s_;
};

/// Per-step frame rotation too large for the grid spacing.
class RefineGridError : public Error {
 public:
  using Error::Error;
};

}  // namespace bonnet
