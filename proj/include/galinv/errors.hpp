#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace galinv {

/// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rotation block fails r^T r = I at the construction tolerance.
class NotOrthogonal : public Error {
 public:
  using Error::Error;
};

/// Rotation block is orthogonal but orientation-reversing (det < 0).
class NotSpecial : public Error {
 public:
  using Error::Error;
};

/// A matrix that must be inverted is singular or too ill-conditioned.
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// Input value outside the domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Sample index outside the valid stencil window.
class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

/// Curve is not regular (vanishing speed) where regularity is required.
class RegularityError : public Error {
 public:
  using Error::Error;
};

/// Jet fails the nondegeneracy requirements of the moving frame.
/// Carries the sample node index when the failure occurred on a grid.
class DegenerateJet : public Error {
 public:
  explicit DegenerateJet(const std::string& what, std::ptrdiff_t node = -1)
      : Error(what), node_(node) {}
  std::ptrdiff_t node() const { return node_; }

 private:
  std::ptrdiff_t node_;
};

/// Two signatures share too little arc length to compare.
class NoOverlap : public Error {
 public:
  using Error::Error;
};

/// A recovered quotient matrix is not a group element.
class NotInGroup : public Error {
 public:
  using Error::Error;
};

/// Constant invariants outside the admissible region (w1 > 0, w2 > w1^2).
class InvalidInvariants : public Error {
 public:
  using Error::Error;
};

/// Integration step too large for the frame ODE.
class StepTooLarge : public Error {
 public:
  using Error::Error;
};

class NonPositiveMass : public Error {
 public:
  using Error::Error;
};

/// Malformed CSV/JSON input.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace galinv
