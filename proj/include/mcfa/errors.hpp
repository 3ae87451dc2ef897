#pragma once

#include <stdexcept>
#include <string>

namespace mcfa {

/// Non-positive radius or otherwise degenerate geometry.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Grid cannot resolve the requested band limit or harmonic.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Array length or grid mismatch between arguments.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// No boundary-value solution in the searched class; message carries the bracket.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Piecewise data whose segments do not tile the time interval consistently.
class StructureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace mcfa
