/// @file  errors.hpp
/// @brief Exception types shared by every obddlab module

#pragma once

#include <stdexcept>
#include <string>

namespace obddlab {

/// Input of the wrong length, unknown variable index, mismatched arities.
class ShapeError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A request that exceeds one of the desk-scale caps (n, dim, ...).
class CapacityError : public std::length_error {
public:
  using std::length_error::length_error;
};

/// A malformed program: dangling transition, non-stochastic row,
/// non-unitary matrix.
class StructuralError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A function depends on a variable the caller declared irrelevant.
class DependencyError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A program disagrees with the partial function it is supposed to extend.
class ConsistencyError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A reordering transform was handed a program that fails the
/// commutativity check.
class NotCommutativeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Parameters outside a constructor's domain (b > n/3, q not a power of two).
class ParameterError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

} // namespace obddlab
