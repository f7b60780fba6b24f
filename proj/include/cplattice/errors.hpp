/**
 * This code is part of cplattice.
 *
 * (C) Copyright 2026 cplattice contributors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace cplattice {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

class NotSquareError : public Error {
public:
  explicit NotSquareError(const std::string &msg) : Error(msg) {}
};

/// Raised when an operation requires Hermitian input. Carries the largest
/// deviation |M[i][j] - conj(M[j][i])| found.
class NotHermitianError : public Error {
public:
  NotHermitianError(const std::string &msg, double max_asymmetry)
      : Error(msg), max_asymmetry(max_asymmetry) {}
  double max_asymmetry;
};

class NotFiniteError : public Error {
public:
  explicit NotFiniteError(const std::string &msg) : Error(msg) {}
};

class OutsideUnitDiskError : public Error {
public:
  explicit OutsideUnitDiskError(const std::string &msg) : Error(msg) {}
};

class DimensionMismatchError : public Error {
public:
  explicit DimensionMismatchError(const std::string &msg) : Error(msg) {}
};

class NotUnitaryError : public Error {
public:
  explicit NotUnitaryError(const std::string &msg) : Error(msg) {}
};

/// Raised when a matrix required to be positive semidefinite has an
/// eigenvalue below the accepted tolerance.
class NotPsdError : public Error {
public:
  NotPsdError(const std::string &msg, double offending_eigenvalue)
      : Error(msg), offending_eigenvalue(offending_eigenvalue) {}
  double offending_eigenvalue;
};

class IntermediateBlockNotPsdError : public Error {
public:
  explicit IntermediateBlockNotPsdError(const std::string &msg,
                                        double offending_value = 0.0)
      : Error(msg), offending_value(offending_value) {}
  double offending_value;
};

class UndefinedParameterError : public Error {
public:
  explicit UndefinedParameterError(const std::string &msg) : Error(msg) {}
};

class InvariantViolationError : public Error {
public:
  explicit InvariantViolationError(const std::string &msg) : Error(msg) {}
};

} // namespace cplattice
