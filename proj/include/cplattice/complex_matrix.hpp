/**
 * This code is part of cplattice.
 *
 * (C) Copyright 2026 cplattice contributors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <vector>

#include "cplattice/errors.hpp"

namespace cplattice {

using Complex = std::complex<double>;

/// Dense complex matrix, row-major storage. Carrier for Choi matrices, Kraus
/// operators and density matrices. Small sizes only (the library works on
/// n^2 x n^2 blocks with n <= 4 in practice).
class ComplexMatrix {
public:
  ComplexMatrix() = default;

  ComplexMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {}

  /// Row-major construction from nested braces, e.g. {{1, 0}, {0, 1}}.
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = static_cast<int>(rows.size());
    cols_ = rows_ > 0 ? static_cast<int>(rows.begin()->size()) : 0;
    data_.reserve(static_cast<size_t>(rows_) * cols_);
    for (const auto &r : rows) {
      if (static_cast<int>(r.size()) != cols_)
        throw DimensionMismatchError("ragged initializer for ComplexMatrix");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static ComplexMatrix zero(int rows, int cols) { return {rows, cols}; }

  static ComplexMatrix identity(int n) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i)
      m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Complex &operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  const Complex &operator()(int r, int c) const {
    return data_[static_cast<size_t>(r) * cols_ + c];
  }

  const std::vector<Complex> &data() const { return data_; }
  std::vector<Complex> &data() { return data_; }

  ComplexMatrix operator+(const ComplexMatrix &o) const {
    require_same_shape(o);
    ComplexMatrix r = *this;
    for (size_t i = 0; i < data_.size(); ++i)
      r.data_[i] += o.data_[i];
    return r;
  }

  ComplexMatrix operator-(const ComplexMatrix &o) const {
    require_same_shape(o);
    ComplexMatrix r = *this;
    for (size_t i = 0; i < data_.size(); ++i)
      r.data_[i] -= o.data_[i];
    return r;
  }

  ComplexMatrix operator*(const ComplexMatrix &o) const {
    if (cols_ != o.rows_)
      throw DimensionMismatchError("matrix product shape mismatch");
    ComplexMatrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const Complex aik = (*this)(i, k);
        if (aik == Complex(0.0))
          continue;
        for (int j = 0; j < o.cols_; ++j)
          r(i, j) += aik * o(k, j);
      }
    return r;
  }

  friend ComplexMatrix operator*(const Complex &s, const ComplexMatrix &m) {
    ComplexMatrix r = m;
    for (auto &x : r.data_)
      x *= s;
    return r;
  }

  ComplexMatrix operator*(const Complex &s) const { return s * (*this); }

  /// Conjugate transpose.
  ComplexMatrix adjoint() const {
    ComplexMatrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j)
        r(j, i) = std::conj((*this)(i, j));
    return r;
  }

  ComplexMatrix transpose() const {
    ComplexMatrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j)
        r(j, i) = (*this)(i, j);
    return r;
  }

  ComplexMatrix conjugate() const {
    ComplexMatrix r = *this;
    for (auto &x : r.data_)
      x = std::conj(x);
    return r;
  }

  Complex trace() const {
    Complex t = 0.0;
    for (int i = 0; i < std::min(rows_, cols_); ++i)
      t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto &x : data_)
      s += std::norm(x);
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto &x : data_)
      m = std::max(m, std::abs(x));
    return m;
  }

  bool all_finite() const {
    for (const auto &x : data_)
      if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
        return false;
    return true;
  }

  /// Largest |M[i][j] - conj(M[j][i])| over all pairs; 0 for exactly
  /// Hermitian input. Requires a square matrix.
  double hermiticity_defect() const {
    double worst = 0.0;
    for (int i = 0; i < rows_; ++i)
      for (int j = i; j < cols_; ++j)
        worst = std::max(worst,
                         std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return worst;
  }

  bool operator==(const ComplexMatrix &o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

private:
  void require_same_shape(const ComplexMatrix &o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw DimensionMismatchError("matrix shape mismatch");
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<Complex> data_;
};

} // namespace cplattice
