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
#include <limits>
#include <numeric>
#include <vector>

#include "cplattice/complex_matrix.hpp"
#include "cplattice/errors.hpp"

namespace cplattice {

/// Eigendecomposition of a Hermitian matrix: M = V diag(lambda) V*, with
/// eigenvalues sorted descending and orthonormal eigenvector columns.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;
};

namespace detail {

/// Cyclic Jacobi eigensolver for Hermitian matrices, templated on the real
/// scalar so the lattice internals can run it in extended precision.
/// `a` is row-major n x n and is consumed. Eigenvalues come back descending,
/// `vectors` holds the matching eigenvector columns (row-major n x n).
template <typename Real> struct JacobiResult {
  std::vector<Real> eigenvalues;
  std::vector<std::complex<Real>> vectors;
};

template <typename Real>
JacobiResult<Real> jacobi_hermitian(std::vector<std::complex<Real>> a, int n,
                                    Real conv_factor) {
  using C = std::complex<Real>;
  std::vector<C> v(static_cast<size_t>(n) * n, C(0));
  for (int i = 0; i < n; ++i)
    v[static_cast<size_t>(i) * n + i] = C(1);

  Real norm_f = 0;
  for (const auto &x : a)
    norm_f += std::norm(x);
  norm_f = std::sqrt(norm_f);

  auto off_norm = [&]() {
    Real s = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j)
          s += std::norm(a[static_cast<size_t>(i) * n + j]);
    return std::sqrt(s);
  };

  const int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps && off_norm() > conv_factor * norm_f;
       ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const C beta = a[static_cast<size_t>(p) * n + q];
        const Real ab = std::abs(beta);
        if (ab == Real(0))
          continue;
        const Real alpha = a[static_cast<size_t>(p) * n + p].real();
        const Real gamma = a[static_cast<size_t>(q) * n + q].real();
        const C phase_conj = std::conj(beta) / ab;

        // Rotation angle from the phase-reduced real 2x2 block.
        const Real tau = (gamma - alpha) / (2 * ab);
        Real t;
        if (tau >= Real(0))
          t = Real(1) / (tau + std::sqrt(Real(1) + tau * tau));
        else
          t = Real(-1) / (-tau + std::sqrt(Real(1) + tau * tau));
        const Real c = Real(1) / std::sqrt(Real(1) + t * t);
        const Real s = t * c;

        // A <- U* A U with U = [[c, s], [-s conj(phase), c conj(phase)]]
        // acting on the (p, q) plane.
        for (int i = 0; i < n; ++i) {
          if (i == p || i == q)
            continue;
          const C aip = a[static_cast<size_t>(i) * n + p];
          const C aiq = a[static_cast<size_t>(i) * n + q];
          const C nip = aip * c - aiq * (s * phase_conj);
          const C niq = aip * s + aiq * (c * phase_conj);
          a[static_cast<size_t>(i) * n + p] = nip;
          a[static_cast<size_t>(i) * n + q] = niq;
          a[static_cast<size_t>(p) * n + i] = std::conj(nip);
          a[static_cast<size_t>(q) * n + i] = std::conj(niq);
        }
        const Real app = alpha * c * c - 2 * ab * c * s + gamma * s * s;
        const Real aqq = alpha * s * s + 2 * ab * c * s + gamma * c * c;
        a[static_cast<size_t>(p) * n + p] = app;
        a[static_cast<size_t>(q) * n + q] = aqq;
        a[static_cast<size_t>(p) * n + q] = C(0);
        a[static_cast<size_t>(q) * n + p] = C(0);

        for (int i = 0; i < n; ++i) {
          const C vip = v[static_cast<size_t>(i) * n + p];
          const C viq = v[static_cast<size_t>(i) * n + q];
          v[static_cast<size_t>(i) * n + p] = vip * c - viq * (s * phase_conj);
          v[static_cast<size_t>(i) * n + q] = vip * s + viq * (c * phase_conj);
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return a[static_cast<size_t>(i) * n + i].real() >
           a[static_cast<size_t>(j) * n + j].real();
  });

  JacobiResult<Real> out;
  out.eigenvalues.resize(n);
  out.vectors.assign(static_cast<size_t>(n) * n, C(0));
  for (int col = 0; col < n; ++col) {
    const int src = order[col];
    out.eigenvalues[col] = a[static_cast<size_t>(src) * n + src].real();
    for (int i = 0; i < n; ++i)
      out.vectors[static_cast<size_t>(i) * n + col] =
          v[static_cast<size_t>(i) * n + src];
  }
  return out;
}

inline void require_square(const ComplexMatrix &m, const char *what) {
  if (!m.is_square())
    throw NotSquareError(std::string(what) + ": matrix is not square");
}

inline void require_finite(const ComplexMatrix &m, const char *what) {
  if (!m.all_finite())
    throw NotFiniteError(std::string(what) + ": matrix has NaN/Inf entries");
}

inline void require_hermitian(const ComplexMatrix &m, const char *what,
                              double rel_tol = 1e-12) {
  const double defect = m.hermiticity_defect();
  if (defect > rel_tol * std::max(1e-300, m.frobenius_norm()))
    throw NotHermitianError(std::string(what) + ": matrix is not Hermitian",
                            defect);
}

} // namespace detail

/// Hermitian eigendecomposition by cyclic Jacobi rotations. Intended for the
/// small matrices this library works with (N <= 64).
inline SpectralDecomposition eig_hermitian(const ComplexMatrix &m) {
  detail::require_square(m, "eig_hermitian");
  detail::require_finite(m, "eig_hermitian");
  detail::require_hermitian(m, "eig_hermitian");

  const int n = m.rows();
  auto res = detail::jacobi_hermitian<double>(m.data(), n, 1e-14);

  SpectralDecomposition out;
  out.eigenvalues = std::move(res.eigenvalues);
  out.eigenvectors = ComplexMatrix(n, n);
  out.eigenvectors.data() = std::move(res.vectors);
  return out;
}

/// Reference PSD check: true iff the smallest eigenvalue is at least
/// -tol * max(1, ||M||_F). This is the semantics the lattice test is
/// validated against.
inline bool is_psd_oracle(const ComplexMatrix &m, double tol) {
  const auto dec = eig_hermitian(m);
  const double scale = std::max(1.0, m.frobenius_norm());
  const double min_eig =
      dec.eigenvalues.empty() ? 0.0 : dec.eigenvalues.back();
  return min_eig >= -tol * scale;
}

/// Moore-Penrose pseudo-inverse of a Hermitian PSD matrix via spectral
/// decomposition. Eigenvalues at or below cutoff * lambda_max are treated as
/// zero; eigenvalues below -cutoff * max(1, lambda_max) raise NotPsdError.
inline ComplexMatrix pinv_psd(const ComplexMatrix &m, double cutoff = 1e-12) {
  const auto dec = eig_hermitian(m);
  const int n = m.rows();
  const double lambda_max =
      dec.eigenvalues.empty() ? 0.0 : std::max(0.0, dec.eigenvalues.front());
  const double neg_tol = cutoff * std::max(1.0, lambda_max);

  std::vector<double> inv(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double lam = dec.eigenvalues[i];
    if (lam < -neg_tol)
      throw NotPsdError("pinv_psd: eigenvalue beyond negative tolerance", lam);
    if (lam > cutoff * lambda_max && lam > 0.0)
      inv[i] = 1.0 / lam;
  }

  ComplexMatrix r(n, n);
  const ComplexMatrix &v = dec.eigenvectors;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex s = 0.0;
      for (int k = 0; k < n; ++k)
        s += v(i, k) * inv[k] * std::conj(v(j, k));
      r(i, j) = s;
    }
  return r;
}

} // namespace cplattice
