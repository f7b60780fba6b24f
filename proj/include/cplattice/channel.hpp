/**
 * This code is part of cplattice.
 *
 * (C) Copyright 2026 cplattice contributors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "cplattice/complex_matrix.hpp"
#include "cplattice/eig.hpp"
#include "cplattice/errors.hpp"

namespace cplattice {

/// Kraus representation of a linear map on M_n: Phi(X) = sum_j A_j* X A_j.
struct KrausSet {
  int n = 0;
  std::vector<ComplexMatrix> ops;
};

/// Choi matrix of a linear map on M_n, stored as the n^2 x n^2 block matrix
/// S = [Phi(E_kj)] over the standard matrix units E_kj.
///
/// Index convention (0-based internally): block (k, j) holds Phi(E_kj), and
/// S(k*n + a, j*n + b) = Phi(E_kj)(a, b). All user-facing reports translate
/// to 1-based indices.
struct ChoiMatrix {
  int n = 0;
  ComplexMatrix S;

  int dim() const { return n * n; }
};

inline void require_valid_kraus(const KrausSet &k) {
  if (k.n <= 0 || k.ops.empty())
    throw DimensionMismatchError("KrausSet: need n >= 1 and at least one operator");
  for (const auto &a : k.ops) {
    if (a.rows() != k.n || a.cols() != k.n)
      throw DimensionMismatchError("KrausSet: operator size does not match n");
    if (!a.all_finite())
      throw NotFiniteError("KrausSet: operator has NaN/Inf entries");
  }
}

/// Choi matrix of the channel Phi(X) = sum_m A_m* X A_m. The block entries
/// are Phi(E_kj)(a, b) = sum_m conj(A_m(k, a)) A_m(j, b), so the result is
/// positive semidefinite by construction.
inline ChoiMatrix choi_from_kraus(const KrausSet &kset) {
  require_valid_kraus(kset);
  const int n = kset.n;
  ChoiMatrix c{n, ComplexMatrix(n * n, n * n)};
  for (const auto &a : kset.ops)
    for (int k = 0; k < n; ++k)
      for (int aa = 0; aa < n; ++aa) {
        const Complex left = std::conj(a(k, aa));
        if (left == Complex(0.0))
          continue;
        for (int j = 0; j < n; ++j)
          for (int bb = 0; bb < n; ++bb)
            c.S(k * n + aa, j * n + bb) += left * a(j, bb);
      }
  return c;
}

/// Apply the map to X: Y(k, j) = sum_{l,m} Phi(E_lm)(k, j) X(l, m).
inline ComplexMatrix apply_channel(const ChoiMatrix &c, const ComplexMatrix &x) {
  const int n = c.n;
  if (x.rows() != n || x.cols() != n)
    throw DimensionMismatchError("apply_channel: X must be n x n");
  ComplexMatrix y(n, n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      Complex s = 0.0;
      for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m)
          s += c.S(l * n + k, m * n + j) * x(l, m);
      y(k, j) = s;
    }
  return y;
}

/// Choi matrix of the Hilbert-Schmidt adjoint, computed exactly by index
/// permutation and conjugation: Phi^(E_kj)(l, m) = conj(Phi(E_lm)(k, j)).
inline ChoiMatrix adjoint_choi(const ChoiMatrix &c) {
  const int n = c.n;
  ChoiMatrix r{n, ComplexMatrix(n * n, n * n)};
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m)
          r.S(k * n + l, j * n + m) = std::conj(c.S(l * n + k, m * n + j));
  return r;
}

/// True iff Tr Phi(E_kj) = delta_kj within tol, i.e. the blockwise traces
/// form the identity.
inline bool is_trace_preserving(const ChoiMatrix &c, double tol) {
  const int n = c.n;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      Complex t = 0.0;
      for (int a = 0; a < n; ++a)
        t += c.S(k * n + a, j * n + a);
      const Complex want = (k == j) ? Complex(1.0) : Complex(0.0);
      if (std::abs(t - want) > tol)
        return false;
    }
  return true;
}

/// True iff sum_l Phi(E_ll) = I within tol.
inline bool is_unital(const ChoiMatrix &c, double tol) {
  const int n = c.n;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Complex s = 0.0;
      for (int l = 0; l < n; ++l)
        s += c.S(l * n + a, l * n + b);
      const Complex want = (a == b) ? Complex(1.0) : Complex(0.0);
      if (std::abs(s - want) > tol)
        return false;
    }
  return true;
}

/// Extract a minimal Kraus set from a PSD Choi matrix. Eigenvector columns
/// scaled by sqrt(eigenvalue) are reshaped into operators; eigenvalues at or
/// below cutoff * lambda_max are dropped, so |ops| = rank(S).
inline KrausSet kraus_from_choi(const ChoiMatrix &c, double tol = 1e-12) {
  const int n = c.n;
  const int nn = n * n;
  SpectralDecomposition dec;
  try {
    dec = eig_hermitian(c.S);
  } catch (const NotHermitianError &) {
    throw NotPsdError("kraus_from_choi: Choi matrix is not Hermitian", 0.0);
  }
  const double lambda_max =
      dec.eigenvalues.empty() ? 0.0 : std::max(0.0, dec.eigenvalues.front());
  const double neg_tol = tol * std::max(1.0, lambda_max);

  KrausSet out;
  out.n = n;
  for (int i = 0; i < nn; ++i) {
    const double lam = dec.eigenvalues[i];
    if (lam < -neg_tol)
      throw NotPsdError("kraus_from_choi: Choi matrix is not PSD", lam);
    if (lam <= tol * lambda_max || lam <= 0.0)
      continue;
    const double w = std::sqrt(lam);
    ComplexMatrix a(n, n);
    // Column (k*n + aa) of the eigenvector becomes entry (k, aa), conjugated
    // to invert the choi_from_kraus block rule.
    for (int k = 0; k < n; ++k)
      for (int aa = 0; aa < n; ++aa)
        a(k, aa) = std::conj(w * dec.eigenvectors(k * n + aa, i));
    out.ops.push_back(std::move(a));
  }
  if (out.ops.empty()) {
    // Rank-0 Choi (zero map): represent with one zero operator so the set
    // stays well formed.
    out.ops.emplace_back(n, n);
  }
  return out;
}

inline void require_unitary(const ComplexMatrix &u, const char *what,
                            double tol = 1e-10) {
  detail::require_square(u, what);
  const ComplexMatrix g = u.adjoint() * u;
  const ComplexMatrix d = g - ComplexMatrix::identity(u.rows());
  if (d.max_abs() > tol)
    throw NotUnitaryError(std::string(what) + ": matrix is not unitary");
}

/// Choi matrix of A -> U Phi(V A V*) U* for unitary U, V.
inline ChoiMatrix conjugate_channel(const ChoiMatrix &c, const ComplexMatrix &u,
                                    const ComplexMatrix &v) {
  const int n = c.n;
  require_unitary(u, "conjugate_channel(U)");
  require_unitary(v, "conjugate_channel(V)");
  if (u.rows() != n || v.rows() != n)
    throw DimensionMismatchError("conjugate_channel: unitary size mismatch");

  // V E_kj V* = sum_{l,m} V(l, k) conj(V(m, j)) E_lm, then each block
  // Phi(E_lm) is rotated by U.
  std::vector<ComplexMatrix> rotated(static_cast<size_t>(n) * n);
  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m) {
      ComplexMatrix block(n, n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          block(a, b) = c.S(l * n + a, m * n + b);
      rotated[static_cast<size_t>(l) * n + m] = u * block * u.adjoint();
    }

  ChoiMatrix r{n, ComplexMatrix(n * n, n * n)};
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m) {
          const Complex coeff = v(l, k) * std::conj(v(m, j));
          if (coeff == Complex(0.0))
            continue;
          const ComplexMatrix &block = rotated[static_cast<size_t>(l) * n + m];
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
              r.S(k * n + a, j * n + b) += coeff * block(a, b);
        }
  return r;
}

} // namespace cplattice
