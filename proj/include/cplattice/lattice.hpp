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
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cplattice/channel.hpp"
#include "cplattice/complex_matrix.hpp"
#include "cplattice/eig.hpp"
#include "cplattice/errors.hpp"
#include "cplattice/rng.hpp"

namespace cplattice {

/// Default relative tolerance for the lattice test, scaled internally by
/// max(1, max diagonal entry).
inline constexpr double kDefaultTol = 1e-10;

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

enum class ViolationKind {
  NegativeDiagonal,
  NonzeroRowAtZeroDiagonal,
  ParameterExceedsDisk,
  CompatibilityResidual,
  NotHermitian,
};

inline const char *to_string(ViolationKind k) {
  switch (k) {
  case ViolationKind::NegativeDiagonal:
    return "negative_diagonal";
  case ViolationKind::NonzeroRowAtZeroDiagonal:
    return "nonzero_row_at_zero_diagonal";
  case ViolationKind::ParameterExceedsDisk:
    return "parameter_exceeds_disk";
  case ViolationKind::CompatibilityResidual:
    return "compatibility_residual";
  case ViolationKind::NotHermitian:
    return "not_hermitian";
  }
  return "unknown";
}

/// Location and size of the first failure found by the lattice test.
/// Indices are 0-based; diagonal violations have k == j.
struct Violation {
  ViolationKind kind;
  int k = 0;
  int j = 0;
  double magnitude = 0.0;
};

/// Exception carrying a Violation. cp_test converts it into a verdict.
class CpViolationError : public Error {
public:
  CpViolationError(const Violation &v, const std::string &msg)
      : Error(msg), violation(v) {}
  Violation violation;
};

/// Single off-diagonal Schur parameter. Inactive entries correspond to
/// collapsed defect spaces: their disk has zero radius and they carry no
/// freedom (value fixed at 0).
struct OffParam {
  Complex value{0.0};
  bool active = false;
};

/// Triangular family of Schur parameters {Gamma_kj, 0 <= k <= j < N}:
/// nonnegative diagonal plus contractions on the strict upper triangle.
class SchurParams {
public:
  SchurParams() = default;

  explicit SchurParams(int n)
      : n_(n), diag_(n, 0.0), off_(static_cast<size_t>(n) * (n - 1) / 2) {}

  int size() const { return n_; }

  double &diag(int k) { return diag_[k]; }
  double diag(int k) const { return diag_[k]; }

  OffParam &off(int k, int j) { return off_[tri_index(k, j)]; }
  const OffParam &off(int k, int j) const { return off_[tri_index(k, j)]; }

private:
  size_t tri_index(int k, int j) const {
    if (k < 0 || j <= k || j >= n_)
      throw UndefinedParameterError("SchurParams: index (" +
                                    std::to_string(k) + ", " +
                                    std::to_string(j) + ") out of range");
    // Row-major packing of the strict upper triangle.
    const size_t row_start =
        static_cast<size_t>(k) * n_ - static_cast<size_t>(k) * (k + 1) / 2;
    return row_start + static_cast<size_t>(j - k - 1);
  }

  int n_ = 0;
  std::vector<double> diag_;
  std::vector<OffParam> off_;
};

/// Outcome of the complete positivity test: either the full parameter family
/// (the CP certificate) or the first violation found.
struct CpVerdict {
  bool is_cp = false;
  std::optional<SchurParams> params;
  std::optional<Violation> violation;
};

/// Disk containing a normalized matrix entry: the entry is feasible iff it
/// lies within `radius` of `center`. In normalized coordinates
/// |center| + radius <= 1.
struct DiskGeometry {
  Complex center{0.0};
  double radius = 0.0;
};

// ---------------------------------------------------------------------------
// Scalar building blocks
// ---------------------------------------------------------------------------

/// Defect of a scalar contraction: sqrt(1 - |gamma|^2).
inline double defect(const Complex &gamma) {
  const double m2 = std::norm(gamma);
  if (m2 > 1.0) {
    if (m2 <= 1.0 + 4e-12)
      return 0.0;
    throw OutsideUnitDiskError("defect: |gamma| exceeds 1");
  }
  return std::sqrt(1.0 - m2);
}

/// Elementary rotation associated with a contraction:
/// [[gamma, d], [d, -conj(gamma)]] with d = defect(gamma). Unitary for
/// |gamma| <= 1.
inline ComplexMatrix elementary_rotation(const Complex &gamma) {
  const double d = defect(gamma);
  ComplexMatrix u(2, 2);
  u(0, 0) = gamma;
  u(0, 1) = d;
  u(1, 0) = d;
  u(1, 1) = -std::conj(gamma);
  return u;
}

// ---------------------------------------------------------------------------
// Normalization
// ---------------------------------------------------------------------------

/// Diagonal-normalized form of a Hermitian matrix. `diag` holds the original
/// diagonal (zeroed where degenerate), `alive[k]` tells whether row k
/// survives, and `s_tilde` has unit diagonal on live rows and exact zeros on
/// dead rows/columns.
struct NormalizedMatrix {
  ComplexMatrix s_tilde;
  std::vector<double> diag;
  std::vector<bool> alive;
};

namespace detail {

inline void throw_violation(ViolationKind kind, int k, int j, double magnitude,
                            const std::string &msg) {
  throw CpViolationError(Violation{kind, k, j, magnitude}, msg);
}

} // namespace detail

/// Scale out the diagonal: s_tilde(k, j) = S(k, j) / sqrt(S_kk S_jj) on live
/// rows. A diagonal entry within tolerance of zero forces its whole row and
/// column to zero; a nonzero entry on such a row is a PSD violation.
inline NormalizedMatrix normalize(const ComplexMatrix &s,
                                  double tol = kDefaultTol) {
  detail::require_square(s, "normalize");
  detail::require_finite(s, "normalize");
  const int n = s.rows();

  double max_abs_diag = 0.0;
  for (int k = 0; k < n; ++k)
    max_abs_diag = std::max(max_abs_diag, std::abs(s(k, k)));
  const double eps = tol * std::max(1.0, max_abs_diag);

  // Hermiticity is a verdict, not an exception: report the worst pair.
  {
    double worst = 0.0;
    int wk = 0, wj = 0;
    for (int k = 0; k < n; ++k)
      for (int j = k; j < n; ++j) {
        const double d = std::abs(s(k, j) - std::conj(s(j, k)));
        if (d > worst) {
          worst = d;
          wk = k;
          wj = j;
        }
      }
    if (worst > eps)
      detail::throw_violation(ViolationKind::NotHermitian, wk, wj, worst,
                              "normalize: matrix is not Hermitian");
  }

  NormalizedMatrix out;
  out.diag.resize(n);
  out.alive.resize(n);
  for (int k = 0; k < n; ++k) {
    const double d = s(k, k).real();
    if (d < -eps)
      detail::throw_violation(ViolationKind::NegativeDiagonal, k, k, d,
                              "normalize: negative diagonal entry");
    out.alive[k] = d > eps;
    out.diag[k] = out.alive[k] ? d : 0.0;
  }

  for (int k = 0; k < n; ++k) {
    if (out.alive[k])
      continue;
    double worst = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != k)
        worst = std::max(worst, std::abs(s(k, j)));
    if (worst > eps)
      detail::throw_violation(ViolationKind::NonzeroRowAtZeroDiagonal, k, k,
                              worst,
                              "normalize: nonzero row on zero diagonal");
  }

  out.s_tilde = ComplexMatrix(n, n);
  for (int k = 0; k < n; ++k) {
    if (!out.alive[k])
      continue;
    out.s_tilde(k, k) = 1.0;
    for (int j = k + 1; j < n; ++j) {
      if (!out.alive[j])
        continue;
      const Complex v = s(k, j) / std::sqrt(out.diag[k] * out.diag[j]);
      out.s_tilde(k, j) = v;
      out.s_tilde(j, k) = std::conj(v);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Disk geometry via Schur complements
// ---------------------------------------------------------------------------

namespace detail {

template <typename Real> struct DiskCore {
  std::complex<Real> center{0};
  Real dk{0};
  Real dj{0};
};

/// Schur-complement disk for entry (k, j) of the normalized matrix `st`
/// (row-major N x N), using the intermediate block M = {k+1, ..., j-1}:
///   center = st[k, M] pinv(st[M, M]) st[M, j]
///   dk^2   = st[k, k] - st[k, M] pinv(st[M, M]) st[M, k]   (dj analogous)
/// The pseudo-inverse drops eigenvalues at or below 1e-12 * lambda_max, which
/// realizes the convention that collapsed defect directions carry no freedom.
template <typename Real>
DiskCore<Real> disk_core(const std::vector<std::complex<Real>> &st, int n,
                         int k, int j, double tol) {
  using C = std::complex<Real>;
  DiskCore<Real> out;
  const int g = j - k - 1;
  const Real skk = st[static_cast<size_t>(k) * n + k].real();
  const Real sjj = st[static_cast<size_t>(j) * n + j].real();

  auto clamped_sqrt = [&](Real x, const char *what) {
    if (x < Real(0)) {
      if (x < -Real(tol))
        throw IntermediateBlockNotPsdError(
            std::string(what) + ": Schur complement is negative beyond tolerance",
            static_cast<double>(x));
      return Real(0);
    }
    return std::sqrt(x);
  };

  if (g <= 0) {
    out.center = C(0);
    out.dk = clamped_sqrt(skk, "disk_core");
    out.dj = clamped_sqrt(sjj, "disk_core");
    return out;
  }

  std::vector<C> block(static_cast<size_t>(g) * g);
  for (int a = 0; a < g; ++a)
    for (int b = 0; b < g; ++b)
      block[static_cast<size_t>(a) * g + b] =
          st[static_cast<size_t>(k + 1 + a) * n + (k + 1 + b)];

  auto eig = jacobi_hermitian<Real>(std::move(block), g,
                                    Real(50) * std::numeric_limits<Real>::epsilon());
  const Real lambda_max = std::max(Real(0), eig.eigenvalues.front());
  if (eig.eigenvalues.back() < -Real(tol) * std::max(Real(1), lambda_max))
    throw IntermediateBlockNotPsdError(
        "disk_core: intermediate block is not PSD",
        static_cast<double>(eig.eigenvalues.back()));
  const Real cutoff = Real(1e-12) * lambda_max;

  C center(0);
  Real qk(0), qj(0);
  for (int i = 0; i < g; ++i) {
    const Real lam = eig.eigenvalues[i];
    if (lam <= cutoff || lam <= Real(0))
      continue;
    // p = st[k, M] . v_i,  q = v_i* . st[M, j]
    C p(0), q(0);
    for (int m = 0; m < g; ++m) {
      const C vmi = eig.vectors[static_cast<size_t>(m) * g + i];
      p += st[static_cast<size_t>(k) * n + (k + 1 + m)] * vmi;
      q += std::conj(vmi) * st[static_cast<size_t>(k + 1 + m) * n + j];
    }
    center += p * q / lam;
    qk += std::norm(p) / lam;
    qj += std::norm(q) / lam;
  }

  out.center = center;
  out.dk = clamped_sqrt(skk - qk, "disk_core");
  out.dj = clamped_sqrt(sjj - qj, "disk_core");
  return out;
}

template <typename Real>
std::vector<std::complex<Real>> widen(const ComplexMatrix &m) {
  std::vector<std::complex<Real>> out(m.data().size());
  for (size_t i = 0; i < out.size(); ++i)
    out[i] = std::complex<Real>(static_cast<Real>(m.data()[i].real()),
                                static_cast<Real>(m.data()[i].imag()));
  return out;
}

} // namespace detail

/// Disk for entry (k, j) of a normalized matrix whose entries at smaller
/// index gaps are already defined. 0-based indices, k < j.
inline DiskGeometry disk_geometry(const ComplexMatrix &s_tilde, int k, int j,
                                  double tol = kDefaultTol) {
  detail::require_square(s_tilde, "disk_geometry");
  if (k < 0 || j <= k || j >= s_tilde.rows())
    throw UndefinedParameterError("disk_geometry: bad index pair");
  const auto st = detail::widen<long double>(s_tilde);
  const auto core = detail::disk_core<long double>(st, s_tilde.rows(), k, j, tol);
  return DiskGeometry{Complex(static_cast<double>(core.center.real()),
                              static_cast<double>(core.center.imag())),
                      static_cast<double>(core.dk * core.dj)};
}

// ---------------------------------------------------------------------------
// Row / column contractions
// ---------------------------------------------------------------------------

/// R_kj = [Gamma_{k,k+1}, D_{k,k+1} Gamma_{k,k+2}, ...,
///         D_{k,k+1} ... D_{k,j-1} Gamma_{kj}] with scalar defects.
inline std::vector<Complex> row_contraction(const SchurParams &params, int k,
                                            int j) {
  if (k < 0 || j <= k || j >= params.size())
    throw UndefinedParameterError("row_contraction: bad index pair");
  std::vector<Complex> out;
  out.reserve(j - k);
  double prefix = 1.0;
  for (int m = k + 1; m <= j; ++m) {
    out.push_back(prefix * params.off(k, m).value);
    prefix *= defect(params.off(k, m).value);
  }
  return out;
}

/// C_kj = [Gamma_{j-1,j}, Gamma_{j-2,j} D_{j-1,j}, ...,
///         Gamma_{kj} D_{k+1,j} ... D_{j-1,j}]^t.
inline std::vector<Complex> column_contraction(const SchurParams &params,
                                               int k, int j) {
  if (k < 0 || j <= k || j >= params.size())
    throw UndefinedParameterError("column_contraction: bad index pair");
  std::vector<Complex> out;
  out.reserve(j - k);
  double suffix = 1.0;
  for (int m = j - 1; m >= k; --m) {
    out.push_back(params.off(m, j).value * suffix);
    suffix *= defect(params.off(m, j).value);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parameter extraction and reconstruction
// ---------------------------------------------------------------------------

/// Extract the Schur parameter family of a Hermitian matrix. Traverses
/// entries by increasing index gap, then increasing row; raises
/// CpViolationError at the first infeasible entry, so success certifies that
/// the matrix is PSD.
inline SchurParams schur_params_from_matrix(const ComplexMatrix &s,
                                            double tol = kDefaultTol) {
  const NormalizedMatrix norm = normalize(s, tol);
  const int n = s.rows();

  SchurParams params(n);
  for (int k = 0; k < n; ++k)
    params.diag(k) = norm.diag[k];

  const auto st = detail::widen<long double>(norm.s_tilde);
  for (int g = 1; g < n; ++g) {
    for (int k = 0; k + g < n; ++k) {
      const int j = k + g;
      detail::DiskCore<long double> core;
      try {
        core = detail::disk_core<long double>(st, n, k, j, tol);
      } catch (const IntermediateBlockNotPsdError &e) {
        // Tolerance stacking let an earlier window drift indefinite; surface
        // it as a verdict at this entry so the test stays total.
        detail::throw_violation(
            ViolationKind::CompatibilityResidual, k, j,
            std::abs(e.offending_value),
            "schur_params_from_matrix: intermediate block not PSD");
      }
      const long double radius = core.dk * core.dj;
      const std::complex<long double> resid =
          st[static_cast<size_t>(k) * n + j] - core.center;
      if (radius > static_cast<long double>(tol)) {
        Complex gamma(static_cast<double>((resid / radius).real()),
                      static_cast<double>((resid / radius).imag()));
        const double mag = std::abs(gamma);
        if (mag > 1.0 + tol)
          detail::throw_violation(ViolationKind::ParameterExceedsDisk, k, j,
                                  mag,
                                  "schur_params_from_matrix: entry outside disk");
        if (mag > 1.0)
          gamma /= mag;
        params.off(k, j) = OffParam{gamma, true};
      } else {
        const double mag = static_cast<double>(std::abs(resid));
        if (mag > tol)
          detail::throw_violation(
              ViolationKind::CompatibilityResidual, k, j, mag,
              "schur_params_from_matrix: entry off a collapsed disk");
        params.off(k, j) = OffParam{Complex(0.0), false};
      }
    }
  }
  return params;
}

/// Rebuild the unique PSD matrix with the given Schur parameters. Inverse of
/// schur_params_from_matrix on valid families.
inline ComplexMatrix matrix_from_schur_params(const SchurParams &params,
                                              double tol = kDefaultTol) {
  const int n = params.size();
  if (n <= 0)
    throw InvariantViolationError("matrix_from_schur_params: empty family");

  SchurParams checked = params;
  for (int k = 0; k < n; ++k) {
    const double d = checked.diag(k);
    if (!std::isfinite(d) || d < 0.0)
      throw InvariantViolationError(
          "matrix_from_schur_params: diagonal entry must be finite and >= 0");
  }
  for (int k = 0; k < n; ++k)
    for (int j = k + 1; j < n; ++j) {
      OffParam &p = checked.off(k, j);
      if (!std::isfinite(p.value.real()) || !std::isfinite(p.value.imag()))
        throw InvariantViolationError(
            "matrix_from_schur_params: parameter must be finite");
      const double mag = std::abs(p.value);
      if (!p.active) {
        if (mag != 0.0)
          throw InvariantViolationError(
              "matrix_from_schur_params: inactive parameter must be 0");
        continue;
      }
      if (mag > 1.0 + 1e-12)
        throw InvariantViolationError(
            "matrix_from_schur_params: |Gamma| exceeds 1");
      if (mag > 1.0)
        p.value /= mag;
    }

  std::vector<bool> alive(n);
  for (int k = 0; k < n; ++k)
    alive[k] = checked.diag(k) > 0.0;

  // The disk prefix is kept in the exact double-rounded form that
  // normalize() recovers from the emitted matrix, so extraction recomputes
  // bit-identical disk geometry and the round trip loses only the final
  // quotient rounding.
  std::vector<std::complex<long double>> st(static_cast<size_t>(n) * n,
                                            std::complex<long double>(0));
  for (int k = 0; k < n; ++k)
    if (alive[k])
      st[static_cast<size_t>(k) * n + k] = 1.0L;

  ComplexMatrix s(n, n);
  for (int k = 0; k < n; ++k)
    s(k, k) = checked.diag(k);

  for (int g = 1; g < n; ++g) {
    for (int k = 0; k + g < n; ++k) {
      const int j = k + g;
      if (!alive[k] || !alive[j])
        continue;
      detail::DiskCore<long double> core;
      try {
        core = detail::disk_core<long double>(st, n, k, j, tol);
      } catch (const IntermediateBlockNotPsdError &) {
        throw InvariantViolationError(
            "matrix_from_schur_params: reconstructed prefix lost positivity");
      }
      const long double radius = core.dk * core.dj;
      std::complex<long double> v = core.center;
      const OffParam &p = checked.off(k, j);
      if (p.active)
        v += radius * std::complex<long double>(p.value.real(), p.value.imag());

      const double scale = std::sqrt(checked.diag(k) * checked.diag(j));
      const Complex entry(static_cast<double>(v.real() * scale),
                          static_cast<double>(v.imag() * scale));
      s(k, j) = entry;
      s(j, k) = std::conj(entry);

      const Complex rounded = entry / scale; // what normalize() will see
      st[static_cast<size_t>(k) * n + j] =
          std::complex<long double>(rounded.real(), rounded.imag());
      st[static_cast<size_t>(j) * n + k] =
          std::complex<long double>(rounded.real(), -rounded.imag());
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// The CP test
// ---------------------------------------------------------------------------

/// Schur-Cohn-type complete positivity test. Never throws on bad input
/// values: every failure mode (including non-Hermitian input) is reported as
/// a verdict.
inline CpVerdict cp_test_matrix(const ComplexMatrix &s,
                                double tol = kDefaultTol) {
  CpVerdict verdict;
  try {
    verdict.params = schur_params_from_matrix(s, tol);
    verdict.is_cp = true;
  } catch (const CpViolationError &e) {
    verdict.is_cp = false;
    verdict.violation = e.violation;
  }
  return verdict;
}

inline CpVerdict cp_test(const ChoiMatrix &c, double tol = kDefaultTol) {
  return cp_test_matrix(c.S, tol);
}

// ---------------------------------------------------------------------------
// Random CP maps
// ---------------------------------------------------------------------------

/// Deterministic random CP Choi matrix: the diagonal comes from squared
/// magnitudes of standard complex Gaussians, every off parameter uniform on
/// the disk of radius 0.999. Free parametrization, so the result is always
/// CP.
inline ChoiMatrix random_cp(int n, std::uint64_t seed) {
  if (n < 1)
    throw DimensionMismatchError("random_cp: n must be >= 1");
  const int nn = n * n;
  Rng rng(seed);
  SchurParams params(nn);
  for (int k = 0; k < nn; ++k) {
    const Complex z = rng.complex_gaussian();
    params.diag(k) = std::norm(z);
  }
  for (int k = 0; k < nn; ++k)
    for (int j = k + 1; j < nn; ++j)
      params.off(k, j) = OffParam{rng.disk(0.999), true};
  return ChoiMatrix{n, matrix_from_schur_params(params)};
}

} // namespace cplattice
