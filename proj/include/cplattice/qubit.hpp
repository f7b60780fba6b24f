/**
 * This code is part of cplattice.
 *
 * (C) Copyright 2026 cplattice contributors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <array>
#include <cmath>

#include "cplattice/channel.hpp"
#include "cplattice/complex_matrix.hpp"
#include "cplattice/lattice.hpp"

namespace cplattice {

/// Canonical form of a qubit channel in the Pauli basis {I, sx, sy, sz}:
/// translation t = (t1, t2, t3) and scaling Lambda = (l1, l2, l3). Every
/// qubit channel reduces to this form up to unitary rotations on both sides.
struct KingRuskaiForm {
  std::array<double, 3> t{0.0, 0.0, 0.0};
  std::array<double, 3> lambda{0.0, 0.0, 0.0};
};

enum class QubitDegeneracy {
  None,
  ZeroDiagonal,
  Gamma23Boundary,
  Gamma13OrGamma24Boundary,
};

inline const char *to_string(QubitDegeneracy d) {
  switch (d) {
  case QubitDegeneracy::None:
    return "none";
  case QubitDegeneracy::ZeroDiagonal:
    return "zero_diagonal";
  case QubitDegeneracy::Gamma23Boundary:
    return "gamma_23_boundary";
  case QubitDegeneracy::Gamma13OrGamma24Boundary:
    return "gamma_13_or_24_boundary";
  }
  return "unknown";
}

/// Closed-form Schur parameters of a qubit channel, evaluated on the matrix
/// S = 2 S_adjoint. An entry is marked undefined when its denominator
/// degenerates; degenerate_case records the first degeneracy met.
struct QubitClosedFormParams {
  std::array<double, 4> gamma_diag{};
  Complex gamma_23{0.0}, gamma_13{0.0}, gamma_24{0.0}, gamma_14{0.0};
  bool has_23 = false, has_13 = false, has_24 = false, has_14 = false;
  QubitDegeneracy degenerate_case = QubitDegeneracy::None;
  int degenerate_index = -1; // 0-based diagonal index when ZeroDiagonal
};

/// Pauli-basis matrix representation of the channel: first column
/// (1, t1, t2, t3), diagonal (1, l1, l2, l3).
inline ComplexMatrix transfer_matrix(const KingRuskaiForm &p) {
  ComplexMatrix m(4, 4);
  m(0, 0) = 1.0;
  m(1, 0) = p.t[0];
  m(2, 0) = p.t[1];
  m(3, 0) = p.t[2];
  m(1, 1) = p.lambda[0];
  m(2, 2) = p.lambda[1];
  m(3, 3) = p.lambda[2];
  return m;
}

/// Explicit 4x4 Choi matrix S_Phi of the channel.
inline ChoiMatrix choi_forward(const KingRuskaiForm &p) {
  const double t1 = p.t[0], t2 = p.t[1], t3 = p.t[2];
  const double l1 = p.lambda[0], l2 = p.lambda[1], l3 = p.lambda[2];
  const Complex w(t1, t2); // t1 + i t2
  ComplexMatrix s(4, 4);
  s(0, 0) = 1 + t3 + l3;
  s(0, 1) = std::conj(w);
  s(0, 3) = l1 + l2;
  s(1, 0) = w;
  s(1, 1) = 1 - t3 - l3;
  s(1, 2) = l1 - l2;
  s(2, 1) = l1 - l2;
  s(2, 2) = 1 + t3 - l3;
  s(2, 3) = std::conj(w);
  s(3, 0) = l1 + l2;
  s(3, 2) = w;
  s(3, 3) = 1 - t3 + l3;
  return ChoiMatrix{2, Complex(0.5) * s};
}

/// Explicit 4x4 Choi matrix of the Hilbert-Schmidt adjoint channel.
inline ChoiMatrix choi_adjoint(const KingRuskaiForm &p) {
  const double t1 = p.t[0], t2 = p.t[1], t3 = p.t[2];
  const double l1 = p.lambda[0], l2 = p.lambda[1], l3 = p.lambda[2];
  const Complex w(t1, t2);
  ComplexMatrix s(4, 4);
  s(0, 0) = 1 + t3 + l3;
  s(0, 2) = w;
  s(0, 3) = l1 + l2;
  s(1, 1) = 1 + t3 - l3;
  s(1, 2) = l1 - l2;
  s(1, 3) = w;
  s(2, 0) = std::conj(w);
  s(2, 1) = l1 - l2;
  s(2, 2) = 1 - t3 - l3;
  s(3, 0) = l1 + l2;
  s(3, 1) = std::conj(w);
  s(3, 3) = 1 - t3 + l3;
  return ChoiMatrix{2, Complex(0.5) * s};
}

/// Closed-form Schur parameters on S = 2 S_adjoint:
///   diag = (1+t3+l3, 1+t3-l3, 1-t3-l3, 1-t3+l3), Gamma_12 = Gamma_34 = 0,
///   Gamma_23 = (l1-l2)/sqrt(G22 G33),
///   Gamma_13 = (t1+i t2) sqrt(G22) / (sqrt(G22 G33 - (l1-l2)^2) sqrt(G11)),
///   Gamma_24 = (t1+i t2) sqrt(G33) / (sqrt(G22 G33 - (l1-l2)^2) sqrt(G44)),
/// and Gamma_14 obtained by inverting
///   S_14 = sqrt(G11) (-G13 conj(G23) G24 + D13 Gamma_14 D24) sqrt(G44).
/// Degeneracy thresholds are evaluated on normalized quantities.
inline QubitClosedFormParams closed_form_params(const KingRuskaiForm &p,
                                                double tol = kDefaultTol) {
  const double t3 = p.t[2];
  const double l1 = p.lambda[0], l2 = p.lambda[1], l3 = p.lambda[2];
  const Complex w(p.t[0], p.t[1]);
  const double u = l1 - l2;
  const double v = l1 + l2;

  QubitClosedFormParams out;
  out.gamma_diag = {1 + t3 + l3, 1 + t3 - l3, 1 - t3 - l3, 1 - t3 + l3};

  double scale = 1.0;
  for (double d : out.gamma_diag)
    scale = std::max(scale, std::abs(d));
  const double eps = tol * scale;

  std::array<bool, 4> alive{};
  for (int k = 0; k < 4; ++k) {
    alive[k] = out.gamma_diag[k] > eps;
    if (!alive[k] && out.degenerate_case == QubitDegeneracy::None) {
      out.degenerate_case = QubitDegeneracy::ZeroDiagonal;
      out.degenerate_index = k;
    }
  }
  const auto &g = out.gamma_diag;

  if (alive[1] && alive[2]) {
    out.gamma_23 = u / std::sqrt(g[1] * g[2]);
    out.has_23 = true;
  }

  // 1 - |Gamma_23|^2 in exact closed form.
  const bool boundary_23 =
      out.has_23 && (g[1] * g[2] - u * u) <= tol * (g[1] * g[2]);
  if (boundary_23 && out.degenerate_case == QubitDegeneracy::None)
    out.degenerate_case = QubitDegeneracy::Gamma23Boundary;

  if (alive[0] && alive[2] && (!alive[1] || !boundary_23)) {
    if (alive[1])
      out.gamma_13 = w * std::sqrt(g[1]) /
                     (std::sqrt(g[1] * g[2] - u * u) * std::sqrt(g[0]));
    else
      out.gamma_13 = w / std::sqrt(g[0] * g[2]);
    out.has_13 = true;
  }
  if (alive[1] && alive[3] && (!alive[2] || !boundary_23)) {
    if (alive[2])
      out.gamma_24 = w * std::sqrt(g[2]) /
                     (std::sqrt(g[1] * g[2] - u * u) * std::sqrt(g[3]));
    else
      out.gamma_24 = w / std::sqrt(g[1] * g[3]);
    out.has_24 = true;
  }

  if (alive[0] && alive[3]) {
    const Complex g13 = out.has_13 ? out.gamma_13 : Complex(0.0);
    const Complex g24 = out.has_24 ? out.gamma_24 : Complex(0.0);
    const Complex g23 = out.has_23 ? out.gamma_23 : Complex(0.0);
    const double n13 = std::norm(g13), n24 = std::norm(g24);
    if (n13 <= 1.0 && n24 <= 1.0) {
      const double d13 = std::sqrt(1.0 - n13);
      const double d24 = std::sqrt(1.0 - n24);
      if (d13 * d24 > tol && (!out.has_23 || !boundary_23)) {
        out.gamma_14 = (v / std::sqrt(g[0] * g[3]) + g13 * std::conj(g23) * g24) /
                       (d13 * d24);
        out.has_14 = true;
      } else if (out.degenerate_case == QubitDegeneracy::None) {
        out.degenerate_case = QubitDegeneracy::Gamma13OrGamma24Boundary;
      }
    }
  }
  return out;
}

/// CP decision for a qubit channel from the closed forms alone: the four
/// diagonal inequalities Gamma_kk >= 0 and the four disk inequalities
/// |Gamma_23|, |Gamma_13|, |Gamma_24|, |Gamma_14| <= 1, with the degenerate
/// branches (zero diagonal rows, |Gamma_23| = 1 forcing t1 = t2 = 0, and
/// |Gamma_13| = 1 or |Gamma_24| = 1 pinning S_14 to the disk center).
/// No eigenvalue computation: O(1) arithmetic on (t, Lambda).
inline CpVerdict eight_inequalities_cp(const KingRuskaiForm &p,
                                       double tol = kDefaultTol) {
  const double t3 = p.t[2];
  const double l1 = p.lambda[0], l2 = p.lambda[1], l3 = p.lambda[2];
  const Complex w(p.t[0], p.t[1]);
  const double u = l1 - l2;
  const double v = l1 + l2;
  const std::array<double, 4> g{1 + t3 + l3, 1 + t3 - l3, 1 - t3 - l3,
                                1 - t3 + l3};

  double scale = 1.0;
  for (double d : g)
    scale = std::max(scale, std::abs(d));
  const double eps = tol * scale;

  auto fail = [&](ViolationKind kind, int k, int j, double mag) {
    CpVerdict verdict;
    verdict.is_cp = false;
    verdict.violation = Violation{kind, k, j, mag};
    return verdict;
  };

  std::array<bool, 4> alive{};
  for (int k = 0; k < 4; ++k) {
    if (g[k] < -eps)
      return fail(ViolationKind::NegativeDiagonal, k, k, g[k]);
    alive[k] = g[k] > eps;
  }

  // A zero diagonal forces its whole row of S = 2 S_adjoint to zero.
  // Row entries: rows 1 and 4 carry {w, v}, rows 2 and 3 carry {u, w}.
  for (int k = 0; k < 4; ++k) {
    if (alive[k])
      continue;
    const double row_max = (k == 0 || k == 3)
                               ? std::max(std::abs(w), std::abs(v))
                               : std::max(std::abs(u), std::abs(w));
    if (row_max > eps)
      return fail(ViolationKind::NonzeroRowAtZeroDiagonal, k, k, row_max);
  }

  auto clamp_unit = [](Complex z) {
    const double m = std::abs(z);
    return m > 1.0 ? z / m : z;
  };

  // (2,3): center 0, radius 1 whenever both ends are alive.
  OffParam g23;
  if (alive[1] && alive[2]) {
    const Complex val = u / std::sqrt(g[1] * g[2]);
    if (std::abs(val) > 1.0 + tol)
      return fail(ViolationKind::ParameterExceedsDisk, 1, 2, std::abs(val));
    g23 = OffParam{clamp_unit(val), true};
  }

  // (1,3): center 0, radius = defect(Gamma_23) while row 2 is alive.
  OffParam g13;
  if (alive[0] && alive[2]) {
    const double radius = alive[1] ? defect(g23.value) : 1.0;
    const Complex entry = w / std::sqrt(g[0] * g[2]);
    if (radius > tol) {
      const Complex val = entry / radius;
      if (std::abs(val) > 1.0 + tol)
        return fail(ViolationKind::ParameterExceedsDisk, 0, 2, std::abs(val));
      g13 = OffParam{clamp_unit(val), true};
    } else if (std::abs(entry) > tol) {
      return fail(ViolationKind::CompatibilityResidual, 0, 2, std::abs(entry));
    }
  }

  // (2,4): mirror of (1,3).
  OffParam g24;
  if (alive[1] && alive[3]) {
    const double radius = alive[2] ? defect(g23.value) : 1.0;
    const Complex entry = w / std::sqrt(g[1] * g[3]);
    if (radius > tol) {
      const Complex val = entry / radius;
      if (std::abs(val) > 1.0 + tol)
        return fail(ViolationKind::ParameterExceedsDisk, 1, 3, std::abs(val));
      g24 = OffParam{clamp_unit(val), true};
    } else if (std::abs(entry) > tol) {
      return fail(ViolationKind::CompatibilityResidual, 1, 3, std::abs(entry));
    }
  }

  // (1,4): center -Gamma_13 conj(Gamma_23) Gamma_24, radius D13 D24.
  // Inactive parameters enter as zero, which reproduces every degenerate
  // branch of the general Schur-complement disk.
  OffParam g14;
  if (alive[0] && alive[3]) {
    const Complex center = -g13.value * std::conj(g23.value) * g24.value;
    const double radius = defect(g13.value) * defect(g24.value);
    const Complex entry = v / std::sqrt(g[0] * g[3]);
    if (radius > tol) {
      const Complex val = (entry - center) / radius;
      if (std::abs(val) > 1.0 + tol)
        return fail(ViolationKind::ParameterExceedsDisk, 0, 3, std::abs(val));
      g14 = OffParam{clamp_unit(val), true};
    } else if (std::abs(entry - center) > tol) {
      return fail(ViolationKind::CompatibilityResidual, 0, 3,
                  std::abs(entry - center));
    }
  }

  CpVerdict verdict;
  verdict.is_cp = true;
  SchurParams params(4);
  for (int k = 0; k < 4; ++k)
    params.diag(k) = alive[k] ? g[k] : 0.0;
  params.off(0, 1) = OffParam{Complex(0.0), alive[0] && alive[1]};
  params.off(2, 3) = OffParam{Complex(0.0), alive[2] && alive[3]};
  params.off(1, 2) = g23;
  params.off(0, 2) = g13;
  params.off(1, 3) = g24;
  params.off(0, 3) = g14;
  verdict.params = std::move(params);
  return verdict;
}

} // namespace cplattice
