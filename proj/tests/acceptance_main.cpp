/**
 * This code is part of cplattice.
 *
 * (C) Copyright 2026 cplattice contributors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Each check pins its sample counts and tolerances in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "cplattice/channel_spec.hpp"
#include "cplattice/json_io.hpp"
#include "cplattice/lattice.hpp"
#include "cplattice/lattice_graph.hpp"
#include "cplattice/qubit.hpp"
#include "dot_checker.hpp"
#include "test_support.hpp"

using namespace cplattice;
using test_support::max_diff;

namespace {

int failures = 0;

void report(int index, const std::string &name, bool pass,
            const std::string &detail) {
  std::printf("criterion %d [%s]: %s (%s)\n", index, name.c_str(),
              pass ? "PASS" : "FAIL", detail.c_str());
  if (!pass)
    ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

ComplexMatrix indefinite_perturbation(Rng &rng, ComplexMatrix s) {
  const int n = s.rows();
  ComplexMatrix w = test_support::random_gaussian(rng, n, 1);
  double wn = 0.0;
  for (int i = 0; i < n; ++i)
    wn += std::norm(w(i, 0));
  Complex ray = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      ray += std::conj(w(i, 0)) * s(i, j) * w(j, 0);
  const double coeff = 1.5 * ray.real() / (wn * wn);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      s(i, j) -= coeff * w(i, 0) * std::conj(w(j, 0));
  return s;
}

// ---------------------------------------------------------------------------

void criterion_1_oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(1001);
  int agree = 0, total = 0;
  for (const int n : {4, 9}) {
    for (int trial = 0; trial < 500; ++trial) {
      ComplexMatrix s = test_support::random_psd(rng, n);
      if (trial % 2 == 1)
        s = indefinite_perturbation(rng, s);
      ++total;
      if (cp_test_matrix(s, 1e-8).is_cp == is_psd_oracle(s, 1e-8))
        ++agree;
    }
  }
  const double dt = seconds_since(t0);
  char detail[128];
  std::snprintf(detail, sizeof(detail), "%d/%d agreements, %.2f s", agree,
                total, dt);
  report(1, "oracle equivalence at 1e-8", agree == total && dt < 5.0, detail);
}

void criterion_2_bijection() {
  Rng rng(1002);
  double worst_params = 0.0, worst_matrix = 0.0;

  for (const int n : {4, 9}) {
    for (int trial = 0; trial < 100; ++trial) {
      SchurParams p(n);
      for (int k = 0; k < n; ++k)
        p.diag(k) = std::norm(rng.complex_gaussian());
      for (int k = 0; k < n; ++k)
        for (int j = k + 1; j < n; ++j)
          p.off(k, j) = OffParam{rng.disk(0.99), true};

      const ComplexMatrix s = matrix_from_schur_params(p);
      const SchurParams q = schur_params_from_matrix(s);
      for (int k = 0; k < n; ++k)
        worst_params = std::max(worst_params, std::abs(p.diag(k) - q.diag(k)));
      for (int k = 0; k < n; ++k)
        for (int j = k + 1; j < n; ++j) {
          if (!q.off(k, j).active) {
            worst_params = 1.0;
            continue;
          }
          worst_params = std::max(
              worst_params, std::abs(p.off(k, j).value - q.off(k, j).value));
        }
    }
    for (int trial = 0; trial < 100; ++trial) {
      const ComplexMatrix s = test_support::random_psd(rng, n);
      const ComplexMatrix back =
          matrix_from_schur_params(schur_params_from_matrix(s));
      worst_matrix =
          std::max(worst_matrix, max_diff(back, s) / s.frobenius_norm());
    }
  }
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "params->matrix->params max err %.3g, matrix direction "
                "relative err %.3g",
                worst_params, worst_matrix);
  report(2, "bijection round-trips under 1e-9",
         worst_params < 1e-9 && worst_matrix < 1e-9, detail);
}

void criterion_3_closed_forms() {
  Rng rng(1003);
  double worst_choi = 0.0, worst_gamma = 0.0;
  int verdict_matches = 0, cp_nondegenerate = 0;
  const int total = 1000;

  // Independent Choi construction through the Pauli transfer matrix.
  auto pauli = [](int i) {
    switch (i) {
    case 1:
      return ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}};
    case 2:
      return ComplexMatrix{{0.0, Complex(0.0, -1.0)},
                           {Complex(0.0, 1.0), 0.0}};
    case 3:
      return ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}};
    default:
      return ComplexMatrix::identity(2);
    }
  };
  auto choi_via_transfer = [&](const ComplexMatrix &transfer) {
    ComplexMatrix s(4, 4);
    for (int k = 0; k < 2; ++k)
      for (int j = 0; j < 2; ++j) {
        ComplexMatrix unit(2, 2);
        unit(k, j) = 1.0;
        ComplexMatrix block(2, 2);
        for (int a = 0; a < 4; ++a) {
          Complex mapped = 0.0;
          for (int b = 0; b < 4; ++b)
            mapped += transfer(a, b) * ((pauli(b) * unit).trace() * 0.5);
          block = block + mapped * pauli(a);
        }
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            s(k * 2 + a, j * 2 + b) = block(a, b);
      }
    return s;
  };

  auto check_gamma_match = [&](const KingRuskaiForm &p,
                               const CpVerdict &closed,
                               const CpVerdict &general) {
    if (!closed.is_cp || !general.is_cp)
      return;
    const QubitClosedFormParams cf = closed_form_params(p);
    if (cf.degenerate_case != QubitDegeneracy::None)
      return;
    ++cp_nondegenerate;
    const SchurParams &lat = *general.params;
    worst_gamma = std::max(worst_gamma, std::abs(cf.gamma_23 - lat.off(1, 2).value));
    worst_gamma = std::max(worst_gamma, std::abs(cf.gamma_13 - lat.off(0, 2).value));
    worst_gamma = std::max(worst_gamma, std::abs(cf.gamma_24 - lat.off(1, 3).value));
    worst_gamma = std::max(worst_gamma, std::abs(cf.gamma_14 - lat.off(0, 3).value));
  };

  for (int trial = 0; trial < total; ++trial) {
    KingRuskaiForm p;
    for (int i = 0; i < 3; ++i) {
      p.t[i] = rng.uniform(-1.5, 1.5);
      p.lambda[i] = rng.uniform(-1.5, 1.5);
    }
    const ComplexMatrix t = transfer_matrix(p);

    // (a) the two explicit 4x4 Choi matrices.
    worst_choi = std::max(worst_choi,
                          max_diff(choi_forward(p).S, choi_via_transfer(t)));
    worst_choi = std::max(
        worst_choi,
        max_diff(choi_adjoint(p).S, choi_via_transfer(t.transpose())));

    // (c) verdict agreement.
    const CpVerdict closed = eight_inequalities_cp(p, 1e-8);
    const CpVerdict general =
        cp_test_matrix(Complex(2.0) * choi_adjoint(p).S, 1e-8);
    const bool oracle = is_psd_oracle(choi_adjoint(p).S, 1e-8);
    if (closed.is_cp == general.is_cp && general.is_cp == oracle)
      ++verdict_matches;

    // (b) closed-form parameters on CP nondegenerate instances.
    check_gamma_match(p, closed, general);
  }

  // The uniform box is almost entirely non-CP (about 0.2% CP), so draw a
  // supplementary CP-rich sample to give part (b) real coverage.
  for (int trial = 0; trial < 1000; ++trial) {
    KingRuskaiForm p;
    for (int i = 0; i < 3; ++i) {
      p.t[i] = rng.uniform(-0.25, 0.25);
      p.lambda[i] = rng.uniform(-0.8, 0.8);
    }
    const CpVerdict closed = eight_inequalities_cp(p, 1e-8);
    const CpVerdict general =
        cp_test_matrix(Complex(2.0) * choi_adjoint(p).S, 1e-8);
    check_gamma_match(p, closed, general);
  }

  char detail[200];
  std::snprintf(detail, sizeof(detail),
                "choi err %.3g (<=1e-13), gamma err %.3g (<=1e-10) on %d CP "
                "nondegenerate, verdicts %d/%d",
                worst_choi, worst_gamma, cp_nondegenerate, verdict_matches,
                total);
  report(3, "closed forms against channel module and lattice",
         worst_choi <= 1e-13 && worst_gamma <= 1e-10 &&
             verdict_matches == total && cp_nondegenerate >= 100,
         detail);
}

void criterion_4_disk_identities() {
  Rng rng(1004);
  double worst_gap2 = 0.0, worst_corner = 0.0;

  for (int trial = 0; trial < 1000; ++trial) {
    const Complex g1 = rng.disk(0.999), g2 = rng.disk(0.999);
    ComplexMatrix st = ComplexMatrix::identity(3);
    st(0, 1) = g1;
    st(1, 0) = std::conj(g1);
    st(1, 2) = g2;
    st(2, 1) = std::conj(g2);
    const DiskGeometry disk = disk_geometry(st, 0, 2);
    worst_gap2 = std::max(worst_gap2, std::abs(disk.center - g1 * g2));
    worst_gap2 = std::max(
        worst_gap2, std::abs(disk.radius - defect(g1) * defect(g2)));
  }

  for (int trial = 0; trial < 1000; ++trial) {
    const Complex g23 = rng.disk(0.999), g13 = rng.disk(0.999),
                  g24 = rng.disk(0.999);
    ComplexMatrix st = ComplexMatrix::identity(4);
    st(1, 2) = g23;
    st(2, 1) = std::conj(g23);
    st(0, 2) = g13 * defect(g23);
    st(2, 0) = std::conj(st(0, 2));
    st(1, 3) = g24 * defect(g23);
    st(3, 1) = std::conj(st(1, 3));
    const DiskGeometry disk = disk_geometry(st, 0, 3);
    worst_corner = std::max(
        worst_corner, std::abs(disk.center - (-g13 * std::conj(g23) * g24)));
    worst_corner = std::max(
        worst_corner, std::abs(disk.radius - defect(g13) * defect(g24)));
  }

  char detail[128];
  std::snprintf(detail, sizeof(detail), "gap-2 err %.3g, corner err %.3g",
                worst_gap2, worst_corner);
  report(4, "disk formula pinned to explicit instances at 1e-12",
         worst_gap2 <= 1e-12 && worst_corner <= 1e-12, detail);
}

void criterion_5_degenerate_cases() {
  bool ok = true;
  std::string why = "all degenerate rules hold";

  ComplexMatrix s(4, 4);
  s(0, 0) = s(0, 3) = s(3, 0) = s(3, 3) = 2.0;
  const CpVerdict identity = cp_test_matrix(s);
  if (!identity.is_cp) {
    ok = false;
    why = "identity channel rejected";
  } else {
    const SchurParams &p = *identity.params;
    if (p.diag(0) != 2.0 || p.diag(1) != 0.0 || p.diag(2) != 0.0 ||
        p.diag(3) != 2.0) {
      ok = false;
      why = "identity diag wrong";
    }
    if (!p.off(0, 3).active ||
        std::abs(p.off(0, 3).value - Complex(1.0)) > 1e-12) {
      ok = false;
      why = "Gamma_14 != 1";
    }
    for (int k = 0; k < 4 && ok; ++k)
      for (int j = k + 1; j < 4 && ok; ++j)
        if (!(k == 0 && j == 3) && p.off(k, j).active) {
          ok = false;
          why = "spurious active parameter";
        }
  }

  auto depol_cp = [](double lam) {
    return eight_inequalities_cp(KingRuskaiForm{{0, 0, 0}, {lam, lam, lam}})
        .is_cp;
  };
  auto depol_general = [](double lam) {
    ComplexMatrix m(4, 4);
    m(0, 0) = m(3, 3) = 1 + lam;
    m(1, 1) = m(2, 2) = 1 - lam;
    m(0, 3) = m(3, 0) = 2 * lam;
    return cp_test_matrix(m).is_cp;
  };
  const double third = 1.0 / 3.0;
  for (auto cp : {std::function<bool(double)>(depol_cp),
                  std::function<bool(double)>(depol_general)}) {
    if (!cp(-third + 1e-6) || cp(-third - 1e-6) || !cp(-third)) {
      ok = false;
      why = "depolarizing boundary at -1/3 misplaced";
    }
  }
  report(5, "identity-channel degeneracy and depolarizing boundary", ok, why);
}

void criterion_6_structural_invariants() {
  Rng rng(1006);
  bool ok = true;
  std::string why = "all structural identities hold";

  for (int trial = 0; trial < 200 && ok; ++trial) {
    const int n = 2 + trial % 2;
    KrausSet k{n, {}};
    const int count = 1 + trial % 3;
    for (int i = 0; i < count; ++i)
      k.ops.push_back(test_support::random_gaussian(rng, n, n));
    const ChoiMatrix c = choi_from_kraus(k);
    if (is_trace_preserving(c, 1e-9) != is_unital(adjoint_choi(c), 1e-9)) {
      ok = false;
      why = "trace-preserving <-> adjoint unital failed";
    }
    if (max_diff(adjoint_choi(adjoint_choi(c)).S, c.S) != 0.0) {
      ok = false;
      why = "adjoint involution not exact";
    }
  }

  for (int trial = 0; trial < 100 && ok; ++trial) {
    const int n = 2;
    KrausSet k1{n, {test_support::random_gaussian(rng, n, n)}};
    KrausSet k2{n, {test_support::random_gaussian(rng, n, n)}};
    const ChoiMatrix c1 = choi_from_kraus(k1);
    const ChoiMatrix c2 = choi_from_kraus(k2);
    const double alpha = rng.uniform();

    ComplexMatrix blended(n * n, n * n);
    for (int kk = 0; kk < n; ++kk)
      for (int jj = 0; jj < n; ++jj) {
        ComplexMatrix unit(n, n);
        unit(kk, jj) = 1.0;
        const ComplexMatrix block =
            Complex(alpha) * apply_channel(c1, unit) +
            Complex(1.0 - alpha) * apply_channel(c2, unit);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            blended(kk * n + a, jj * n + b) = block(a, b);
      }
    const ComplexMatrix direct =
        Complex(alpha) * c1.S + Complex(1.0 - alpha) * c2.S;
    if (!(blended == direct)) {
      ok = false;
      why = "affinity not exact";
    }
  }
  report(6, "trace/unitality duality, affinity, involution", ok, why);
}

struct CommandResult {
  int exit_code = -1;
  std::string out;
};

CommandResult run_command(const std::string &cmd_line,
                          const std::string &out_path) {
  const std::string cmd = cmd_line + " > " + out_path + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  CommandResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream f(out_path);
  std::ostringstream ss;
  ss << f.rdbuf();
  r.out = ss.str();
  return r;
}

void criterion_7_batch_performance() {
  char tmpl[] = "/tmp/cplattice_accept_XXXXXX";
  const std::string dir = mkdtemp(tmpl);
  const std::string cli = CPLATTICE_CLI_PATH;
  Rng rng(1007);

  // 1e5 qubit channels through the closed-form path.
  const std::string qubit_batch = dir + "/qubit.jsonl";
  {
    std::ofstream f(qubit_batch);
    for (int i = 0; i < 100000; ++i) {
      json j;
      j["t"] = {rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5),
                rng.uniform(-1.5, 1.5)};
      j["lambda"] = {rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5),
                     rng.uniform(-1.5, 1.5)};
      f << j.dump() << "\n";
    }
  }
  auto t0 = std::chrono::steady_clock::now();
  const CommandResult qubit_run = run_command(
      cli + " qubit --mode closed-form --batch " + qubit_batch,
      dir + "/qubit.out");
  const double qubit_time = seconds_since(t0);

  // 1e4 general 4x4 lattice tests, mixed CP and not.
  const std::string general_batch = dir + "/general.jsonl";
  {
    std::ofstream f(general_batch);
    for (int i = 0; i < 10000; ++i) {
      ChannelSpec spec;
      spec.n = 2;
      ChoiMatrix c = random_cp(2, 20000 + i);
      if (i % 2 == 1) {
        // Push one entry outside its disk.
        c.S(0, 3) += Complex(2.0 * std::sqrt(c.S(0, 0).real() *
                                             c.S(3, 3).real()));
        c.S(3, 0) = std::conj(c.S(0, 3));
      }
      spec.rep = c;
      f << channel_to_json(spec).dump() << "\n";
    }
  }
  t0 = std::chrono::steady_clock::now();
  const CommandResult general_run = run_command(
      cli + " test-cp --batch " + general_batch, dir + "/general.out");
  const double general_time = seconds_since(t0);

  // Parallelism must not change the bytes.
  const CommandResult jobs1 = run_command(
      cli + " test-cp --batch " + general_batch + " --jobs 1",
      dir + "/general1.out");
  const CommandResult jobs4 = run_command(
      cli + " test-cp --batch " + general_batch + " --jobs 4",
      dir + "/general4.out");
  const bool stable = jobs1.out == jobs4.out && jobs1.out == general_run.out;

  size_t qubit_lines = 0, general_lines = 0;
  for (char ch : qubit_run.out)
    qubit_lines += ch == '\n';
  for (char ch : general_run.out)
    general_lines += ch == '\n';

  const bool ok = qubit_run.exit_code == 0 && general_run.exit_code == 0 &&
                  qubit_lines == 100000 && general_lines == 10000 &&
                  qubit_time < 2.0 && general_time < 5.0 && stable;
  char detail[200];
  std::snprintf(detail, sizeof(detail),
                "1e5 closed-form in %.2f s (<2), 1e4 general in %.2f s (<5), "
                "parallelism-stable=%s",
                qubit_time, general_time, stable ? "yes" : "no");
  report(7, "batch performance targets", ok, detail);
  [[maybe_unused]] const int rc = std::system(("rm -rf " + dir).c_str());
}

void criterion_8_figure_reproduction() {
  bool ok = true;
  std::string why = "10 nodes, six rotation labels, DOT parses";
  const LatticeGraph g = build_lattice_graph(4);
  if (g.nodes.size() != 10) {
    ok = false;
    why = "node count != 10";
  }
  std::set<std::string> rotations;
  int scalers = 0;
  for (const auto &node : g.nodes) {
    if (node.kind == LatticeGraph::Node::Kind::Rotation)
      rotations.insert(node.label);
    else
      ++scalers;
  }
  const std::set<std::string> want{"U(\xce\x93_12)", "U(\xce\x93_13)",
                                   "U(\xce\x93_14)", "U(\xce\x93_23)",
                                   "U(\xce\x93_24)", "U(\xce\x93_34)"};
  if (rotations != want || scalers != 4) {
    ok = false;
    why = "rotation labels or scaler count off";
  }
  try {
    validate_lattice_graph(g);
    test_support::DotParser(emit_dot(g)).parse();
  } catch (const std::exception &e) {
    ok = false;
    why = e.what();
  }
  report(8, "lattice network for N = 4", ok, why);
}

} // namespace

int main() {
  criterion_1_oracle_equivalence();
  criterion_2_bijection();
  criterion_3_closed_forms();
  criterion_4_disk_identities();
  criterion_5_degenerate_cases();
  criterion_6_structural_invariants();
  criterion_7_batch_performance();
  criterion_8_figure_reproduction();

  if (failures == 0)
    std::printf("acceptance: 8/8 criteria passed\n");
  else
    std::printf("acceptance: %d of 8 criteria FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
