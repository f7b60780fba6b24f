/**
 * This code is part of cplattice.
 *
 * (C) Copyright 2026 cplattice contributors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "cplattice/channel_spec.hpp"
#include "cplattice/json_io.hpp"
#include "cplattice/lattice.hpp"
#include "cplattice/lattice_graph.hpp"
#include "cplattice/qubit.hpp"
#include "cplattice/version.hpp"

namespace {

using namespace cplattice;

// Exit codes: 0 = CP / success, 1 = not CP, 2 = malformed input,
// 3 = internal consistency failure (qubit --mode both disagreement).
constexpr int kExitCp = 0;
constexpr int kExitNotCp = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitInconsistent = 3;

std::string read_stream(std::istream &in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string read_input(const std::string &path) {
  if (path.empty() || path == "-")
    return read_stream(std::cin);
  std::ifstream f(path);
  if (!f)
    throw ParseError("cannot open input file: " + path);
  return read_stream(f);
}

/// Views of the non-empty lines of `all`; valid while `all`'s buffer lives.
std::vector<std::string_view> split_lines(std::string_view all) {
  std::vector<std::string_view> lines;
  size_t pos = 0;
  while (pos < all.size()) {
    size_t end = all.find('\n', pos);
    if (end == std::string_view::npos)
      end = all.size();
    if (end > pos)
      lines.push_back(all.substr(pos, end - pos));
    pos = end + 1;
  }
  return lines;
}

void print_doc(const json &doc) { std::cout << doc.dump() << "\n"; }

/// Run per_line over all lines with the requested parallelism, preserving
/// input order in the output. per_line must be pure.
template <typename Fn>
std::vector<std::string> run_batch(const std::vector<std::string_view> &lines,
                                   int jobs, Fn per_line) {
  if (jobs <= 0)
    jobs = static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::max(1, std::min<int>(jobs, 64));

  std::vector<std::string> results(lines.size());
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::string first_error;
  size_t first_error_line = 0;

  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= lines.size() || failed.load(std::memory_order_relaxed))
        return;
      try {
        results[i] = per_line(lines[i]);
      } catch (const std::exception &e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!failed.exchange(true)) {
          first_error = e.what();
          first_error_line = i + 1;
        }
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back(worker);
  for (auto &t : pool)
    t.join();

  if (failed.load())
    throw ParseError("batch line " + std::to_string(first_error_line) + ": " +
                     first_error);
  return results;
}

int finish_verdict(const CpVerdict &verdict, double tol,
                   const std::string &digest, bool include_params) {
  print_doc(verdict_to_json(verdict, tol, digest, include_params));
  return verdict.is_cp ? kExitCp : kExitNotCp;
}

void print_lines(const std::vector<std::string> &results) {
  std::string out;
  size_t total = 0;
  for (const auto &r : results)
    total += r.size() + 1;
  out.reserve(total);
  for (const auto &r : results) {
    out += r;
    out += '\n';
  }
  std::cout << out;
}

int cmd_test_cp(const std::string &input, double tol,
                const std::string &batch, int jobs, bool include_params) {
  if (!batch.empty()) {
    const std::string content = read_input(batch);
    const std::string tol_literal = json(tol).dump();
    const auto results =
        run_batch(split_lines(content), jobs, [&](std::string_view line) {
          const ChannelSpec spec = channel_from_json(json::parse(line));
          const CpVerdict verdict = cp_test_matrix(analysis_matrix(spec), tol);
          return verdict_to_line(verdict, tol_literal, fnv1a_digest(line));
        });
    print_lines(results);
    return kExitCp;
  }
  const std::string raw = read_input(input);
  const ChannelSpec spec = channel_from_json(json::parse(raw));
  const CpVerdict verdict = cp_test_matrix(analysis_matrix(spec), tol);
  return finish_verdict(verdict, tol, fnv1a_digest(raw), include_params);
}

int cmd_reconstruct(const std::string &input, double tol) {
  const std::string raw = read_input(input);
  const SchurParams params = params_from_json(json::parse(raw));
  const int dim = params.size();
  const int n = static_cast<int>(std::lround(std::sqrt(double(dim))));
  if (n * n != dim)
    throw ParseError("params dimension " + std::to_string(dim) +
                     " is not a perfect square, cannot form a Choi matrix");
  ComplexMatrix s = matrix_from_schur_params(params, tol);
  ChannelSpec spec;
  spec.n = n;
  spec.rep = ChoiMatrix{n, std::move(s)};
  print_doc(channel_to_json(spec));
  return kExitCp;
}

struct QubitVerdict {
  CpVerdict verdict;
  bool consistent = true;
};

QubitVerdict run_qubit(const KingRuskaiForm &p, const std::string &mode,
                       double tol) {
  QubitVerdict out;
  if (mode == "general") {
    out.verdict = cp_test_matrix(Complex(2.0) * choi_adjoint(p).S, tol);
    return out;
  }
  out.verdict = eight_inequalities_cp(p, tol);
  if (mode == "both") {
    const CpVerdict general =
        cp_test_matrix(Complex(2.0) * choi_adjoint(p).S, tol);
    out.consistent = out.verdict.is_cp == general.is_cp;
    if (out.consistent && out.verdict.is_cp) {
      for (int k = 0; k < 4 && out.consistent; ++k)
        for (int j = k + 1; j < 4 && out.consistent; ++j) {
          const OffParam &a = out.verdict.params->off(k, j);
          const OffParam &b = general.params->off(k, j);
          if (a.active != b.active || std::abs(a.value - b.value) > 1e-8)
            out.consistent = false;
        }
    }
  }
  return out;
}

KingRuskaiForm form_from_batch_line(const json &doc) {
  if (doc.contains("kind")) {
    const ChannelSpec spec = channel_from_json(doc);
    if (!spec.is_pauli())
      throw ParseError("qubit batch lines must be pauli_transfer documents");
    return std::get<KingRuskaiForm>(spec.rep);
  }
  KingRuskaiForm p;
  for (auto [key, dest] : {std::pair<const char *, double *>{"t", p.t.data()},
                           {"lambda", p.lambda.data()}}) {
    if (!doc.contains(key) || !doc[key].is_array() || doc[key].size() != 3)
      throw ParseError(std::string("qubit batch line needs a 3-vector \"") +
                       key + "\"");
    for (int i = 0; i < 3; ++i) {
      if (!doc[key][i].is_number())
        throw ParseError("qubit parameters must be real numbers");
      dest[i] = doc[key][i].get<double>();
      if (!std::isfinite(dest[i]))
        throw ParseError("qubit parameters must be finite");
    }
  }
  return p;
}

int cmd_qubit(const std::vector<double> &t, const std::vector<double> &lambda,
              const std::string &mode, double tol, const std::string &batch,
              int jobs) {
  if (!batch.empty()) {
    const std::string content = read_input(batch);
    const std::string tol_literal = json(tol).dump();
    std::atomic<bool> mismatch{false};
    const auto results =
        run_batch(split_lines(content), jobs, [&](std::string_view line) {
          const KingRuskaiForm p = form_from_batch_line(json::parse(line));
          // Batch lines carry verdicts only; single invocations add params.
          const QubitVerdict out = run_qubit(p, mode, tol);
          if (!out.consistent)
            mismatch.store(true, std::memory_order_relaxed);
          return verdict_to_line(out.verdict, tol_literal, fnv1a_digest(line));
        });
    print_lines(results);
    if (mismatch.load()) {
      std::cerr << "cplattice qubit: closed-form and general verdicts "
                   "disagree\n";
      return kExitInconsistent;
    }
    return kExitCp;
  }

  KingRuskaiForm p;
  for (int i = 0; i < 3; ++i) {
    if (!std::isfinite(t[i]) || !std::isfinite(lambda[i]))
      throw ParseError("qubit parameters must be finite");
    p.t[i] = t[i];
    p.lambda[i] = lambda[i];
  }
  ChannelSpec spec;
  spec.n = 2;
  spec.rep = p;
  const QubitVerdict out = run_qubit(p, mode, tol);
  print_doc(verdict_to_json(out.verdict, tol,
                            fnv1a_digest(channel_to_json(spec).dump()), true));
  if (!out.consistent) {
    std::cerr << "cplattice qubit: closed-form and general verdicts "
                 "disagree\n";
    return kExitInconsistent;
  }
  return out.verdict.is_cp ? kExitCp : kExitNotCp;
}

int cmd_lattice_dot(int n, const std::string &params_path) {
  const LatticeGraph g = build_lattice_graph(n);
  if (params_path.empty()) {
    std::cout << emit_dot(g);
    return kExitCp;
  }
  const SchurParams params = params_from_json(json::parse(read_input(params_path)));
  std::cout << emit_dot(g, &params);
  return kExitCp;
}

int cmd_random(int n, std::uint64_t seed) {
  ChannelSpec spec;
  spec.n = n;
  spec.rep = random_cp(n, seed);
  print_doc(channel_to_json(spec));
  return kExitCp;
}

} // namespace

int main(int argc, char **argv) {
  std::ios::sync_with_stdio(false);

  CLI::App app{"Schur-parameter lattice tests for completely positive maps"};
  app.set_version_flag("--version", std::string("cplattice ") + kVersion);
  app.require_subcommand(1);

  double tol = kDefaultTol;
  if (const char *env = std::getenv("CP_LATTICE_TOL")) {
    char *end = nullptr;
    const double parsed = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(parsed > 0.0)) {
      std::cerr << "cplattice: CP_LATTICE_TOL is not a positive number\n";
      return kExitBadInput;
    }
    tol = parsed;
  }

  std::string input = "-";
  std::string batch;
  int jobs = 0;

  auto *test_cp = app.add_subcommand(
      "test-cp", "Decide complete positivity of a channel document");
  test_cp->add_option("input", input, "channel JSON file ('-' for stdin)");
  test_cp->add_option("--tol", tol, "relative tolerance");
  test_cp->add_option("--batch", batch,
                      "file with one channel document per line");
  test_cp->add_option("--jobs", jobs, "batch worker threads (0 = auto)");

  auto *params_cmd = app.add_subcommand(
      "params", "Extract the full Schur parameter family of a CP channel");
  params_cmd->add_option("input", input, "channel JSON file ('-' for stdin)");
  params_cmd->add_option("--tol", tol, "relative tolerance");

  auto *reconstruct = app.add_subcommand(
      "reconstruct", "Rebuild the Choi matrix from a parameter document");
  reconstruct->add_option("input", input, "params JSON file ('-' for stdin)");
  reconstruct->add_option("--tol", tol, "relative tolerance");

  std::vector<double> t{0.0, 0.0, 0.0}, lambda{0.0, 0.0, 0.0};
  std::string mode = "closed-form";
  auto *qubit = app.add_subcommand(
      "qubit", "CP test for a qubit channel given in canonical (t, Lambda) form");
  qubit->add_option("--t", t, "translation t1,t2,t3")
      ->delimiter(',')
      ->expected(3);
  qubit->add_option("--lambda", lambda, "scaling l1,l2,l3")
      ->delimiter(',')
      ->expected(3);
  qubit->add_option("--mode", mode, "closed-form | general | both")
      ->check(CLI::IsMember({"closed-form", "general", "both"}));
  qubit->add_option("--tol", tol, "relative tolerance");
  qubit->add_option("--batch", batch, "file with one JSON line per channel");
  qubit->add_option("--jobs", jobs, "batch worker threads (0 = auto)");

  int n = 0;
  std::string params_path;
  auto *lattice_dot = app.add_subcommand(
      "lattice-dot", "Emit the lattice network for an N x N family as DOT");
  lattice_dot->add_option("--n", n, "parameter family size N")->required();
  lattice_dot->add_option("--params", params_path,
                          "params JSON file for node annotations");

  std::uint64_t seed = 0;
  int random_n = 0;
  auto *random_cmd = app.add_subcommand(
      "random", "Generate a deterministic random CP channel document");
  random_cmd->add_option("--n", random_n, "matrix algebra dimension n")
      ->required();
  random_cmd->add_option("--seed", seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitBadInput;
  }

  try {
    if (test_cp->parsed())
      return cmd_test_cp(input, tol, batch, jobs, false);
    if (params_cmd->parsed())
      return cmd_test_cp(input, tol, "", 0, true);
    if (reconstruct->parsed())
      return cmd_reconstruct(input, tol);
    if (qubit->parsed())
      return cmd_qubit(t, lambda, mode, tol, batch, jobs);
    if (lattice_dot->parsed())
      return cmd_lattice_dot(n, params_path);
    if (random_cmd->parsed())
      return cmd_random(random_n, seed);
  } catch (const json::exception &e) {
    std::cerr << "cplattice: invalid JSON: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception &e) {
    std::cerr << "cplattice: " << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitBadInput;
}
