/**
 * This code is part of cplattice.
 *
 * (C) Copyright 2026 cplattice contributors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "cplattice/lattice_graph.hpp"
#include "dot_checker.hpp"

using namespace cplattice;
using test_support::DotParser;

namespace {

size_t count_occurrences(const std::string &text, const std::string &needle) {
  size_t count = 0;
  for (size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + 1))
    ++count;
  return count;
}

} // namespace

TEST_CASE("build_lattice_graph: N = 2") {
  const LatticeGraph g = build_lattice_graph(2);
  REQUIRE(g.nodes.size() == 3);
  int rotations = 0;
  for (const auto &node : g.nodes)
    if (node.kind == LatticeGraph::Node::Kind::Rotation) {
      ++rotations;
      CHECK(node.label == "U(\xce\x93_12)");
    }
  CHECK(rotations == 1);
  CHECK(g.edges.size() == 2);
  validate_lattice_graph(g);
}

TEST_CASE("build_lattice_graph: N = 4 matches the 10-node network") {
  const LatticeGraph g = build_lattice_graph(4);
  REQUIRE(g.nodes.size() == 10);

  std::set<std::string> rotation_labels, scaler_labels;
  for (const auto &node : g.nodes) {
    if (node.kind == LatticeGraph::Node::Kind::Rotation)
      rotation_labels.insert(node.label);
    else
      scaler_labels.insert(node.label);
  }
  CHECK(rotation_labels ==
        std::set<std::string>{"U(\xce\x93_12)", "U(\xce\x93_13)",
                              "U(\xce\x93_14)", "U(\xce\x93_23)",
                              "U(\xce\x93_24)", "U(\xce\x93_34)"});
  CHECK(scaler_labels.size() == 4);
  validate_lattice_graph(g);
}

TEST_CASE("build_lattice_graph: sizes 2..16 satisfy the invariants") {
  for (int n = 2; n <= 16; ++n) {
    const LatticeGraph g = build_lattice_graph(n);
    CHECK(g.nodes.size() ==
          static_cast<size_t>(n) + static_cast<size_t>(n) * (n - 1) / 2);
    validate_lattice_graph(g);
  }
  CHECK_THROWS_AS(build_lattice_graph(1), DimensionMismatchError);
}

TEST_CASE("emit_dot: N = 2 has exactly one rotation node") {
  const std::string dot = emit_dot(build_lattice_graph(2));
  CHECK(count_occurrences(dot, "U(\xce\x93_12)") == 1);
  const auto summary = DotParser(dot).parse();
  CHECK(summary.node_statements == 3);
  CHECK(summary.edge_statements == 2);
}

TEST_CASE("emit_dot: N = 4 parses and has 10 node statements") {
  const LatticeGraph g = build_lattice_graph(4);
  const std::string dot = emit_dot(g);
  const auto summary = DotParser(dot).parse();
  CHECK(summary.node_statements == 10);
  CHECK(summary.edge_statements == static_cast<int>(g.edges.size()));
}

TEST_CASE("emit_dot: annotation with identity-channel parameters") {
  // Identity channel on M_2: Gamma_14 = 1, everything else inactive.
  ComplexMatrix s(4, 4);
  s(0, 0) = s(0, 3) = s(3, 0) = s(3, 3) = 2.0;
  const SchurParams params = schur_params_from_matrix(s);

  const LatticeGraph g = build_lattice_graph(4);
  const std::string dot = emit_dot(g, &params);
  DotParser(dot).parse();

  CHECK(dot.find("U(\xce\x93_14)\\n1.00000") != std::string::npos);
  // The five inactive rotations are dashed.
  CHECK(count_occurrences(dot, "style=dashed") == 5);

  const SchurParams wrong(3);
  CHECK_THROWS_AS(emit_dot(g, &wrong), DimensionMismatchError);
}

TEST_CASE("emit_dot: complex annotations stay parseable") {
  ComplexMatrix s = ComplexMatrix::identity(4);
  s(0, 1) = Complex(0.25, -0.125);
  s(1, 0) = std::conj(s(0, 1));
  const SchurParams params = schur_params_from_matrix(s);
  const std::string dot = emit_dot(build_lattice_graph(4), &params);
  DotParser(dot).parse();
  CHECK(dot.find("0.250000") != std::string::npos);
  CHECK(dot.find("-0.125000i") != std::string::npos);
}
