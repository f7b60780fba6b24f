/**
 * This code is part of cplattice.
 *
 * (C) Copyright 2026 cplattice contributors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cplattice/errors.hpp"
#include "cplattice/lattice.hpp"

namespace cplattice {

/// Cascade network realizing the Schur parametrization: one scaler per
/// diagonal entry (Gamma_kk^{1/2}) and one elementary rotation U(Gamma_kj)
/// per off-diagonal parameter. Node indices in ids and labels are 1-based to
/// match the usual notation.
struct LatticeGraph {
  struct Node {
    enum class Kind { Scaler, Rotation };
    Kind kind;
    int k = 0; // 1-based
    int j = 0; // 1-based; k == j for scalers
    std::string id;
    std::string label;
  };

  /// Directed edge between node indices, annotated with the rotation ports
  /// it attaches to ("a" is the transmitted path, "b" the crossed one).
  struct Edge {
    int from = 0;
    int to = 0;
    std::string from_port;
    std::string to_port;
  };

  int n = 0;
  std::vector<Node> nodes;
  std::vector<Edge> edges;
};

/// Staircase cascade for an N x N parameter family. Rotation(k, j) receives
/// from Rotation(k, j-1) and Rotation(k+1, j), falling back to the scaler
/// when the predecessor collapses onto the diagonal. Boundary out-ports
/// (k = 1 or j = N) are the network outputs and carry no edge.
inline LatticeGraph build_lattice_graph(int n) {
  if (n < 2)
    throw DimensionMismatchError("build_lattice_graph: need N >= 2");

  LatticeGraph g;
  g.n = n;
  std::map<std::pair<int, int>, int> index;

  for (int k = 1; k <= n; ++k) {
    LatticeGraph::Node node;
    node.kind = LatticeGraph::Node::Kind::Scaler;
    node.k = node.j = k;
    node.id = "s" + std::to_string(k);
    node.label = "\xce\x93_" + std::to_string(k) + std::to_string(k) + "^{1/2}";
    index[{k, k}] = static_cast<int>(g.nodes.size());
    g.nodes.push_back(std::move(node));
  }
  for (int gap = 1; gap < n; ++gap)
    for (int k = 1; k + gap <= n; ++k) {
      const int j = k + gap;
      LatticeGraph::Node node;
      node.kind = LatticeGraph::Node::Kind::Rotation;
      node.k = k;
      node.j = j;
      node.id = "r" + std::to_string(k) + "_" + std::to_string(j);
      node.label = "U(\xce\x93_" + std::to_string(k) + std::to_string(j) + ")";
      index[{k, j}] = static_cast<int>(g.nodes.size());
      g.nodes.push_back(std::move(node));
    }

  for (int k = 1; k <= n; ++k)
    for (int j = k + 1; j <= n; ++j) {
      const int me = index[{k, j}];
      const int from_a = (j - 1 > k) ? index[{k, j - 1}] : index[{k, k}];
      const int from_b = (k + 1 < j) ? index[{k + 1, j}] : index[{j, j}];
      g.edges.push_back({from_a, me, "a", "a"});
      g.edges.push_back({from_b, me, "b", "b"});
    }
  return g;
}

/// Structural check: exact node set, rotations with in-degree 2, interior
/// rotations with out-degree 2, and no directed cycles. Throws
/// InvariantViolationError on the first defect.
inline void validate_lattice_graph(const LatticeGraph &g) {
  const int n = g.n;
  const size_t want_nodes =
      static_cast<size_t>(n) + static_cast<size_t>(n) * (n - 1) / 2;
  if (g.nodes.size() != want_nodes)
    throw InvariantViolationError("lattice graph: wrong node count");

  std::vector<int> in_deg(g.nodes.size(), 0), out_deg(g.nodes.size(), 0);
  for (const auto &e : g.edges) {
    out_deg[e.from]++;
    in_deg[e.to]++;
  }
  for (size_t i = 0; i < g.nodes.size(); ++i) {
    const auto &node = g.nodes[i];
    if (node.kind == LatticeGraph::Node::Kind::Rotation) {
      if (in_deg[i] != 2)
        throw InvariantViolationError("lattice graph: rotation in-degree != 2");
      const bool interior = node.k > 1 && node.j < n;
      if (out_deg[i] != (interior ? 2 : (node.k > 1 || node.j < n ? 1 : 0)))
        throw InvariantViolationError("lattice graph: bad rotation out-degree");
    }
  }

  // Kahn topological sort; leftovers mean a cycle.
  std::vector<int> indeg = in_deg;
  std::vector<size_t> queue;
  for (size_t i = 0; i < g.nodes.size(); ++i)
    if (indeg[i] == 0)
      queue.push_back(i);
  size_t seen = 0;
  while (!queue.empty()) {
    const size_t v = queue.back();
    queue.pop_back();
    ++seen;
    for (const auto &e : g.edges)
      if (static_cast<size_t>(e.from) == v && --indeg[e.to] == 0)
        queue.push_back(e.to);
  }
  if (seen != g.nodes.size())
    throw InvariantViolationError("lattice graph: cycle detected");
}

/// DOT rendering. With parameters given, each rotation label carries the
/// numeric Gamma value (6 significant digits) and inactive rotations are
/// drawn dashed.
inline std::string emit_dot(const LatticeGraph &g,
                            const SchurParams *params = nullptr) {
  if (params && params->size() != g.n)
    throw DimensionMismatchError("emit_dot: parameter family size mismatch");

  auto fmt6 = [](double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%#.6g", x);
    return std::string(buf);
  };

  std::ostringstream out;
  out << "digraph lattice {\n";
  out << "  // Cascade of scalers \xce\x93_kk^{1/2} and elementary rotations "
         "U(\xce\x93_kj).\n";
  out << "  // Port convention (a choice, not forced by the math): a->a is "
         "the transmitted path.\n";
  out << "  rankdir=LR;\n";
  out << "  node [shape=box];\n";

  for (const auto &node : g.nodes) {
    out << "  " << node.id << " [label=\"" << node.label;
    bool dashed = false;
    if (params && node.kind == LatticeGraph::Node::Kind::Rotation) {
      const OffParam &p = params->off(node.k - 1, node.j - 1);
      if (p.active) {
        out << "\\n" << fmt6(p.value.real());
        if (p.value.imag() != 0.0)
          out << (p.value.imag() >= 0 ? "+" : "") << fmt6(p.value.imag())
              << "i";
      } else {
        dashed = true;
      }
    }
    out << "\"";
    if (node.kind == LatticeGraph::Node::Kind::Scaler)
      out << ", shape=circle";
    if (dashed)
      out << ", style=dashed";
    out << "];\n";
  }

  // Layout hint: group rotations of equal index gap.
  for (int gap = 1; gap < g.n; ++gap) {
    out << "  { rank=same;";
    for (const auto &node : g.nodes)
      if (node.kind == LatticeGraph::Node::Kind::Rotation &&
          node.j - node.k == gap)
        out << " " << node.id << ";";
    out << " }\n";
  }

  for (const auto &e : g.edges)
    out << "  " << g.nodes[e.from].id << " -> " << g.nodes[e.to].id
        << " [taillabel=\"" << e.from_port << "\", headlabel=\"" << e.to_port
        << "\"];\n";
  out << "}\n";
  return out.str();
}

} // namespace cplattice
