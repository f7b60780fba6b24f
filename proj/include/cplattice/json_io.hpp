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
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include <json.hpp>

#include "cplattice/channel_spec.hpp"
#include "cplattice/lattice.hpp"
#include "cplattice/version.hpp"

namespace cplattice {

using json = nlohmann::json;

class ParseError : public Error {
public:
  explicit ParseError(const std::string &msg) : Error(msg) {}
};

// ---------------------------------------------------------------------------
// Primitive encodings: complex numbers are [re, im] pairs (bare numbers are
// accepted on input), matrices are row-major nested arrays.
// ---------------------------------------------------------------------------

inline Complex complex_from_json(const json &j) {
  if (j.is_number())
    return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return Complex(j[0].get<double>(), j[1].get<double>());
  throw ParseError("expected a number or a [re, im] pair");
}

inline json complex_to_json(const Complex &z) {
  return json::array({z.real(), z.imag()});
}

inline ComplexMatrix matrix_from_json(const json &j) {
  if (!j.is_array() || j.empty())
    throw ParseError("expected a non-empty array of matrix rows");
  const int rows = static_cast<int>(j.size());
  if (!j[0].is_array() || j[0].empty())
    throw ParseError("expected matrix rows to be arrays");
  const int cols = static_cast<int>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols)
      throw ParseError("ragged matrix rows");
    for (int c = 0; c < cols; ++c)
      m(r, c) = complex_from_json(j[r][c]);
  }
  if (!m.all_finite())
    throw ParseError("matrix entries must be finite");
  return m;
}

inline json matrix_to_json(const ComplexMatrix &m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c)
      row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// ChannelDocument
// ---------------------------------------------------------------------------

inline ChannelSpec channel_from_json(const json &j) {
  if (!j.is_object())
    throw ParseError("channel document must be a JSON object");
  if (!j.contains("n") || !j["n"].is_number_integer())
    throw ParseError("channel document needs an integer field \"n\"");
  const int n = j["n"].get<int>();
  if (n < 1)
    throw ParseError("channel document: n must be >= 1");
  if (!j.contains("kind") || !j["kind"].is_string())
    throw ParseError("channel document needs a string field \"kind\"");
  const std::string kind = j["kind"].get<std::string>();

  ChannelSpec spec;
  spec.n = n;
  if (kind == "kraus") {
    if (!j.contains("kraus") || !j["kraus"].is_array() || j["kraus"].empty())
      throw ParseError("kraus document needs a non-empty \"kraus\" array");
    KrausSet k;
    k.n = n;
    for (const auto &op : j["kraus"]) {
      ComplexMatrix m = matrix_from_json(op);
      if (m.rows() != n || m.cols() != n)
        throw ParseError("kraus operator is not n x n");
      k.ops.push_back(std::move(m));
    }
    spec.rep = std::move(k);
  } else if (kind == "choi") {
    if (!j.contains("choi"))
      throw ParseError("choi document needs a \"choi\" matrix");
    ComplexMatrix s = matrix_from_json(j["choi"]);
    if (s.rows() != n * n || s.cols() != n * n)
      throw ParseError("choi matrix is not n^2 x n^2");
    spec.rep = ChoiMatrix{n, std::move(s)};
  } else if (kind == "pauli_transfer") {
    if (n != 2)
      throw ParseError("pauli_transfer documents require n = 2");
    if (!j.contains("pauli_transfer") || !j["pauli_transfer"].is_object())
      throw ParseError("pauli_transfer document needs a \"pauli_transfer\" object");
    const json &pt = j["pauli_transfer"];
    KingRuskaiForm p;
    for (auto [key, dest] : {std::pair<const char *, double *>{"t", p.t.data()},
                             {"lambda", p.lambda.data()}}) {
      if (!pt.contains(key) || !pt[key].is_array() || pt[key].size() != 3)
        throw ParseError(std::string("pauli_transfer needs a 3-vector \"") +
                         key + "\"");
      for (int i = 0; i < 3; ++i) {
        if (!pt[key][i].is_number())
          throw ParseError("pauli_transfer entries must be real numbers");
        dest[i] = pt[key][i].get<double>();
        if (!std::isfinite(dest[i]))
          throw ParseError("pauli_transfer entries must be finite");
      }
    }
    spec.rep = p;
  } else {
    throw ParseError("unknown channel kind: " + kind);
  }
  return spec;
}

inline json channel_to_json(const ChannelSpec &spec) {
  json j;
  j["n"] = spec.n;
  if (spec.is_kraus()) {
    j["kind"] = "kraus";
    json ops = json::array();
    for (const auto &op : std::get<KrausSet>(spec.rep).ops)
      ops.push_back(matrix_to_json(op));
    j["kraus"] = std::move(ops);
  } else if (spec.is_choi()) {
    j["kind"] = "choi";
    j["choi"] = matrix_to_json(std::get<ChoiMatrix>(spec.rep).S);
  } else {
    const auto &p = std::get<KingRuskaiForm>(spec.rep);
    j["kind"] = "pauli_transfer";
    j["pauli_transfer"] =
        json{{"t", {p.t[0], p.t[1], p.t[2]}},
             {"lambda", {p.lambda[0], p.lambda[1], p.lambda[2]}}};
  }
  return j;
}

// ---------------------------------------------------------------------------
// SchurParams <-> params document (1-based indices in JSON)
// ---------------------------------------------------------------------------

inline json params_to_json(const SchurParams &params) {
  json j;
  j["diag"] = json::array();
  for (int k = 0; k < params.size(); ++k)
    j["diag"].push_back(params.diag(k));
  json off = json::array();
  for (int k = 0; k < params.size(); ++k)
    for (int jj = k + 1; jj < params.size(); ++jj) {
      const OffParam &p = params.off(k, jj);
      off.push_back(json{{"k", k + 1},
                         {"j", jj + 1},
                         {"re", p.value.real()},
                         {"im", p.value.imag()},
                         {"active", p.active}});
    }
  j["off"] = std::move(off);
  return j;
}

inline SchurParams params_from_json(const json &j) {
  const json &doc = (j.is_object() && j.contains("params")) ? j["params"] : j;
  if (!doc.is_object() || !doc.contains("diag") || !doc["diag"].is_array() ||
      doc["diag"].empty())
    throw ParseError("params document needs a non-empty \"diag\" array");
  const int n = static_cast<int>(doc["diag"].size());
  SchurParams params(n);
  for (int k = 0; k < n; ++k) {
    if (!doc["diag"][k].is_number())
      throw ParseError("params diag entries must be numbers");
    params.diag(k) = doc["diag"][k].get<double>();
  }
  if (doc.contains("off")) {
    if (!doc["off"].is_array())
      throw ParseError("params \"off\" must be an array");
    for (const auto &e : doc["off"]) {
      if (!e.is_object() || !e.contains("k") || !e.contains("j"))
        throw ParseError("params off entries need 1-based indices k, j");
      const int k = e["k"].get<int>() - 1;
      const int jj = e["j"].get<int>() - 1;
      if (k < 0 || jj <= k || jj >= n)
        throw ParseError("params off entry has indices out of range");
      OffParam p;
      p.value = Complex(e.value("re", 0.0), e.value("im", 0.0));
      p.active = e.value("active", true);
      params.off(k, jj) = p;
    }
  }
  return params;
}

// ---------------------------------------------------------------------------
// ResultDocument
// ---------------------------------------------------------------------------

/// FNV-1a digest of the input bytes, reported in result metadata.
inline std::string fnv1a_digest(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

inline json verdict_to_json(const CpVerdict &verdict, double tol,
                            const std::string &input_digest,
                            bool include_params) {
  json j;
  j["cp"] = verdict.is_cp;
  if (verdict.is_cp) {
    if (include_params && verdict.params)
      j["params"] = params_to_json(*verdict.params);
  } else if (verdict.violation) {
    const Violation &v = *verdict.violation;
    json loc = json::array();
    loc.push_back(v.k + 1);
    if (v.j != v.k)
      loc.push_back(v.j + 1);
    j["violation"] = json{{"kind", to_string(v.kind)},
                          {"location", std::move(loc)},
                          {"magnitude", v.magnitude}};
  }
  j["metadata"] = json{{"tool_version", kVersion},
                       {"tolerance", tol},
                       {"input_digest", input_digest}};
  return j;
}

/// Serialize a paramless result document without building a json tree.
/// Produces exactly the bytes of verdict_to_json(...).dump() (keys in
/// alphabetical order, doubles in nlohmann's shortest form); the batch paths
/// use it to keep per-line cost down. `tolerance_literal` is json(tol).dump()
/// computed once per run.
inline std::string verdict_to_line(const CpVerdict &verdict,
                                   const std::string &tolerance_literal,
                                   const std::string &input_digest) {
  std::string out;
  out.reserve(192);
  out += "{\"cp\":";
  out += verdict.is_cp ? "true" : "false";
  out += ",\"metadata\":{\"input_digest\":\"";
  out += input_digest;
  out += "\",\"tolerance\":";
  out += tolerance_literal;
  out += ",\"tool_version\":\"";
  out += kVersion;
  out += "\"}";
  if (!verdict.is_cp && verdict.violation) {
    const Violation &v = *verdict.violation;
    out += ",\"violation\":{\"kind\":\"";
    out += to_string(v.kind);
    out += "\",\"location\":[";
    out += std::to_string(v.k + 1);
    if (v.j != v.k) {
      out += ',';
      out += std::to_string(v.j + 1);
    }
    out += "],\"magnitude\":";
    out += json(v.magnitude).dump();
    out += '}';
  }
  out += '}';
  return out;
}

} // namespace cplattice
