#pragma once

#include "qwalk/graph.hpp"
#include "qwalk/types.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

namespace qwalk {

using Json = nlohmann::json;

// %.17g carries a double losslessly through text.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline Json spec_to_json(const GraphSpec& spec, bool lazified = false) {
  Json j;
  j["family"] = family_name(spec.family);
  switch (spec.family) {
    case Family::cycle:
    case Family::hypercube:
      j["n"] = spec.n;
      break;
    case Family::torus:
      j["p"] = spec.p;
      j["d"] = spec.d;
      break;
    case Family::complete:
      j["n"] = spec.n;
      j["self_loops"] = spec.self_loops;
      break;
    case Family::custom:
      j["n"] = spec.adjacency.rows();
      break;
  }
  if (lazified) j["lazy"] = true;
  return j;
}

// Custom specs come back with an empty adjacency: the caller fills it from the
// stored rows.  Returns the lazified flag alongside the spec.
inline std::pair<GraphSpec, bool> spec_from_json(const Json& j) {
  const Family family = family_from_name(j.at("family").get<std::string>());
  const bool lazified = j.value("lazy", false);
  switch (family) {
    case Family::cycle: return {GraphSpec::cycle(j.at("n").get<long>()), lazified};
    case Family::torus:
      return {GraphSpec::torus(j.at("p").get<long>(), j.at("d").get<long>()), lazified};
    case Family::hypercube: return {GraphSpec::hypercube(j.at("n").get<long>()), lazified};
    case Family::complete:
      return {GraphSpec::complete(j.at("n").get<long>(), j.at("self_loops").get<bool>()), lazified};
    case Family::custom: {
      GraphSpec g;
      g.family = Family::custom;
      g.n = j.at("n").get<long>();
      return {g, lazified};
    }
  }
  throw invalid_input("graph: unknown family tag");
}

inline Json matrix_rows_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_rows_from_json(const Json& rows, Index n) {
  if (!rows.is_array() || static_cast<Index>(rows.size()) != n)
    throw invalid_input("matrix file: row count disagrees with n");
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    const Json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != n)
      throw invalid_input("matrix file: row " + std::to_string(i) + " has wrong length");
    for (Index j = 0; j < n; ++j) m(i, j) = row[static_cast<std::size_t>(j)].get<double>();
  }
  return m;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw invalid_input("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw invalid_input("failed writing " + path.string());
}

inline Json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw invalid_input("cannot open " + path.string());
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& err) {
    throw invalid_input(path.string() + ": " + err.what());
  }
  return j;
}

inline void save_matrix(const TransitionMatrix& t, const std::filesystem::path& path) {
  Json j;
  j["n"] = t.size();
  j["spec"] = spec_to_json(t.spec, t.lazified);
  j["rows"] = matrix_rows_to_json(t.entries);
  write_text_file(path, j.dump(2) + "\n");
}

// Loads and revalidates a transition matrix.  Family specs are rebuilt from
// their parameters and checked against the stored rows, so a corrupted file
// cannot sneak through.
inline TransitionMatrix load_matrix(const std::filesystem::path& path) {
  const Json j = load_json_file(path);
  const Index n = j.at("n").get<Index>();
  const Matrix rows = matrix_rows_from_json(j.at("rows"), n);
  auto [spec, lazified] = spec_from_json(j.at("spec"));
  if (spec.family == Family::custom) {
    validate_transition(rows);
    const Matrix base = lazified ? Matrix(2.0 * rows - Matrix::Identity(n, n)) : rows;
    // A uniform walk on an unweighted graph is rebuilt from its support so the
    // vertex degree comes back; anything else stays a weighted custom chain.
    GraphSpec support = GraphSpec::custom((base.array() > 1e-12).cast<double>().matrix());
    try {
      TransitionMatrix t = build_transition(support);
      if (lazified) t = lazy(t);
      if (max_abs(t.entries - rows) <= 1e-9) return t;
    } catch (const invalid_input&) {
    }
    TransitionMatrix t;
    t.entries = rows;
    spec.adjacency = base;
    spec.n = n;
    t.spec = std::move(spec);
    t.lazified = lazified;
    return t;
  }
  TransitionMatrix t = build_transition(spec);
  if (lazified) t = lazy(t);
  const double dev = max_abs(t.entries - rows);
  if (dev > 1e-9)
    throw invalid_input(path.string() + ": stored rows deviate from the spec-built matrix by " +
                        std::to_string(dev));
  return t;
}

inline void save_snapshot(const StochasticSnapshot& snap, const std::filesystem::path& path,
                          const Json& source_spec = Json()) {
  Json j;
  j["n"] = snap.size();
  j["kind"] = snapshot_kind_name(snap.kind);
  j["param"] = snap.param;
  if (!source_spec.is_null()) j["spec"] = source_spec;
  j["rows"] = matrix_rows_to_json(snap.entries);
  write_text_file(path, j.dump(2) + "\n");
}

inline StochasticSnapshot load_snapshot(const std::filesystem::path& path) {
  const Json j = load_json_file(path);
  const Index n = j.at("n").get<Index>();
  return StochasticSnapshot(matrix_rows_from_json(j.at("rows"), n),
                            snapshot_kind_from_name(j.at("kind").get<std::string>()),
                            j.at("param").get<double>());
}

// Golden reference tables: environment override first, then the configured
// source-tree default.
inline std::filesystem::path golden_dir() {
  if (const char* env = std::getenv("QWALK_GOLDEN_DIR"); env && *env) return env;
#ifdef QWALK_GOLDEN_DEFAULT
  return QWALK_GOLDEN_DEFAULT;
#else
  return "data/golden";
#endif
}

inline Json load_golden(const std::string& name) {
  return load_json_file(golden_dir() / name);
}

}  // namespace qwalk
