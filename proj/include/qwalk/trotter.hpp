#pragma once

#include "qwalk/graph.hpp"
#include "qwalk/spectrum.hpp"
#include "qwalk/types.hpp"
#include "qwalk/walk.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace qwalk {

inline double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(m).singularValues()[0];
}

inline double spectral_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<ComplexMatrix>(m).singularValues()[0];
}

struct WalkEdge {
  Index a = 0;
  Index b = 0;
  double weight = 0.0;
};

// Splitting of a transition matrix into matchings: each part is supported on
// vertex-disjoint edges, parts sum back to the matrix, and each part carries
// the direction of the lattice it came from.
struct HamiltonianParts {
  std::vector<Matrix> parts;
  std::vector<std::vector<WalkEdge>> part_edges;
  std::vector<long> part_direction;               // lattice direction per part
  std::map<std::pair<Index, Index>, int> coloring;  // edge (min, max) -> part index
  Index n = 0;

  std::size_t count() const { return parts.size(); }

  Matrix reassembled() const {
    Matrix sum = Matrix::Zero(n, n);
    for (const Matrix& p : parts) sum += p;
    return sum;
  }
};

namespace detail {

inline void add_edge(HamiltonianParts& parts, int color, Index a, Index b, double w) {
  if (a > b) std::swap(a, b);
  auto [it, fresh] = parts.coloring.emplace(std::make_pair(a, b), color);
  if (!fresh) return;  // each undirected edge enters exactly once
  parts.parts[static_cast<std::size_t>(color)](a, b) += w;
  parts.parts[static_cast<std::size_t>(color)](b, a) += w;
  parts.part_edges[static_cast<std::size_t>(color)].push_back({a, b, w});
}

}  // namespace detail

// Matching decomposition of the lattice families.  Every color class stays
// inside one lattice direction: alternating edges give two classes per
// direction, an odd side needs a third class for the wrap-around edge left
// over, and side 2 collapses to a single matching.  Cross-direction classes
// then commute exactly.
inline HamiltonianParts edge_color_decompose(const TransitionMatrix& t) {
  long p = 0;
  long d = 0;
  switch (t.spec.family) {
    case Family::cycle:
      p = t.spec.n;
      d = 1;
      break;
    case Family::torus:
      p = t.spec.p;
      d = t.spec.d;
      break;
    case Family::hypercube:
      p = 2;
      d = t.spec.n;
      break;
    default:
      throw invalid_input("edge coloring: supported families are cycle, torus, hypercube");
  }
  if (t.lazified) throw invalid_input("edge coloring: lazy chains carry self-loops");

  const int colors_per_direction = p == 2 ? 1 : (p % 2 == 0 ? 2 : 3);
  const double w = 1.0 / static_cast<double>(2 * d);  // edge weight; doubled when p = 2
  HamiltonianParts parts;
  parts.n = t.size();
  const int total = colors_per_direction * static_cast<int>(d);
  parts.parts.assign(static_cast<std::size_t>(total), Matrix::Zero(parts.n, parts.n));
  parts.part_edges.resize(static_cast<std::size_t>(total));
  parts.part_direction.resize(static_cast<std::size_t>(total));
  for (long j = 0; j < d; ++j)
    for (int c = 0; c < colors_per_direction; ++c)
      parts.part_direction[static_cast<std::size_t>(j * colors_per_direction + c)] = j;

  for (Index x = 0; x < parts.n; ++x) {
    std::vector<long> coords = torus_coords(x, p, d);
    for (long j = 0; j < d; ++j) {
      const long cj = coords[static_cast<std::size_t>(j)];
      coords[static_cast<std::size_t>(j)] = (cj + 1) % p;
      const Index y = static_cast<Index>(torus_index(coords, p));
      coords[static_cast<std::size_t>(j)] = cj;
      int c;
      if (p == 2) {
        c = 0;
      } else if (cj == p - 1) {
        c = p % 2 == 0 ? 1 : 2;  // wrap-around edge: alternation continues iff p is even
      } else {
        c = static_cast<int>(cj % 2);
      }
      const double edge_weight = p == 2 ? 2.0 * w : w;
      detail::add_edge(parts, static_cast<int>(j) * colors_per_direction + c, x, y, edge_weight);
    }
  }

  const double reassembly = max_abs(parts.reassembled() - t.entries);
  if (reassembly > 1e-12)
    throw numerical_failure("edge coloring: parts sum off by " + std::to_string(reassembly));
  for (std::size_t c = 0; c < parts.count(); ++c) {
    std::vector<char> used(static_cast<std::size_t>(parts.n), 0);
    for (const WalkEdge& e : parts.part_edges[c]) {
      if (used[static_cast<std::size_t>(e.a)] || used[static_cast<std::size_t>(e.b)])
        throw numerical_failure("edge coloring: color " + std::to_string(c) +
                                " is not a matching");
      used[static_cast<std::size_t>(e.a)] = 1;
      used[static_cast<std::size_t>(e.b)] = 1;
    }
  }
  return parts;
}

// Exact factor e^{-iHs} for a matching Hamiltonian: each edge contributes an
// independent 2x2 rotation cos(ws) on the diagonal, -i sin(ws) off it.
inline ComplexMatrix matching_exponential(const std::vector<WalkEdge>& edges, Index n, double s) {
  ComplexMatrix u = ComplexMatrix::Identity(n, n);
  for (const WalkEdge& e : edges) {
    const double c = std::cos(e.weight * s);
    const Complex m(0.0, -std::sin(e.weight * s));
    u(e.a, e.a) = c;
    u(e.b, e.b) = c;
    u(e.a, e.b) = m;
    u(e.b, e.a) = m;
  }
  return u;
}

// Lie product approximation (e^{-iH_1 t/j} ... e^{-iH_r t/j})^j.
inline ComplexMatrix lie_product(const HamiltonianParts& parts, double time, long j,
                                 const Tolerances& tol = tolerances()) {
  if (j < 1) throw invalid_input("lie product: need j >= 1");
  const Index n = parts.n;
  ComplexMatrix step = ComplexMatrix::Identity(n, n);
  const double s = time / static_cast<double>(j);
  for (std::size_t c = 0; c < parts.count(); ++c)
    step = step * matching_exponential(parts.part_edges[c], n, s);
  ComplexMatrix result = ComplexMatrix::Identity(n, n);
  ComplexMatrix base = step;
  long e = j;
  while (e > 0) {  // binary powering
    if (e & 1) result = result * base;
    base = base * base;
    e >>= 1;
  }
  const double unitary_err =
      (result.adjoint() * result - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (unitary_err > tol.comparison)
    throw numerical_failure("lie product: unitarity error " + std::to_string(unitary_err));
  return result;
}

struct CommutatorReport {
  Matrix norms;  // pairwise spectral norms of [H_k, H_l]
  double max_norm = 0.0;
  double max_cross_direction = 0.0;  // restricted to parts from different directions
};

inline CommutatorReport commutator_report(const HamiltonianParts& parts) {
  const std::size_t r = parts.count();
  CommutatorReport report;
  report.norms = Matrix::Zero(static_cast<Index>(r), static_cast<Index>(r));
  for (std::size_t k = 0; k < r; ++k) {
    for (std::size_t l = k + 1; l < r; ++l) {
      const Matrix comm = parts.parts[k] * parts.parts[l] - parts.parts[l] * parts.parts[k];
      const double norm = spectral_norm(comm);
      report.norms(static_cast<Index>(k), static_cast<Index>(l)) = norm;
      report.norms(static_cast<Index>(l), static_cast<Index>(k)) = norm;
      report.max_norm = std::max(report.max_norm, norm);
      if (parts.part_direction[k] != parts.part_direction[l])
        report.max_cross_direction = std::max(report.max_cross_direction, norm);
    }
  }
  return report;
}

struct TrotterErrorRow {
  long j = 0;
  double error_2norm = 0.0;
  double error_max = 0.0;
  double bound = 0.0;  // constant * max commutator * r * t^2 / j
};

// Measured Lie-product error against the spectral propagator for a sweep of
// step counts, with the commutator-based bound at the given constant.
inline std::vector<TrotterErrorRow> trotter_error_sweep(const TransitionMatrix& t,
                                                        const Spectrum& s, double time,
                                                        const std::vector<long>& j_list,
                                                        double bound_constant) {
  const HamiltonianParts parts = edge_color_decompose(t);
  const CommutatorReport comm = commutator_report(parts);
  const ComplexMatrix exact = propagator(s, time);
  std::vector<TrotterErrorRow> rows;
  for (long j : j_list) {
    const ComplexMatrix approx = lie_product(parts, time, j);
    TrotterErrorRow row;
    row.j = j;
    row.error_2norm = spectral_norm(ComplexMatrix(exact - approx));
    row.error_max = (exact - approx).cwiseAbs().maxCoeff();
    row.bound = bound_constant * comm.max_norm * static_cast<double>(parts.count()) * time *
                time / static_cast<double>(j);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qwalk
