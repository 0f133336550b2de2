#pragma once

#include "qwalk/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <string>
#include <utility>
#include <vector>

namespace qwalk {

enum class Family { cycle, torus, hypercube, complete, custom };

inline std::string family_name(Family f) {
  switch (f) {
    case Family::cycle: return "cycle";
    case Family::torus: return "torus";
    case Family::hypercube: return "hypercube";
    case Family::complete: return "complete";
    case Family::custom: return "custom";
  }
  throw invalid_input("graph: unknown family tag");
}

inline Family family_from_name(const std::string& s) {
  if (s == "cycle") return Family::cycle;
  if (s == "torus") return Family::torus;
  if (s == "hypercube") return Family::hypercube;
  if (s == "complete") return Family::complete;
  if (s == "custom") return Family::custom;
  throw invalid_input("graph: unknown family '" + s + "'");
}

// Description of a walk graph.  Factories validate parameters; the adjacency
// field is used only by the custom family.
struct GraphSpec {
  Family family = Family::cycle;
  long n = 0;                   // cycle length, hypercube dimension, complete size
  long p = 0;                   // torus side
  long d = 0;                   // torus dimension
  bool self_loops = false;      // complete graph only
  Matrix adjacency;             // custom only: symmetric nonnegative weights

  static GraphSpec cycle(long n) {
    if (n < 3) throw invalid_input("cycle: need n >= 3, got " + std::to_string(n));
    GraphSpec g;
    g.family = Family::cycle;
    g.n = n;
    return g;
  }

  static GraphSpec torus(long p, long d) {
    if (p < 2) throw invalid_input("torus: need side p >= 2, got " + std::to_string(p));
    if (d < 1) throw invalid_input("torus: need dimension d >= 1, got " + std::to_string(d));
    double size = 1.0;
    for (long j = 0; j < d; ++j) size *= static_cast<double>(p);
    if (size > 1e9) throw invalid_input("torus: p^d too large to materialize");
    GraphSpec g;
    g.family = Family::torus;
    g.p = p;
    g.d = d;
    return g;
  }

  static GraphSpec hypercube(long n) {
    if (n < 1) throw invalid_input("hypercube: need n >= 1, got " + std::to_string(n));
    if (n > 30) throw invalid_input("hypercube: 2^n too large to materialize");
    GraphSpec g;
    g.family = Family::hypercube;
    g.n = n;
    return g;
  }

  static GraphSpec complete(long n, bool self_loops) {
    if (n < 2) throw invalid_input("complete: need N >= 2, got " + std::to_string(n));
    GraphSpec g;
    g.family = Family::complete;
    g.n = n;
    g.self_loops = self_loops;
    return g;
  }

  static GraphSpec custom(Matrix adjacency) {
    GraphSpec g;
    g.family = Family::custom;
    g.adjacency = std::move(adjacency);
    g.n = g.adjacency.rows();
    return g;
  }

  long vertex_count() const {
    switch (family) {
      case Family::cycle: return n;
      case Family::torus: {
        long size = 1;
        for (long j = 0; j < d; ++j) size *= p;
        return size;
      }
      case Family::hypercube: return 1L << n;
      case Family::complete: return n;
      case Family::custom: return adjacency.rows();
    }
    throw invalid_input("graph: unknown family tag");
  }

  std::string label() const {
    switch (family) {
      case Family::cycle: return "cycle(" + std::to_string(n) + ")";
      case Family::torus: return "torus(" + std::to_string(p) + "," + std::to_string(d) + ")";
      case Family::hypercube: return "hypercube(" + std::to_string(n) + ")";
      case Family::complete:
        return "complete(" + std::to_string(n) + (self_loops ? ",loops" : "") + ")";
      case Family::custom: return "custom(" + std::to_string(adjacency.rows()) + ")";
    }
    throw invalid_input("graph: unknown family tag");
  }
};

// Mixed-radix coordinates for torus vertices, little endian: coordinate j
// contributes x_j * p^j.
inline std::vector<long> torus_coords(long x, long p, long d) {
  std::vector<long> c(static_cast<std::size_t>(d));
  for (long j = 0; j < d; ++j) {
    c[static_cast<std::size_t>(j)] = x % p;
    x /= p;
  }
  return c;
}

inline long torus_index(const std::vector<long>& c, long p) {
  long x = 0;
  for (std::size_t j = c.size(); j-- > 0;) x = x * p + c[j];
  return x;
}

inline bool support_connected(const Matrix& m) {
  const Index n = m.rows();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::deque<Index> queue{0};
  seen[0] = 1;
  Index found = 1;
  while (!queue.empty()) {
    const Index x = queue.front();
    queue.pop_front();
    for (Index y = 0; y < n; ++y) {
      if (!seen[static_cast<std::size_t>(y)] && m(y, x) > 0.0) {
        seen[static_cast<std::size_t>(y)] = 1;
        ++found;
        queue.push_back(y);
      }
    }
  }
  return found == n;
}

inline bool support_bipartite(const Matrix& m) {
  const Index n = m.rows();
  for (Index x = 0; x < n; ++x)
    if (m(x, x) > 0.0) return false;
  std::vector<int> color(static_cast<std::size_t>(n), -1);
  std::deque<Index> queue{0};
  color[0] = 0;
  while (!queue.empty()) {
    const Index x = queue.front();
    queue.pop_front();
    for (Index y = 0; y < n; ++y) {
      if (m(y, x) <= 0.0) continue;
      if (color[static_cast<std::size_t>(y)] < 0) {
        color[static_cast<std::size_t>(y)] = 1 - color[static_cast<std::size_t>(x)];
        queue.push_back(y);
      } else if (color[static_cast<std::size_t>(y)] == color[static_cast<std::size_t>(x)]) {
        return false;
      }
    }
  }
  return true;
}

// Symmetric doubly stochastic transition matrix together with the spec that
// produced it.  degree is the unweighted vertex degree where defined, 0 for
// custom graphs with non-integer weights.
struct TransitionMatrix {
  Matrix entries;
  GraphSpec spec;
  long degree = 0;
  bool lazified = false;

  Index size() const { return entries.rows(); }
  bool irreducible() const { return support_connected(entries); }
  bool aperiodic() const { return !support_bipartite(entries); }
  bool ergodic() const { return irreducible() && aperiodic(); }
};

inline void validate_transition(const Matrix& m, const Tolerances& tol = tolerances()) {
  if (m.rows() != m.cols()) throw invalid_input("transition: matrix is not square");
  if (m.rows() == 0) throw invalid_input("transition: empty matrix");
  if (!is_symmetric(m, tol.stochasticity)) throw invalid_input("transition: matrix is not symmetric");
  if (m.minCoeff() < -tol.stochasticity)
    throw invalid_input("transition: negative entry " + std::to_string(m.minCoeff()));
  const double col_err = column_sum_error(m);
  if (col_err > tol.stochasticity)
    throw invalid_input("transition: column sums deviate from 1 by " + std::to_string(col_err));
  if (!support_connected(m)) throw invalid_input("transition: support graph is disconnected");
}

inline TransitionMatrix build_transition(const GraphSpec& spec) {
  const long N = spec.vertex_count();
  Matrix m = Matrix::Zero(N, N);
  long degree = 0;
  switch (spec.family) {
    case Family::cycle: {
      degree = 2;
      for (long x = 0; x < N; ++x) {
        m((x + 1) % N, x) += 0.5;
        m((x + N - 1) % N, x) += 0.5;
      }
      break;
    }
    case Family::torus: {
      // Steps along each coordinate with equal weight; for p = 2 both
      // directions land on the same neighbor.
      degree = spec.p == 2 ? spec.d : 2 * spec.d;
      const double w = 1.0 / static_cast<double>(2 * spec.d);
      for (long x = 0; x < N; ++x) {
        std::vector<long> c = torus_coords(x, spec.p, spec.d);
        for (long j = 0; j < spec.d; ++j) {
          const long cj = c[static_cast<std::size_t>(j)];
          c[static_cast<std::size_t>(j)] = (cj + 1) % spec.p;
          m(torus_index(c, spec.p), x) += w;
          c[static_cast<std::size_t>(j)] = (cj + spec.p - 1) % spec.p;
          m(torus_index(c, spec.p), x) += w;
          c[static_cast<std::size_t>(j)] = cj;
        }
      }
      break;
    }
    case Family::hypercube: {
      degree = spec.n;
      const double w = 1.0 / static_cast<double>(spec.n);
      for (long x = 0; x < N; ++x)
        for (long j = 0; j < spec.n; ++j) m(x ^ (1L << j), x) = w;
      break;
    }
    case Family::complete: {
      if (spec.self_loops) {
        degree = spec.n;
        m.setConstant(1.0 / static_cast<double>(N));
      } else {
        degree = spec.n - 1;
        m.setConstant(1.0 / static_cast<double>(N - 1));
        m.diagonal().setZero();
      }
      break;
    }
    case Family::custom: {
      const Matrix& a = spec.adjacency;
      if (a.rows() != a.cols() || a.rows() == 0)
        throw invalid_input("custom: adjacency must be square and nonempty");
      if (!is_symmetric(a, tolerances().stochasticity))
        throw invalid_input("custom: adjacency is not symmetric");
      if (a.minCoeff() < 0.0)
        throw invalid_input("custom: adjacency has a negative weight");
      if (!support_connected(a))
        throw invalid_input("custom: adjacency support is disconnected");
      const Vector sums = a.rowwise().sum();
      const double s0 = sums[0];
      if (s0 <= 0.0) throw invalid_input("custom: zero row sum");
      if ((sums.array() - s0).abs().maxCoeff() > 1e-9 * std::max(1.0, s0))
        throw invalid_input(
            "custom: row sums are unequal; a symmetric doubly stochastic "
            "normalization A/rowsum needs a weight-regular graph");
      m = a / s0;
      // Unweighted degree only makes sense for a 0/1 adjacency.
      const double rounded = std::round(s0);
      const bool zero_one =
          ((a.array() - a.array().round()).abs() < 1e-12 && a.array().round() <= 1.0).all();
      degree = zero_one && std::abs(s0 - rounded) <= 1e-9 && rounded > 0
                   ? static_cast<long>(rounded)
                   : 0;
      break;
    }
  }
  validate_transition(m);
  TransitionMatrix t;
  t.entries = std::move(m);
  t.spec = spec;
  t.degree = degree;
  return t;
}

// Lazy variant (I + P) / 2: keeps the spectrum in [0, 1], so the chain is
// aperiodic even on bipartite graphs.
inline TransitionMatrix lazy(const TransitionMatrix& t) {
  TransitionMatrix out = t;
  out.entries = 0.5 * (Matrix::Identity(t.size(), t.size()) + t.entries);
  out.lazified = true;
  return out;
}

inline long graph_diameter(const Matrix& m) {
  const Index n = m.rows();
  long diam = 0;
  std::vector<long> dist(static_cast<std::size_t>(n));
  for (Index s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1L);
    dist[static_cast<std::size_t>(s)] = 0;
    std::deque<Index> queue{s};
    while (!queue.empty()) {
      const Index x = queue.front();
      queue.pop_front();
      for (Index y = 0; y < n; ++y) {
        if (x != y && m(y, x) > 0.0 && dist[static_cast<std::size_t>(y)] < 0) {
          dist[static_cast<std::size_t>(y)] = dist[static_cast<std::size_t>(x)] + 1;
          queue.push_back(y);
        }
      }
    }
    for (Index y = 0; y < n; ++y) {
      if (dist[static_cast<std::size_t>(y)] < 0)
        throw invalid_input("diameter: support graph is disconnected");
      diam = std::max(diam, dist[static_cast<std::size_t>(y)]);
    }
  }
  return diam;
}

}  // namespace qwalk
