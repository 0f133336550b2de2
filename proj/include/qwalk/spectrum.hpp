#pragma once

#include "qwalk/graph.hpp"
#include "qwalk/types.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace qwalk {

// Eigensystem of a symmetric transition matrix, eigenvalues descending,
// eigenvectors as orthonormal columns aligned with the eigenvalues.
struct Spectrum {
  Vector eigenvalues;
  Matrix eigenvectors;
  double residual = 0.0;        // max abs entry of P - V diag(w) V^T
  double orthonormality = 0.0;  // max abs entry of V^T V - I

  Index size() const { return eigenvalues.size(); }
};

inline Spectrum eigendecompose(const Matrix& symmetric, const Tolerances& tol = tolerances()) {
  if (!is_symmetric(symmetric, tol.stochasticity))
    throw invalid_input("eigendecompose: matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric);
  if (solver.info() != Eigen::Success)
    throw numerical_failure("eigendecompose: solver did not converge");
  const Index n = symmetric.rows();
  Spectrum s;
  s.eigenvalues = solver.eigenvalues().reverse();
  s.eigenvectors = solver.eigenvectors().rowwise().reverse();
  s.residual = max_abs(symmetric - s.eigenvectors * s.eigenvalues.asDiagonal() * s.eigenvectors.transpose());
  s.orthonormality = max_abs(s.eigenvectors.transpose() * s.eigenvectors - Matrix::Identity(n, n));
  if (s.residual > tol.eigen_residual)
    throw numerical_failure("eigendecompose: reconstruction residual " + std::to_string(s.residual));
  if (s.orthonormality > tol.comparison)
    throw numerical_failure("eigendecompose: eigenvectors not orthonormal, error " +
                            std::to_string(s.orthonormality));
  return s;
}

inline Spectrum eigendecompose(const TransitionMatrix& t, const Tolerances& tol = tolerances()) {
  return eigendecompose(t.entries, tol);
}

// Partition of spectrum indices into classes of numerically equal eigenvalues.
// Classes are contiguous index ranges in descending eigenvalue order.
struct EigenvalueClasses {
  std::vector<std::vector<Index>> classes;
  std::vector<double> values;  // representative (mean) eigenvalue per class
  double tolerance = 0.0;

  std::size_t count() const { return classes.size(); }

  std::size_t max_class_size() const {
    std::size_t m = 0;
    for (const auto& c : classes) m = std::max(m, c.size());
    return m;
  }
};

inline double default_class_tolerance(const Spectrum& s, const Tolerances& tol = tolerances()) {
  const double spread = s.eigenvalues.size() < 2
                            ? 0.0
                            : s.eigenvalues[0] - s.eigenvalues[s.eigenvalues.size() - 1];
  return tol.class_rel * std::max(spread, 1e-6);
}

// Greedy clustering of the sorted eigenvalues.  Requires the clusters to be
// well separated: gaps inside a class stay within tol, gaps between classes
// must exceed 3 tol, otherwise the grouping is ambiguous and we refuse.
inline EigenvalueClasses group_eigenvalues(const Spectrum& s, double tol) {
  if (tol <= 0.0) throw invalid_input("eigenvalue classes: tolerance must be positive");
  EigenvalueClasses out;
  out.tolerance = tol;
  const Index n = s.size();
  Index begin = 0;
  for (Index k = 1; k <= n; ++k) {
    const bool split = k == n || s.eigenvalues[k - 1] - s.eigenvalues[k] > tol;
    if (!split) continue;
    std::vector<Index> cls;
    for (Index i = begin; i < k; ++i) cls.push_back(i);
    const double width = s.eigenvalues[begin] - s.eigenvalues[k - 1];
    if (width > tol)
      throw numerical_failure("eigenvalue classes: class spread " + std::to_string(width) +
                              " exceeds tolerance; adjust the class tolerance");
    if (k < n) {
      const double gap = s.eigenvalues[k - 1] - s.eigenvalues[k];
      if (gap <= 3.0 * tol)
        throw numerical_failure("eigenvalue classes: gap " + std::to_string(gap) +
                                " between classes is below 3x tolerance; adjust the class tolerance");
    }
    double mean = 0.0;
    for (Index i : cls) mean += s.eigenvalues[i];
    mean /= static_cast<double>(cls.size());
    out.values.push_back(mean);
    out.classes.push_back(std::move(cls));
    begin = k;
  }
  return out;
}

inline EigenvalueClasses group_eigenvalues(const Spectrum& s) {
  return group_eigenvalues(s, default_class_tolerance(s));
}

// Orthogonal projector onto the span of one eigenvalue class.
inline Matrix class_projector(const Spectrum& s, const std::vector<Index>& cls) {
  Matrix block(s.eigenvectors.rows(), static_cast<Index>(cls.size()));
  for (std::size_t i = 0; i < cls.size(); ++i) block.col(static_cast<Index>(i)) = s.eigenvectors.col(cls[i]);
  return block * block.transpose();
}

inline std::vector<Matrix> class_projectors(const Spectrum& s, const EigenvalueClasses& cls) {
  std::vector<Matrix> out;
  out.reserve(cls.count());
  for (const auto& c : cls.classes) out.push_back(class_projector(s, c));
  return out;
}

// ---- Symbolic eigenvalue classes of the torus -------------------------------
//
// Frequency vectors k in Z_p^d with equal multisets of folded entries
// min(k_j, p - k_j) share the eigenvalue (1/d) sum_j cos(2 pi k_j / p); the
// orbits of coordinate permutations and sign flips give a symbolic partition
// that can be checked against the numerical clustering.

struct TorusOrbits {
  std::vector<std::vector<long>> folded_reps;  // sorted fold multiset per orbit
  std::vector<double> values;                  // analytic eigenvalue per orbit
  std::vector<std::size_t> sizes;
};

inline double torus_eigenvalue(const std::vector<long>& k, long p, long d) {
  double v = 0.0;
  for (long j = 0; j < d; ++j)
    v += std::cos(2.0 * std::numbers::pi * static_cast<double>(k[static_cast<std::size_t>(j)]) /
                  static_cast<double>(p));
  return v / static_cast<double>(d);
}

inline TorusOrbits torus_signed_permutation_orbits(long p, long d) {
  if (p < 2 || d < 1) throw invalid_input("torus orbits: need p >= 2 and d >= 1");
  std::map<std::vector<long>, std::size_t> orbit_sizes;
  const long N = GraphSpec::torus(p, d).vertex_count();
  for (long x = 0; x < N; ++x) {
    std::vector<long> folded = torus_coords(x, p, d);
    for (long& f : folded) f = std::min(f, p - f);
    std::sort(folded.begin(), folded.end());
    ++orbit_sizes[folded];
  }
  TorusOrbits out;
  for (const auto& [rep, size] : orbit_sizes) {
    out.folded_reps.push_back(rep);
    out.values.push_back(torus_eigenvalue(rep, p, d));
    out.sizes.push_back(size);
  }
  // Present orbits in descending eigenvalue order to line up with Spectrum.
  std::vector<std::size_t> order(out.values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return out.values[a] > out.values[b]; });
  TorusOrbits sorted;
  for (std::size_t i : order) {
    sorted.folded_reps.push_back(out.folded_reps[i]);
    sorted.values.push_back(out.values[i]);
    sorted.sizes.push_back(out.sizes[i]);
  }
  return sorted;
}

inline std::string torus_rep_label(const std::vector<long>& rep) {
  std::string s = "(";
  for (std::size_t j = 0; j < rep.size(); ++j) {
    if (j) s += ",";
    s += std::to_string(rep[j]);
  }
  return s + ")";
}

// Match the symbolic orbit partition against the numerical clustering of an
// actual torus spectrum.  Throws with the offending orbit pair when two
// distinct orbits collide in eigenvalue, and when sizes or values disagree.
inline EigenvalueClasses classes_from_torus_orbits(const Spectrum& s, long p, long d,
                                                   const Tolerances& tol = tolerances()) {
  const TorusOrbits orbits = torus_signed_permutation_orbits(p, d);
  const double class_tol = default_class_tolerance(s, tol);
  for (std::size_t i = 0; i + 1 < orbits.values.size(); ++i) {
    const double gap = orbits.values[i] - orbits.values[i + 1];
    if (gap <= 3.0 * class_tol)
      throw numerical_failure("torus classes: orbits " + torus_rep_label(orbits.folded_reps[i]) +
                              " and " + torus_rep_label(orbits.folded_reps[i + 1]) +
                              " have coinciding eigenvalues (gap " + std::to_string(gap) + ")");
  }
  EigenvalueClasses numeric = group_eigenvalues(s, class_tol);
  if (numeric.count() != orbits.values.size())
    throw numerical_failure("torus classes: numerical clustering found " +
                            std::to_string(numeric.count()) + " classes, orbit count is " +
                            std::to_string(orbits.values.size()));
  for (std::size_t i = 0; i < orbits.values.size(); ++i) {
    if (numeric.classes[i].size() != orbits.sizes[i])
      throw numerical_failure("torus classes: class " + std::to_string(i) + " has multiplicity " +
                              std::to_string(numeric.classes[i].size()) + ", orbit " +
                              torus_rep_label(orbits.folded_reps[i]) + " predicts " +
                              std::to_string(orbits.sizes[i]));
    if (std::abs(numeric.values[i] - orbits.values[i]) > 1e-8)
      throw numerical_failure("torus classes: class value " + std::to_string(numeric.values[i]) +
                              " deviates from analytic " + std::to_string(orbits.values[i]));
  }
  return numeric;
}

}  // namespace qwalk
