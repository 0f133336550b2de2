#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qwalk {

using Matrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using Complex = std::complex<double>;
using Index = Eigen::Index;

struct invalid_input : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct numerical_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Horizon or search certification could not establish the requested bound.
struct inconclusive : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One knob for every numerical threshold used across the library.
struct Tolerances {
  double eigen_residual = 1e-9;   // reconstruction error of an eigendecomposition
  double stochasticity = 1e-12;   // row/column sums, symmetry, entry sign slack
  double comparison = 1e-10;      // orthonormality, unitarity, generic closeness
  double class_rel = 1e-8;        // eigenvalue class width, relative to spectral spread
  double qmix_floor = 1e-8;       // smallest epsilon the quantum mixing search accepts
  double qmix_resolution = 1e-3;  // relative resolution of the refined mixing-time search
};

inline Tolerances& tolerances() {
  static Tolerances t;
  return t;
}

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline bool is_symmetric(const Matrix& m, double tol) {
  return m.rows() == m.cols() && max_abs(m - m.transpose()) <= tol;
}

inline double column_sum_error(const Matrix& m) {
  return (m.colwise().sum().array() - 1.0).abs().maxCoeff();
}

// Probability vector over states 0..N-1.  Entries within -tol of zero are
// clamped so downstream consumers can rely on nonnegativity.
struct Distribution {
  Vector probs;

  Distribution() = default;

  explicit Distribution(Vector p, double tol = tolerances().stochasticity) : probs(std::move(p)) {
    if (probs.size() == 0) throw invalid_input("distribution: empty vector");
    const double min_entry = probs.minCoeff();
    if (min_entry < -tol)
      throw invalid_input("distribution: negative entry " + std::to_string(min_entry));
    probs = probs.cwiseMax(0.0);
    const double sum = probs.sum();
    if (std::abs(sum - 1.0) > 1e-9)
      throw invalid_input("distribution: total mass " + std::to_string(sum) + " is not 1");
    probs /= sum;
  }

  Index size() const { return probs.size(); }

  static Distribution uniform(Index n) {
    return Distribution(Vector::Constant(n, 1.0 / static_cast<double>(n)));
  }

  static Distribution point_mass(Index n, Index x) {
    Vector v = Vector::Zero(n);
    v[x] = 1.0;
    return Distribution(std::move(v));
  }
};

enum class SnapshotKind {
  measurement_at_time,  // |U_t|^2 entrywise, parameter is the time t
  cesaro_finite,        // time average of the above over [0, T], parameter is T
  cesaro_infinite,      // the T -> infinity limit, parameter unused
  classical_power,      // P^t for a classical chain, parameter is the integer t
};

inline std::string snapshot_kind_name(SnapshotKind k) {
  switch (k) {
    case SnapshotKind::measurement_at_time: return "measurement_at_time";
    case SnapshotKind::cesaro_finite: return "cesaro_finite";
    case SnapshotKind::cesaro_infinite: return "cesaro_infinite";
    case SnapshotKind::classical_power: return "classical_power";
  }
  throw invalid_input("snapshot: unknown kind tag");
}

inline SnapshotKind snapshot_kind_from_name(const std::string& s) {
  if (s == "measurement_at_time") return SnapshotKind::measurement_at_time;
  if (s == "cesaro_finite") return SnapshotKind::cesaro_finite;
  if (s == "cesaro_infinite") return SnapshotKind::cesaro_infinite;
  if (s == "classical_power") return SnapshotKind::classical_power;
  throw invalid_input("snapshot: unknown kind tag '" + s + "'");
}

// A doubly stochastic matrix produced by the walk machinery, tagged with how it
// was obtained.  Columns are output laws for the corresponding start state.
struct StochasticSnapshot {
  Matrix entries;
  SnapshotKind kind = SnapshotKind::measurement_at_time;
  double param = 0.0;

  StochasticSnapshot() = default;

  StochasticSnapshot(Matrix m, SnapshotKind k, double parameter)
      : entries(std::move(m)), kind(k), param(parameter) {
    const Tolerances& tol = tolerances();
    if (entries.rows() != entries.cols()) throw invalid_input("snapshot: matrix is not square");
    const double min_entry = entries.minCoeff();
    if (min_entry < -tol.stochasticity)
      throw invalid_input("snapshot: negative entry " + std::to_string(min_entry));
    entries = entries.cwiseMax(0.0);
    const double col_err = column_sum_error(entries);
    if (col_err > tol.comparison)
      throw invalid_input("snapshot: column sums deviate from 1 by " + std::to_string(col_err));
  }

  Index size() const { return entries.rows(); }
  Vector column_law(Index x) const { return entries.col(x); }
};

// Record of one sampling run: seeded start plus every intermediate measurement.
struct SampleTrace {
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  int initial_state = 0;
  int final_state = 0;
  std::vector<std::pair<double, int>> rounds;  // (measurement time, observed state)
};

}  // namespace qwalk
