#pragma once

#include "qwalk/graph.hpp"
#include "qwalk/rng.hpp"
#include "qwalk/spectrum.hpp"
#include "qwalk/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace qwalk {

inline long ceil_guarded(double v) {
  // Guard against 3.0000000000000004-style noise promoting the ceiling.
  return static_cast<long>(std::ceil(v - 1e-9));
}

inline double tv_distance(const Vector& p, const Vector& q) {
  if (p.size() != q.size()) throw invalid_input("tv distance: size mismatch");
  return 0.5 * (p - q).cwiseAbs().sum();
}

inline double tv_distance(const Distribution& p, const Distribution& q) {
  return tv_distance(p.probs, q.probs);
}

// Half the max column L1 difference: the worst-case TV distance over start states.
inline double matrix_tv_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw invalid_input("matrix tv distance: shape mismatch");
  return 0.5 * (a - b).cwiseAbs().colwise().sum().maxCoeff();
}

inline double matrix_tv_distance(const StochasticSnapshot& a, const StochasticSnapshot& b) {
  return matrix_tv_distance(a.entries, b.entries);
}

inline double max_pairwise_column_distance(const Matrix& q) {
  double worst = 0.0;
  for (Index x = 0; x < q.cols(); ++x)
    for (Index y = x + 1; y < q.cols(); ++y)
      worst = std::max(worst, 0.5 * (q.col(x) - q.col(y)).cwiseAbs().sum());
  return worst;
}

inline Matrix uniform_projector(Index n) {
  return Matrix::Constant(n, n, 1.0 / static_cast<double>(n));
}

struct SpectralGap {
  double delta = 0.0;           // 1 - lambda
  double lambda = 0.0;          // largest non-principal absolute eigenvalue
  double second_largest = 0.0;  // second largest signed eigenvalue
  double most_negative = 0.0;   // smallest signed eigenvalue
};

inline SpectralGap spectral_gap(const Spectrum& s, const Tolerances& tol = tolerances()) {
  const Index n = s.size();
  if (std::abs(s.eigenvalues[0] - 1.0) > tol.comparison)
    throw invalid_input("spectral gap: top eigenvalue " + std::to_string(s.eigenvalues[0]) +
                        " is not 1; not a stochastic chain?");
  SpectralGap g;
  if (n == 1) {
    g.delta = 1.0;
    return g;
  }
  g.second_largest = s.eigenvalues[1];
  g.most_negative = s.eigenvalues[n - 1];
  g.lambda = std::max(std::abs(g.second_largest), std::abs(g.most_negative));
  g.delta = 1.0 - g.lambda;
  return g;
}

inline SpectralGap spectral_gap(const TransitionMatrix& t, const Tolerances& tol = tolerances()) {
  if (!t.irreducible()) throw invalid_input("spectral gap: chain is not irreducible");
  return spectral_gap(eigendecompose(t, tol), tol);
}

struct MixingBounds {
  double lower = 0.0;
  double upper = 0.0;
};

// Spectral sandwich on the exact threshold mixing time: the lower bound is
// vacuous for eps >= 1/2, the upper bound also certifies the search horizon.
inline MixingBounds mixing_bounds_from_gap(const SpectralGap& g, Index n, double eps) {
  if (eps <= 0.0 || eps >= 1.0) throw invalid_input("mixing bounds: need 0 < eps < 1");
  if (g.delta <= 0.0) throw invalid_input("mixing bounds: zero spectral gap");
  MixingBounds b;
  b.lower = eps < 0.5 ? 0.5 * (g.lambda / g.delta) * std::log(0.5 / eps) : 0.0;
  b.upper = (std::log(static_cast<double>(n)) + std::log(1.0 / eps)) / g.delta;
  return b;
}

inline MixingBounds mixing_time_bounds(const TransitionMatrix& t, double eps) {
  return mixing_bounds_from_gap(spectral_gap(t), t.size(), eps);
}

// Threshold distances of the powers of an ergodic chain: distances[t] is the
// worst-case TV distance of P^t columns to uniform, t = 0..horizon.
struct MixingProfile {
  std::vector<double> distances;
  double pairwise_at_end = 0.0;  // max pairwise column distance of the last power
};

inline MixingProfile mixing_profile(const TransitionMatrix& t, long horizon) {
  const Index n = t.size();
  const Matrix u = uniform_projector(n);
  Matrix power = Matrix::Identity(n, n);
  MixingProfile out;
  out.distances.reserve(static_cast<std::size_t>(horizon) + 1);
  out.distances.push_back(matrix_tv_distance(power, u));
  for (long step = 1; step <= horizon; ++step) {
    power = t.entries * power;
    out.distances.push_back(matrix_tv_distance(power, u));
  }
  out.pairwise_at_end = max_pairwise_column_distance(power);
  return out;
}

// Exact threshold mixing time by matrix powering.  The distance to uniform is
// non-increasing, so the first hit is the answer; the run is certified by the
// submultiplicative pairwise distance dropping below eps within the horizon.
inline long mixing_time_exact(const TransitionMatrix& t, double eps,
                              MixingProfile* profile = nullptr) {
  if (eps <= 0.0 || eps >= 1.0) throw invalid_input("mixing time: need 0 < eps < 1");
  if (!t.ergodic()) throw invalid_input("mixing time: chain is not ergodic");
  const SpectralGap gap = spectral_gap(t);
  const MixingBounds bounds = mixing_bounds_from_gap(gap, t.size(), eps);
  const long horizon = std::max<long>(8, ceil_guarded(4.0 * bounds.upper));

  const Index n = t.size();
  const Matrix u = uniform_projector(n);
  Matrix power = Matrix::Identity(n, n);
  long first_hit = -1;
  bool certified = false;
  std::vector<double> distances;
  for (long step = 0; step <= horizon; ++step) {
    if (step > 0) power = t.entries * power;
    distances.push_back(matrix_tv_distance(power, u));
    if (first_hit < 0 && distances.back() <= eps) first_hit = step;
    if (first_hit >= 0) {
      const double pairwise = max_pairwise_column_distance(power);
      if (pairwise <= eps) {
        certified = true;
        if (profile) {
          profile->distances = std::move(distances);
          profile->pairwise_at_end = pairwise;
        }
        break;
      }
    }
  }
  if (first_hit < 0 || !certified)
    throw inconclusive("mixing time: horizon " + std::to_string(horizon) +
                       " did not certify eps " + std::to_string(eps));
  return first_hit;
}

struct AmplifiedRow {
  double eps = 0.0;
  long amplified = 0;  // tau_mix * ceil(ln 1/eps)
  long exact = 0;      // the measured threshold time, always <= amplified
};

struct ThresholdAmplification {
  long tau_mix = 0;  // exact mixing time at the 1/(2e) threshold
  std::vector<AmplifiedRow> rows;
};

// Mixing at the standard threshold 1/(2e) plus the amplified guarantee
// tau(eps) <= tau_mix * ceil(ln 1/eps), cross-checked against the exact value.
inline ThresholdAmplification threshold_and_amplify(const TransitionMatrix& t,
                                                    const std::vector<double>& eps_list) {
  ThresholdAmplification out;
  out.tau_mix = mixing_time_exact(t, 1.0 / (2.0 * std::numbers::e));
  for (double eps : eps_list) {
    if (eps <= 0.0 || eps >= 1.0) throw invalid_input("amplify: need 0 < eps < 1");
    AmplifiedRow row;
    row.eps = eps;
    const long repeats = std::max<long>(1, ceil_guarded(std::log(1.0 / eps)));
    row.amplified = out.tau_mix * repeats;
    row.exact = mixing_time_exact(t, eps);
    if (row.exact > row.amplified)
      throw numerical_failure("amplify: exact mixing time " + std::to_string(row.exact) +
                              " exceeds amplified bound " + std::to_string(row.amplified));
    out.rows.push_back(row);
  }
  return out;
}

// d-bar(Q') <= 2 beta + gamma with beta the column-wise distance between the
// chains and gamma the pairwise column distance of the reference chain.  The
// claimed bound is asserted against the direct computation before returning.
inline double perturbation_bound(const Matrix& q, const Matrix& q_perturbed) {
  const double beta = matrix_tv_distance(q, q_perturbed);
  const double gamma = max_pairwise_column_distance(q);
  const double bound = 2.0 * beta + gamma;
  const double direct = max_pairwise_column_distance(q_perturbed);
  if (direct > bound + tolerances().comparison)
    throw numerical_failure("perturbation: bound " + std::to_string(bound) +
                            " violated by direct value " + std::to_string(direct));
  return bound;
}

// Pairwise column distance cap 1 - gamma(2 beta - 1) for a stochastic matrix
// with at least beta*N entries per column no smaller than gamma/N.
inline double entry_floor_bound(double beta, double gamma) {
  if (beta <= 0.5 || beta > 1.0) throw invalid_input("entry floor: need 1/2 < beta <= 1");
  if (gamma <= 0.0 || gamma > 1.0) throw invalid_input("entry floor: need 0 < gamma <= 1");
  return 1.0 - gamma * (2.0 * beta - 1.0);
}

// Continuous-time heat-kernel average exp(-(I - P) t), via the spectrum.
inline Matrix poisson_average(const Spectrum& s, double time) {
  if (time < 0.0) throw invalid_input("poisson average: need t >= 0");
  Vector w = (-(1.0 - s.eigenvalues.array()) * time).exp();
  return s.eigenvectors * w.asDiagonal() * s.eigenvectors.transpose();
}

// Discrete running average (1/T) sum_{t=0}^{T-1} P^t.
inline Matrix cesaro_power_average(const TransitionMatrix& t, long steps) {
  if (steps < 1) throw invalid_input("power average: need T >= 1");
  const Index n = t.size();
  Matrix power = Matrix::Identity(n, n);
  Matrix acc = power;
  for (long k = 1; k < steps; ++k) {
    power = t.entries * power;
    acc += power;
  }
  return acc / static_cast<double>(steps);
}

// Inverse-CDF draw from a probability column.  Entries within -1e-12 of zero
// are clamped and the column renormalized, so walk output columns computed in
// floating point sample cleanly.
inline int sample_from_column(const Vector& column, RngStream& rng) {
  const double floor = column.minCoeff();
  if (floor < -1e-12)
    throw numerical_failure("sample: column entry " + std::to_string(floor) + " below -1e-12");
  Vector p = column.cwiseMax(0.0);
  const double total = p.sum();
  if (total <= 0.0) throw numerical_failure("sample: column has no mass");
  const double u = rng.next_unit() * total;
  double acc = 0.0;
  for (Index y = 0; y < p.size(); ++y) {
    acc += p[y];
    if (u < acc) return static_cast<int>(y);
  }
  return static_cast<int>(p.size() - 1);
}

// Seeded classical walk for the given number of steps; optionally records the
// visited states as integer-time rounds.
inline int classical_sample(const TransitionMatrix& t, long steps, int start, std::uint64_t seed,
                            std::uint64_t trial = 0, SampleTrace* trace = nullptr) {
  if (start < 0 || start >= t.size()) throw invalid_input("classical sample: start out of range");
  if (steps < 0) throw invalid_input("classical sample: need steps >= 0");
  RngStream rng(seed, trial);
  int state = start;
  if (trace) {
    trace->seed = seed;
    trace->trial = trial;
    trace->initial_state = start;
    trace->rounds.clear();
  }
  for (long k = 1; k <= steps; ++k) {
    state = sample_from_column(t.entries.col(state), rng);
    if (trace) trace->rounds.emplace_back(static_cast<double>(k), state);
  }
  if (trace) trace->final_state = state;
  return state;
}

}  // namespace qwalk
