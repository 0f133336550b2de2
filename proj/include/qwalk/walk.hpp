#pragma once

#include "qwalk/markov.hpp"
#include "qwalk/spectrum.hpp"
#include "qwalk/types.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace qwalk {

inline double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

// Walk propagator e^{-iPt} assembled from the spectrum; checked unitary.
inline ComplexMatrix propagator(const Spectrum& s, double time,
                                const Tolerances& tol = tolerances()) {
  ComplexVector phases(s.size());
  for (Index k = 0; k < s.size(); ++k)
    phases[k] = std::polar(1.0, -s.eigenvalues[k] * time);
  ComplexMatrix u = s.eigenvectors.cast<Complex>() * phases.asDiagonal() *
                    s.eigenvectors.transpose().cast<Complex>();
  const double unitary_err =
      (u.adjoint() * u - ComplexMatrix::Identity(s.size(), s.size())).cwiseAbs().maxCoeff();
  if (unitary_err > tol.comparison)
    throw numerical_failure("propagator: unitarity error " + std::to_string(unitary_err));
  return u;
}

// Law of measuring at time t: entry (y, x) is |<y|e^{-iPt}|x>|^2.
inline StochasticSnapshot measurement_matrix(const Spectrum& s, double time,
                                             const Tolerances& tol = tolerances()) {
  return StochasticSnapshot(propagator(s, time, tol).cwiseAbs2(), SnapshotKind::measurement_at_time,
                            time);
}

// Measurement law for a single start column, the sampler hot path.
inline Vector measurement_column(const Spectrum& s, double time, Index start) {
  if (start < 0 || start >= s.size()) throw invalid_input("measurement column: start out of range");
  ComplexVector c = s.eigenvectors.row(start).transpose().cast<Complex>();
  for (Index k = 0; k < s.size(); ++k) c[k] *= std::polar(1.0, -s.eigenvalues[k] * time);
  return (s.eigenvectors.cast<Complex>() * c).cwiseAbs2();
}

// Decomposition of the time-averaged measurement law over eigenvalue classes.
// With S_j the projector onto class j, the infinite average is
//   Pi = sum_j S_j .* S_j
// and the finite average over [0, T] adds one oscillating term per class pair:
//   Pbar_T = Pi + sum_{j<j'} 2 (S_j .* S_{j'}) sinc(|d_jj'| T),
// where d_jj' is the class eigenvalue difference.  |sinc(x)| <= 1/|x| gives
// the envelope distance(T) <= K / T with K fixed by the cross terms.
struct CesaroTerms {
  Index n = 0;
  Matrix limit;                  // Pi
  std::vector<Matrix> cross;     // 2 S_j .* S_{j'} per pair, j < j'
  std::vector<double> deltas;    // |eigenvalue difference| per pair
  double envelope_constant = 0;  // K: distance(T) <= K / T
  double initial_distance = 0;   // the T -> 0 limit, 1/2 ||I - Pi||
  bool commensurate = false;     // all deltas are integer multiples of base_delta
  double base_delta = 0;         // the common frequency unit when commensurate

  Matrix finite_average(double time_horizon) const {
    Matrix m = limit;
    for (std::size_t i = 0; i < cross.size(); ++i)
      m += cross[i] * sinc(deltas[i] * time_horizon);
    return m;
  }

  // Worst-case TV distance of the finite average to its limit.
  double distance(double time_horizon) const {
    if (cross.empty()) return 0.0;
    Matrix dev = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < cross.size(); ++i)
      dev += cross[i] * sinc(deltas[i] * time_horizon);
    return 0.5 * dev.cwiseAbs().colwise().sum().maxCoeff();
  }
};

inline CesaroTerms cesaro_terms(const Spectrum& s, const EigenvalueClasses& classes) {
  CesaroTerms terms;
  terms.n = s.size();
  const std::vector<Matrix> proj = class_projectors(s, classes);
  terms.limit = Matrix::Zero(terms.n, terms.n);
  for (const Matrix& p : proj) terms.limit += p.cwiseProduct(p);
  Matrix envelope = Matrix::Zero(terms.n, terms.n);
  for (std::size_t j = 0; j < proj.size(); ++j) {
    for (std::size_t l = j + 1; l < proj.size(); ++l) {
      const double delta = std::abs(classes.values[j] - classes.values[l]);
      terms.cross.push_back(2.0 * proj[j].cwiseProduct(proj[l]));
      terms.deltas.push_back(delta);
      envelope += terms.cross.back().cwiseAbs() / delta;
    }
  }
  if (!terms.cross.empty())
    terms.envelope_constant = 0.5 * envelope.colwise().sum().maxCoeff();
  terms.initial_distance =
      matrix_tv_distance(Matrix::Identity(terms.n, terms.n), terms.limit);
  if (!terms.deltas.empty()) {
    const double base = *std::min_element(terms.deltas.begin(), terms.deltas.end());
    bool ok = base > 0.0;
    for (double d : terms.deltas) {
      const double multiple = std::round(d / base);
      if (multiple < 1.0 || std::abs(d - multiple * base) > 1e-9) {
        ok = false;
        break;
      }
    }
    terms.commensurate = ok;
    terms.base_delta = ok ? base : 0.0;
  }
  return terms;
}

inline StochasticSnapshot cesaro_finite(const Spectrum& s, const EigenvalueClasses& classes,
                                        double time_horizon) {
  if (time_horizon <= 0.0) throw invalid_input("cesaro: need T > 0");
  return StochasticSnapshot(cesaro_terms(s, classes).finite_average(time_horizon),
                            SnapshotKind::cesaro_finite, time_horizon);
}

inline StochasticSnapshot cesaro_infinite(const Spectrum& s, const EigenvalueClasses& classes) {
  return StochasticSnapshot(cesaro_terms(s, classes).limit, SnapshotKind::cesaro_infinite, 0.0);
}

struct QuantumMixingResult {
  double tau = 0.0;            // earliest time found with distance <= eps
  double distance = 0.0;       // the distance there
  double envelope_time = 0.0;  // K / eps: beyond this the distance stays <= eps
  bool from_candidate = false; // found at a commensurate revival time
};

// Earliest T with distance(T) <= eps, located by scanning.  The distance
// oscillates, so the scan combines three ingredients: exact revival candidates
// 2 pi k / g when all frequencies share a common unit g, a geometric sweep
// refined to the configured relative resolution, and the envelope time K/eps
// past which the bound holds unconditionally.  Dips narrower than the sweep
// resolution that are not revival times can be overshot; the result is then a
// slightly conservative first hit.
inline QuantumMixingResult quantum_mixing_search(const CesaroTerms& terms, double eps,
                                                 const Tolerances& tol = tolerances()) {
  if (eps < tol.qmix_floor)
    throw invalid_input("quantum mixing: eps below the search floor " +
                        std::to_string(tol.qmix_floor));
  if (eps >= 1.0) throw invalid_input("quantum mixing: need eps < 1");
  QuantumMixingResult result;
  if (terms.cross.empty() || terms.initial_distance <= eps) {
    result.envelope_time = terms.cross.empty() ? 0.0 : terms.envelope_constant / eps;
    result.distance = terms.cross.empty() ? 0.0 : terms.initial_distance;
    return result;
  }
  const double t_star = terms.envelope_constant / eps;
  result.envelope_time = t_star;

  double best = t_star;
  double best_distance = terms.distance(t_star);
  bool best_is_candidate = false;
  if (terms.commensurate) {
    // Every delta is an integer multiple m of the base unit, and
    // sinc(m pi k) = 0, so the average returns to its limit at each k pi / g.
    const double revival = std::numbers::pi / terms.base_delta;
    for (int k = 1; k <= 6; ++k) {
      const double t = revival * k;
      if (t >= best) break;
      const double d = terms.distance(t);
      if (d <= eps) {
        best = t;
        best_distance = d;
        best_is_candidate = true;
        break;
      }
    }
  }

  const double max_delta = *std::max_element(terms.deltas.begin(), terms.deltas.end());
  const double t_lo = tol.qmix_resolution * 2.0 * std::numbers::pi / max_delta;
  double prev = 0.0;
  for (double t = t_lo; t < best; t *= 1.0 + 32.0 * tol.qmix_resolution) {
    if (terms.distance(t) <= eps) {
      // Back-scan the bracket at fine resolution for the earliest hit.
      double hit = t;
      const double step = std::max(prev, t_lo) * tol.qmix_resolution;
      if (step > 0.0) {
        for (double u = std::max(prev, t_lo); u < t; u += step) {
          if (terms.distance(u) <= eps) {
            hit = u;
            break;
          }
        }
      }
      if (hit < best) {
        best = hit;
        best_distance = terms.distance(hit);
        best_is_candidate = false;
      }
      break;
    }
    prev = t;
  }

  result.tau = best;
  result.distance = best_distance;
  result.from_candidate = best_is_candidate;
  return result;
}

inline double quantum_mixing_time(const Spectrum& s, const EigenvalueClasses& classes, double eps,
                                  const Tolerances& tol = tolerances()) {
  return quantum_mixing_search(cesaro_terms(s, classes), eps, tol).tau;
}

// Amplification data of the averaged walk: alpha is the maximum pairwise
// column distance of Pi, the walk analogue of a one-step overlap bound.  When
// alpha < 1 the double loop with threshold eps0 = (1 - alpha)/4 and
// ceil(log_{2/(1+alpha)} 1/eps) outer rounds reaches distance eps.
struct AmplificationParams {
  double alpha = 0.0;
  double eps0 = 0.0;
  double tau_prime_mix = 0.0;  // quantum mixing time at threshold eps0
  bool amplification_ok = false;

  long repetitions_for(double eps) const {
    if (eps <= 0.0 || eps >= 1.0) throw invalid_input("repetitions: need 0 < eps < 1");
    if (!amplification_ok)
      throw invalid_input("repetitions: alpha is too close to 1 for amplification");
    const double rate = std::log(2.0 / (1.0 + alpha));
    return std::max<long>(1, ceil_guarded(std::log(1.0 / eps) / rate));
  }
};

inline AmplificationParams alpha_and_threshold(const Spectrum& s, const EigenvalueClasses& classes,
                                               const Tolerances& tol = tolerances()) {
  const CesaroTerms terms = cesaro_terms(s, classes);
  AmplificationParams params;
  params.alpha = max_pairwise_column_distance(terms.limit);
  params.eps0 = (1.0 - params.alpha) / 4.0;
  params.amplification_ok = params.alpha < 1.0 - 1e-9 && params.eps0 >= tol.qmix_floor;
  const double threshold = std::max(params.eps0, tol.qmix_floor);
  params.tau_prime_mix = quantum_mixing_search(terms, threshold, tol).tau;
  return params;
}

}  // namespace qwalk
