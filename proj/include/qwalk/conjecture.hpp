#pragma once

#include "qwalk/graph.hpp"
#include "qwalk/markov.hpp"
#include "qwalk/rng.hpp"
#include "qwalk/spectrum.hpp"
#include "qwalk/types.hpp"
#include "qwalk/walk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace qwalk {

inline bool is_prime(long n) {
  if (n < 2) return false;
  for (long f = 2; f * f <= n; ++f)
    if (n % f == 0) return false;
  return true;
}

// ---- Entry floor of the limiting average --------------------------------

struct PiFloorReport {
  long n = 0;
  double min_entry = 0.0;
  double n_times_min = 0.0;
  bool passes_inverse_n2 = false;  // min entry >= 1/N^2 - 1e-12
};

inline PiFloorReport pi_floor_report(const TransitionMatrix& t) {
  const Spectrum s = eigendecompose(t);
  const EigenvalueClasses classes = group_eigenvalues(s);
  const Matrix pi = cesaro_infinite(s, classes).entries;
  PiFloorReport report;
  report.n = t.size();
  report.min_entry = pi.minCoeff();
  report.n_times_min = report.min_entry * static_cast<double>(report.n);
  const double floor = 1.0 / (static_cast<double>(report.n) * static_cast<double>(report.n));
  report.passes_inverse_n2 = report.min_entry >= floor - 1e-12;
  return report;
}

// ---- Torus amplification evidence ---------------------------------------

struct TorusAmplificationRow {
  long p = 0;
  long n = 0;
  double min_entry = 0.0;
  double n_times_min = 0.0;
  double alpha = 0.0;
  std::size_t class_count = 0;
  std::size_t max_class_size = 0;
};

struct TorusAmplificationReport {
  long d = 0;
  std::vector<TorusAmplificationRow> rows;
  bool class_sizes_ok = false;   // every |C_j| <= 2^d d!
  bool inverse_n2_ok = false;    // every min entry >= 1/N^2 - 1e-12
  bool alpha_below_one = false;  // every alpha < 1
};

// Scaling table for the side lengths in p_list: N times the minimum entry of
// the limiting average, which the amplification result keeps bounded away
// from zero, plus alpha per instance.  Classes come from the symbolic orbit
// construction, so the run doubles as a multiplicity check.
inline TorusAmplificationReport torus_amplification_report(const std::vector<long>& p_list,
                                                           long d) {
  TorusAmplificationReport report;
  report.d = d;
  double factorial = 1.0;
  for (long j = 2; j <= d; ++j) factorial *= static_cast<double>(j);
  const double size_cap = std::pow(2.0, static_cast<double>(d)) * factorial;
  report.class_sizes_ok = true;
  report.inverse_n2_ok = true;
  report.alpha_below_one = true;
  for (long p : p_list) {
    if (!is_prime(p))
      throw invalid_input("torus amplification: side " + std::to_string(p) +
                          " is not prime; the orbit construction needs a prime side");
    // p > 4d guarantees orbit-distinct eigenvalues; smaller prime sides are
    // accepted and rely on the collision check inside the orbit matcher.
    const TransitionMatrix t = build_transition(GraphSpec::torus(p, d));
    const Spectrum s = eigendecompose(t);
    const EigenvalueClasses classes = classes_from_torus_orbits(s, p, d);
    const Matrix pi = cesaro_infinite(s, classes).entries;
    TorusAmplificationRow row;
    row.p = p;
    row.n = t.size();
    row.min_entry = pi.minCoeff();
    row.n_times_min = row.min_entry * static_cast<double>(row.n);
    row.alpha = max_pairwise_column_distance(pi);
    row.class_count = classes.count();
    row.max_class_size = classes.max_class_size();
    if (static_cast<double>(row.max_class_size) > size_cap) report.class_sizes_ok = false;
    const double floor = 1.0 / (static_cast<double>(row.n) * static_cast<double>(row.n));
    if (row.min_entry < floor - 1e-12) report.inverse_n2_ok = false;
    if (!(row.alpha < 1.0)) report.alpha_below_one = false;
    report.rows.push_back(row);
  }
  return report;
}

// ---- Symbolic vs numerical eigenvalue classes ---------------------------

struct MultiplicityCheck {
  bool ok = false;
  std::string detail;  // offending orbit pair or size mismatch when !ok
  std::size_t class_count = 0;
  std::size_t max_class_size = 0;
};

inline MultiplicityCheck multiplicity_class_check(long p, long d) {
  MultiplicityCheck check;
  if (!is_prime(p)) throw invalid_input("multiplicity check: p must be prime");
  const TransitionMatrix t = build_transition(GraphSpec::torus(p, d));
  const Spectrum s = eigendecompose(t);
  try {
    const EigenvalueClasses classes = classes_from_torus_orbits(s, p, d);
    check.ok = true;
    check.class_count = classes.count();
    check.max_class_size = classes.max_class_size();
  } catch (const numerical_failure& err) {
    check.ok = false;
    check.detail = err.what();
  }
  return check;
}

// ---- Cancellation counting ----------------------------------------------

inline long centered_residue(long v, long n) {
  long r = v % n;
  if (r < 0) r += n;
  if (r > n / 2) r -= n;  // representatives in (-n/2, n/2]
  return r;
}

// Number of x in Z_n whose products x*y_i all have centered residue within
// n/(8d) of zero.  Guaranteed to be at least n/(8d)^d.
inline long cancellation_count(long n, long d, const std::vector<long>& y) {
  if (n < 2) throw invalid_input("cancellation count: need n >= 2");
  if (d < 1 || static_cast<long>(y.size()) != d)
    throw invalid_input("cancellation count: y must have d entries");
  const double window = static_cast<double>(n) / static_cast<double>(8 * d);
  long count = 0;
  for (long x = 0; x < n; ++x) {
    bool ok = true;
    for (long i = 0; i < d; ++i) {
      const long prod = centered_residue(x * y[static_cast<std::size_t>(i)], n);
      if (std::abs(static_cast<double>(prod)) > window) {
        ok = false;
        break;
      }
    }
    if (ok) ++count;
  }
  const double guarantee = static_cast<double>(n) / std::pow(8.0 * static_cast<double>(d),
                                                             static_cast<double>(d));
  if (static_cast<double>(count) < guarantee)
    throw numerical_failure("cancellation count: " + std::to_string(count) +
                            " below the guaranteed n/(8d)^d = " + std::to_string(guarantee));
  return count;
}

// ---- Periodicity ---------------------------------------------------------

struct PeriodicityResult {
  double residual = 0.0;      // max-entry distance of U_T to the nearest phase of I
  double global_phase = 0.0;  // the phase theta
};

// If U_T is a global phase times the identity, the finite average at T equals
// the limit exactly, so the quantum mixing time is at most T.  The phase is
// taken from the trace, which minimizes the Frobenius deviation.
inline PeriodicityResult periodicity_check(const Spectrum& s, double period) {
  if (period <= 0.0) throw invalid_input("periodicity: need T > 0");
  const ComplexMatrix u = propagator(s, period);
  const Complex tr = u.trace();
  PeriodicityResult result;
  result.global_phase = std::abs(tr) > 0.0 ? std::arg(tr) : 0.0;
  const ComplexMatrix target =
      std::polar(1.0, result.global_phase) * ComplexMatrix::Identity(s.size(), s.size());
  result.residual = (u - target).cwiseAbs().maxCoeff();
  return result;
}

// ---- Complete graph counterexample --------------------------------------

struct CompleteGraphReport {
  long n = 0;
  double closed_form_deviation = 0.0;  // max over t of ||U_t - (I + P(e^{-it}-1))||_max
  double max_offdiag_probability = 0.0;
  double offdiag_cap = 0.0;            // 4/N^2
  double alpha = 0.0;
  double alpha_predicted = 0.0;        // 1 - 2/N
  bool closed_form_ok = false;
  bool offdiag_ok = false;
  bool alpha_ok = false;
  bool amplification_degrades = false; // alpha -> 1 with N: the negative result
};

// The walk on the complete graph with self-loops: e^{-iPt} = I + P(e^{-it}-1),
// so off-diagonal probabilities never exceed 4/N^2 and alpha approaches 1.
// Classical mixing is one step; quantum averaging cannot amplify.
inline CompleteGraphReport complete_graph_negative_result(long n,
                                                          const std::vector<double>& t_list) {
  const TransitionMatrix t = build_transition(GraphSpec::complete(n, true));
  const Spectrum s = eigendecompose(t);
  CompleteGraphReport report;
  report.n = n;
  report.offdiag_cap = 4.0 / (static_cast<double>(n) * static_cast<double>(n));
  const ComplexMatrix p = t.entries.cast<Complex>();
  const ComplexMatrix eye = ComplexMatrix::Identity(n, n);
  for (double time : t_list) {
    const ComplexMatrix u = propagator(s, time);
    const Complex shrink = std::polar(1.0, -time) - 1.0;  // e^{-it} - 1, modulus in [0, 2]
    report.closed_form_deviation =
        std::max(report.closed_form_deviation, (u - (eye + shrink * p)).cwiseAbs().maxCoeff());
    Matrix probs = u.cwiseAbs2();
    probs.diagonal().setZero();
    report.max_offdiag_probability = std::max(report.max_offdiag_probability, max_abs(probs));
  }
  const EigenvalueClasses classes = group_eigenvalues(s);
  report.alpha = max_pairwise_column_distance(cesaro_infinite(s, classes).entries);
  report.alpha_predicted = 1.0 - 2.0 / static_cast<double>(n);
  report.closed_form_ok = report.closed_form_deviation <= 1e-10;
  report.offdiag_ok = report.max_offdiag_probability <= report.offdiag_cap + 1e-12;
  report.alpha_ok = std::abs(report.alpha - report.alpha_predicted) <= 1e-9;
  report.amplification_degrades = report.alpha_predicted > 0.5;
  return report;
}

// ---- Diameter evidence ---------------------------------------------------

struct DiameterReport {
  long diameter = 0;
  double gap_bound = 0.0;       // (1 - lambda_2)^{-1/2} * log N
  double tau_prime_mix = 0.0;
  double ratio_to_diameter = 0.0;
};

inline long family_diameter(const GraphSpec& spec) {
  switch (spec.family) {
    case Family::cycle: return spec.n / 2;
    case Family::torus: return spec.d * (spec.p / 2);
    case Family::hypercube: return spec.n;
    case Family::complete: return 1;
    case Family::custom: return graph_diameter(spec.adjacency);
  }
  throw invalid_input("diameter: unknown family tag");
}

// Evidence row for the open question whether the quantum threshold mixing
// time scales with the diameter.  The gap bound uses the signed second
// eigenvalue, which controls diameter for regular graphs.
inline DiameterReport diameter_bound_report(const GraphSpec& spec) {
  const TransitionMatrix t = build_transition(spec);
  const Spectrum s = eigendecompose(t);
  DiameterReport report;
  report.diameter = family_diameter(spec);
  const SpectralGap gap = spectral_gap(s);
  const double gap2 = 1.0 - gap.second_largest;
  report.gap_bound = gap2 > 0.0
                         ? std::log(static_cast<double>(t.size())) / std::sqrt(gap2)
                         : std::numeric_limits<double>::infinity();
  const EigenvalueClasses classes = group_eigenvalues(s);
  report.tau_prime_mix = alpha_and_threshold(s, classes).tau_prime_mix;
  report.ratio_to_diameter =
      report.diameter > 0 ? report.tau_prime_mix / static_cast<double>(report.diameter) : 0.0;
  return report;
}

}  // namespace qwalk
