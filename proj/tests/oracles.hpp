// Deliberately simple reference implementations the real code is tested
// against.  They favor obviousness over speed and share no code with the
// library paths they check.

#pragma once

#include "qwalk/qwalk.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

namespace oracle {

using qwalk::Complex;
using qwalk::ComplexMatrix;
using qwalk::Index;
using qwalk::Matrix;
using qwalk::Vector;

// e^{-iPt} by scaling and squaring with a plain Taylor series.
inline ComplexMatrix expm_series(const Matrix& p, double t) {
  const Index n = p.rows();
  ComplexMatrix m = Complex(0.0, -t) * p.cast<Complex>();
  int squarings = 0;
  double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.5) {
    m *= 0.5;
    norm *= 0.5;
    ++squarings;
  }
  ComplexMatrix sum = ComplexMatrix::Identity(n, n);
  ComplexMatrix term = ComplexMatrix::Identity(n, n);
  for (int k = 1; k <= 30; ++k) {
    term = term * m / static_cast<double>(k);
    sum += term;
  }
  for (int k = 0; k < squarings; ++k) sum = sum * sum;
  return sum;
}

// (1/T) integral of |e^{-iPt}|^2 over [0, T] by composite Simpson with the
// given (even) number of intervals.
inline Matrix simpson_time_average(const qwalk::Spectrum& s, double T, int intervals) {
  const Index n = s.eigenvalues.size();
  Matrix acc = Matrix::Zero(n, n);
  const double h = T / intervals;
  for (int k = 0; k <= intervals; ++k) {
    const double weight = (k == 0 || k == intervals) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    acc += weight * qwalk::propagator(s, k * h).cwiseAbs2();
  }
  return acc * (h / 3.0) / T;
}

inline Matrix matrix_power(const Matrix& m, long e) {
  Matrix acc = Matrix::Identity(m.rows(), m.cols());
  for (long k = 0; k < e; ++k) acc = m * acc;
  return acc;
}

// Random symmetric doubly stochastic matrix: symmetrize a positive random
// matrix, then Sinkhorn-normalize.  Dense positive entries keep it ergodic.
inline Matrix random_symmetric_chain(Index n, qwalk::RngStream& rng) {
  Matrix a(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = 0.05 + rng.next_unit();
  a = 0.5 * (a + a.transpose()).eval();
  for (int iter = 0; iter < 500; ++iter) {
    const Vector r = a.rowwise().sum();
    const Vector scale = r.cwiseSqrt().cwiseInverse();
    a = scale.asDiagonal() * a * scale.asDiagonal();
    a = 0.5 * (a + a.transpose()).eval();
    if ((a.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-14) break;
  }
  return a;
}

// Eigenvalue classes of the torus by brute force: bucket all p^d frequency
// vectors by their analytic eigenvalue, no orbit reasoning involved.
inline std::vector<std::size_t> torus_class_sizes_brute(long p, long d) {
  std::map<long long, std::size_t> buckets;  // key: eigenvalue rounded to 1e-10
  const long N = qwalk::GraphSpec::torus(p, d).vertex_count();
  for (long x = 0; x < N; ++x) {
    const double value = qwalk::torus_eigenvalue(qwalk::torus_coords(x, p, d), p, d);
    buckets[static_cast<long long>(std::llround(value * 1e10))]++;
  }
  std::vector<std::size_t> sizes;
  for (const auto& [key, size] : buckets) sizes.push_back(size);
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

}  // namespace oracle
