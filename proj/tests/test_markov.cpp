#include "qwalk/markov.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

using namespace qwalk;

TEST_CASE("distribution validation", "[markov]") {
  CHECK_THROWS_AS(Distribution(Vector::Zero(0)), invalid_input);
  Vector bad(2);
  bad << 0.7, 0.2;
  CHECK_THROWS_AS(Distribution(bad), invalid_input);
  Vector negative(2);
  negative << 1.1, -0.1;
  CHECK_THROWS_AS(Distribution(negative), invalid_input);
  Vector clampable(2);
  clampable << 1.0 + 1e-13, -1e-13;
  const Distribution d(clampable);
  CHECK(d.probs.minCoeff() == 0.0);
  CHECK(d.probs.sum() == Catch::Approx(1.0).margin(1e-15));
}

TEST_CASE("total variation distances", "[markov]") {
  Vector p(2), q(2);
  p << 1.0, 0.0;
  q << 0.0, 1.0;
  CHECK(tv_distance(p, q) == 1.0);
  q << 0.5, 0.5;
  CHECK(tv_distance(p, q) == 0.5);
  CHECK(tv_distance(p, p) == 0.0);
  CHECK_THROWS_AS(tv_distance(p, Vector::Zero(3)), invalid_input);

  CHECK(matrix_tv_distance(Matrix::Identity(2, 2), uniform_projector(2)) == 0.5);
  CHECK(max_pairwise_column_distance(uniform_projector(5)) == 0.0);
  CHECK(max_pairwise_column_distance(Matrix::Identity(2, 2)) == 1.0);
}

TEST_CASE("spectral gap of the lazy cycle matches the closed form", "[markov]") {
  const SpectralGap g = spectral_gap(lazy(build_transition(GraphSpec::cycle(9))));
  const double expected_lambda = 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi / 9.0));
  CHECK(g.lambda == Catch::Approx(expected_lambda).margin(1e-12));
  CHECK(g.delta == Catch::Approx(1.0 - expected_lambda).margin(1e-12));
  CHECK(g.second_largest == Catch::Approx(expected_lambda).margin(1e-12));
  CHECK(g.second_largest >= std::abs(g.most_negative));  // lazy spectrum is nonnegative
}

TEST_CASE("spectral gap corner cases", "[markov]") {
  const SpectralGap complete = spectral_gap(build_transition(GraphSpec::complete(8, true)));
  CHECK(complete.lambda == Catch::Approx(0.0).margin(1e-12));
  CHECK(complete.delta == Catch::Approx(1.0).margin(1e-12));

  // Bipartite: -1 is in the spectrum, so the gap closes.
  const SpectralGap cube = spectral_gap(build_transition(GraphSpec::hypercube(3)));
  CHECK(cube.lambda == Catch::Approx(1.0).margin(1e-12));
  CHECK(cube.delta == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("exact mixing time of the lazy 4-cycle is 6 at one percent", "[markov]") {
  // Hand computation: distance after t steps is 2^{-t-1}, so 0.01 needs t = 6.
  const TransitionMatrix t = lazy(build_transition(GraphSpec::cycle(4)));
  MixingProfile profile;
  CHECK(mixing_time_exact(t, 0.01, &profile) == 6);
  for (std::size_t k = 0; k + 1 < profile.distances.size(); ++k)
    CHECK(profile.distances[k + 1] <= profile.distances[k] + 1e-15);
  for (long step : {1L, 3L, 5L})
    CHECK(profile.distances[static_cast<std::size_t>(step)] ==
          Catch::Approx(std::pow(2.0, -step - 1)).margin(1e-12));
}

TEST_CASE("complete graph with self-loops mixes in one step", "[markov]") {
  const TransitionMatrix t = build_transition(GraphSpec::complete(8, true));
  CHECK(mixing_time_exact(t, 0.3) == 1);
  CHECK(mixing_time_exact(t, 1e-6) == 1);
}

TEST_CASE("mixing time rejects non-ergodic chains and bad eps", "[markov]") {
  const TransitionMatrix bipartite = build_transition(GraphSpec::cycle(4));
  CHECK_THROWS_AS(mixing_time_exact(bipartite, 0.1), invalid_input);
  const TransitionMatrix fine = lazy(bipartite);
  CHECK_THROWS_AS(mixing_time_exact(fine, 0.0), invalid_input);
  CHECK_THROWS_AS(mixing_time_exact(fine, 1.0), invalid_input);
}

TEST_CASE("spectral bounds sandwich the exact mixing time", "[markov]") {
  for (const GraphSpec& spec : {GraphSpec::cycle(9), GraphSpec::torus(5, 2)}) {
    const TransitionMatrix t = lazy(build_transition(spec));
    for (double eps : {0.1, 0.01, 0.001}) {
      INFO(spec.label() << " eps=" << eps);
      const MixingBounds bounds = mixing_time_bounds(t, eps);
      const long exact = mixing_time_exact(t, eps);
      CHECK(bounds.lower <= static_cast<double>(exact));
      CHECK(static_cast<double>(exact) <= bounds.upper);
    }
  }
}

TEST_CASE("threshold amplification", "[markov]") {
  const TransitionMatrix one_step = build_transition(GraphSpec::complete(8, true));
  const ThresholdAmplification amp = threshold_and_amplify(one_step, {0.001});
  CHECK(amp.tau_mix == 1);
  CHECK(amp.rows.at(0).amplified == 7);  // ceil(ln 1000) = 7
  CHECK(amp.rows.at(0).exact <= 7);

  const TransitionMatrix slow = lazy(build_transition(GraphSpec::cycle(9)));
  const ThresholdAmplification rows = threshold_and_amplify(slow, {0.1, 0.01, 0.001});
  const SpectralGap gap = spectral_gap(slow);
  CHECK(1.0 / gap.delta <= static_cast<double>(rows.tau_mix));  // threshold lower bound
  const double aldous_upper =
      (1.0 + 0.5 * std::log(static_cast<double>(slow.size()))) / gap.delta;
  CHECK(static_cast<double>(rows.tau_mix) <= aldous_upper);
  for (const AmplifiedRow& row : rows.rows) CHECK(row.exact <= row.amplified);
}

TEST_CASE("entry floor bound", "[markov]") {
  CHECK(entry_floor_bound(0.75, 0.5) == 0.75);
  CHECK(entry_floor_bound(1.0, 1.0) == Catch::Approx(0.0).margin(1e-15));
  CHECK(entry_floor_bound(0.6, 0.5) < 1.0);
  CHECK_THROWS_AS(entry_floor_bound(0.5, 0.5), invalid_input);
  CHECK_THROWS_AS(entry_floor_bound(0.75, 0.0), invalid_input);
  CHECK_THROWS_AS(entry_floor_bound(0.75, 1.5), invalid_input);
}

TEST_CASE("perturbation bound formula and self-check", "[markov]") {
  RngStream rng(11, 0);
  const Matrix q = oracle::random_symmetric_chain(6, rng);
  const Matrix q2 = 0.85 * q + 0.15 * uniform_projector(6);
  const double beta = matrix_tv_distance(q, q2);
  const double gamma = max_pairwise_column_distance(q);
  CHECK(perturbation_bound(q, q2) == Catch::Approx(2.0 * beta + gamma).margin(1e-14));
  CHECK(max_pairwise_column_distance(q2) <= perturbation_bound(q, q2));
}

TEST_CASE("pairwise column distance is submultiplicative under powers", "[markov]") {
  RngStream rng(7, 0);
  for (int chain = 0; chain < 10; ++chain) {
    const Matrix q = oracle::random_symmetric_chain(6, rng);
    std::vector<double> dbar;
    for (long t = 0; t <= 12; ++t)
      dbar.push_back(max_pairwise_column_distance(oracle::matrix_power(q, t)));
    for (long s = 0; s <= 6; ++s)
      for (long t = 0; t <= 6; ++t)
        CHECK(dbar[static_cast<std::size_t>(s + t)] <=
              dbar[static_cast<std::size_t>(s)] * dbar[static_cast<std::size_t>(t)] + 1e-12);
    // Worst-case distance to uniform is within a factor two of dbar.
    for (long t = 1; t <= 6; ++t) {
      const double d = matrix_tv_distance(oracle::matrix_power(q, t), uniform_projector(6));
      CHECK(d <= dbar[static_cast<std::size_t>(t)] + 1e-12);
      CHECK(dbar[static_cast<std::size_t>(t)] <= 2.0 * d + 1e-12);
    }
  }
}

TEST_CASE("poisson average interpolates identity to uniform", "[markov]") {
  const TransitionMatrix t = lazy(build_transition(GraphSpec::cycle(7)));
  const Spectrum s = eigendecompose(t);
  CHECK(max_abs(poisson_average(s, 0.0) - Matrix::Identity(7, 7)) <= 1e-12);
  CHECK(max_abs(poisson_average(s, 500.0) - uniform_projector(7)) <= 1e-10);
  double prev = 1.0;
  for (double time : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
    const double d = matrix_tv_distance(poisson_average(s, time), uniform_projector(7));
    CHECK(d <= prev + 1e-13);
    prev = d;
  }
  CHECK_THROWS_AS(poisson_average(s, -1.0), invalid_input);
}

TEST_CASE("discrete cesaro power average", "[markov]") {
  const TransitionMatrix t = build_transition(GraphSpec::complete(8, true));
  CHECK(max_abs(cesaro_power_average(t, 1) - Matrix::Identity(8, 8)) == 0.0);
  const Matrix two = cesaro_power_average(t, 2);
  CHECK(max_abs(two - 0.5 * (Matrix::Identity(8, 8) + t.entries)) <= 1e-15);
  CHECK_THROWS_AS(cesaro_power_average(t, 0), invalid_input);
}

TEST_CASE("classical sampling is seeded and matches the exact law", "[markov]") {
  const TransitionMatrix t = lazy(build_transition(GraphSpec::cycle(4)));
  CHECK(classical_sample(t, 0, 2, 99) == 2);

  SampleTrace trace;
  const int a = classical_sample(t, 6, 0, 42, 0, &trace);
  const int b = classical_sample(t, 6, 0, 42, 0);
  CHECK(a == b);
  CHECK(trace.rounds.size() == 6);
  CHECK(trace.final_state == a);

  const Matrix law = oracle::matrix_power(t.entries, 6);
  Vector counts = Vector::Zero(4);
  const long trials = 50000;
  for (long i = 0; i < trials; ++i)
    counts[classical_sample(t, 6, 0, 1234, static_cast<std::uint64_t>(i))] += 1.0;
  CHECK(tv_distance(Vector(counts / static_cast<double>(trials)), Vector(law.col(0))) <= 0.02);

  CHECK_THROWS_AS(classical_sample(t, 1, 9, 0), invalid_input);
  CHECK_THROWS_AS(classical_sample(t, -1, 0, 0), invalid_input);
}
