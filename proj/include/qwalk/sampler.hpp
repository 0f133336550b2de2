#pragma once

#include "qwalk/markov.hpp"
#include "qwalk/rng.hpp"
#include "qwalk/spectrum.hpp"
#include "qwalk/types.hpp"
#include "qwalk/walk.hpp"

#include <algorithm>
#include <cstdint>
#include <thread>
#include <utility>
#include <vector>

namespace qwalk {

// One measurement of the walk run for a uniformly random time in [0, T].
// Drawing the time uniformly makes the output law exactly the finite average.
inline SampleTrace single_loop(const Spectrum& s, double time_horizon, int start,
                               std::uint64_t seed, std::uint64_t trial = 0) {
  if (time_horizon <= 0.0) throw invalid_input("single loop: need T > 0");
  if (start < 0 || start >= s.size()) throw invalid_input("single loop: start out of range");
  RngStream rng(seed, trial);
  SampleTrace trace;
  trace.seed = seed;
  trace.trial = trial;
  trace.initial_state = start;
  const double t = rng.next_unit() * time_horizon;
  const int observed = sample_from_column(measurement_column(s, t, start), rng);

  trace.rounds.emplace_back(t, observed);
  trace.final_state = observed;
  return trace;
}

// Repeated measurement: each round restarts the walk from the previous
// outcome, so the output law is the rounds-th power of the finite average.
inline SampleTrace double_loop(const Spectrum& s, double time_horizon, long rounds, int start,
                               std::uint64_t seed, std::uint64_t trial = 0) {
  if (time_horizon <= 0.0) throw invalid_input("double loop: need T > 0");
  if (rounds < 0) throw invalid_input("double loop: need rounds >= 0");
  if (start < 0 || start >= s.size()) throw invalid_input("double loop: start out of range");
  RngStream rng(seed, trial);
  SampleTrace trace;
  trace.seed = seed;
  trace.trial = trial;
  trace.initial_state = start;
  int state = start;
  for (long r = 0; r < rounds; ++r) {
    const double t = rng.next_unit() * time_horizon;
    state = sample_from_column(measurement_column(s, t, state), rng);
    trace.rounds.emplace_back(t, state);
  }
  trace.final_state = state;
  return trace;
}

// Closed-form output law of the double loop from a fixed start state: the
// start column of the rounds-th power of the finite average.
inline Distribution exact_output_law(const Spectrum& s, const EigenvalueClasses& classes,
                                     double time_horizon, long rounds, int start) {
  if (rounds < 0) throw invalid_input("output law: need rounds >= 0");
  if (start < 0 || start >= s.size()) throw invalid_input("output law: start out of range");
  Vector law = Vector::Zero(s.size());
  law[start] = 1.0;
  if (rounds > 0) {
    const Matrix avg = cesaro_finite(s, classes, time_horizon).entries;
    for (long r = 0; r < rounds; ++r) law = avg * law;
  }
  return Distribution(std::move(law));
}

// Parameters that guarantee output distance <= eps from uniform: inner horizon
// tau'(eps0) and the amplified outer round count.
struct ConvergenceParams {
  double time_horizon = 0.0;
  long rounds = 0;
  AmplificationParams amplification;
};

inline ConvergenceParams convergence_params(const Spectrum& s, const EigenvalueClasses& classes,
                                            double eps, const Tolerances& tol = tolerances()) {
  ConvergenceParams params;
  params.amplification = alpha_and_threshold(s, classes, tol);
  params.time_horizon = params.amplification.tau_prime_mix;
  params.rounds = params.amplification.repetitions_for(eps);
  return params;
}

struct TrialSummary {
  std::vector<long> counts;          // histogram of final states
  std::vector<SampleTrace> traces;   // per-trial traces when requested
  std::uint64_t seed = 0;
  long trials = 0;
};

// Monte Carlo over independent trials.  Trial i always draws from stream
// (seed, i), and results land in slot i, so the summary is identical for any
// thread count.  rounds = 1 reproduces the single loop draw for draw.
inline TrialSummary run_trials(const Spectrum& s, double time_horizon, long rounds, int start,
                               std::uint64_t seed, long trials, int threads = 1,
                               bool keep_traces = false) {
  if (trials < 1) throw invalid_input("trials: need at least 1");
  if (rounds < 1) throw invalid_input("trials: need at least 1 round");
  if (threads < 1) threads = 1;
  threads = static_cast<int>(std::min<long>(threads, trials));

  std::vector<int> finals(static_cast<std::size_t>(trials));
  TrialSummary summary;
  summary.seed = seed;
  summary.trials = trials;
  if (keep_traces) summary.traces.resize(static_cast<std::size_t>(trials));

  auto worker = [&](long begin, long end) {
    for (long i = begin; i < end; ++i) {
      SampleTrace trace = double_loop(s, time_horizon, rounds, start, seed,
                                      static_cast<std::uint64_t>(i));
      finals[static_cast<std::size_t>(i)] = trace.final_state;
      if (keep_traces) summary.traces[static_cast<std::size_t>(i)] = std::move(trace);
    }
  };

  if (threads == 1) {
    worker(0, trials);
  } else {
    std::vector<std::thread> pool;
    const long chunk = (trials + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
      const long begin = w * chunk;
      const long end = std::min<long>(trials, begin + chunk);
      if (begin < end) pool.emplace_back(worker, begin, end);
    }
    for (std::thread& th : pool) th.join();
  }

  summary.counts.assign(static_cast<std::size_t>(s.size()), 0);
  for (int f : finals) ++summary.counts[static_cast<std::size_t>(f)];
  return summary;
}

inline Distribution empirical_distribution(const TrialSummary& summary) {
  Vector p(static_cast<Index>(summary.counts.size()));
  for (std::size_t i = 0; i < summary.counts.size(); ++i)
    p[static_cast<Index>(i)] =
        static_cast<double>(summary.counts[i]) / static_cast<double>(summary.trials);
  return Distribution(std::move(p));
}

}  // namespace qwalk
