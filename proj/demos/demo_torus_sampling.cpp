// Walk the 5x5 torus: pick convergence parameters for a 1% target, draw a few
// thousand samples, and compare the empirical law against the exact one.

#include "qwalk/qwalk.hpp"

#include <cstdio>

int main() {
  using namespace qwalk;

  const TransitionMatrix walk = build_transition(GraphSpec::torus(5, 2));
  const Spectrum spectrum = eigendecompose(walk);
  const EigenvalueClasses classes = group_eigenvalues(spectrum);

  const double eps = 0.01;
  const ConvergenceParams params = convergence_params(spectrum, classes, eps);
  std::printf("graph           %s\n", walk.spec.label().c_str());
  std::printf("alpha           %.6f\n", params.amplification.alpha);
  std::printf("inner horizon T %.6f\n", params.time_horizon);
  std::printf("outer rounds T' %ld\n", params.rounds);

  const Distribution exact =
      exact_output_law(spectrum, classes, params.time_horizon, params.rounds, 0);
  std::printf("exact law vs uniform: TV = %.6f (target %.2f)\n",
              tv_distance(exact, Distribution::uniform(walk.size())), eps);

  const TrialSummary trials =
      run_trials(spectrum, params.time_horizon, params.rounds, 0, 2026, 20000, 4);
  std::printf("20000 trials vs exact law: TV = %.6f\n",
              tv_distance(empirical_distribution(trials), exact));
  return 0;
}
