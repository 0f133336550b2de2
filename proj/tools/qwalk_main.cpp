// qwalk: quantum-walk sampling and Markov mixing experiments as file-based,
// reproducible pipelines.  Every subcommand reads/writes JSON or CSV
// artifacts; exit code 0 means all requested assertions held.

#include "qwalk/qwalk.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace qwalk;

constexpr int exit_ok = 0;
constexpr int exit_assertion_failed = 1;
constexpr int exit_error = 2;

std::string csv_cell(double v) { return format_double(v); }

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::string text;
  for (std::size_t i = 0; i < header.size(); ++i)
    text += (i ? "," : "") + header[i];
  text += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) text += (i ? "," : "") + row[i];
    text += "\n";
  }
  write_text_file(path, text);
}

// ---- generate -----------------------------------------------------------

std::map<std::string, std::string> parse_params(const std::string& params) {
  std::map<std::string, std::string> out;
  std::stringstream stream(params);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw invalid_input("params: expected key=value, got '" + item + "'");
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

long param_long(const std::map<std::string, std::string>& params, const std::string& key) {
  const auto it = params.find(key);
  if (it == params.end()) throw invalid_input("params: missing '" + key + "'");
  return std::stol(it->second);
}

int cmd_generate(const std::string& family, const std::string& params_text,
                 const std::string& adjacency_file, bool lazify, const std::string& out) {
  const auto params = parse_params(params_text);
  GraphSpec spec;
  const Family f = family_from_name(family);
  switch (f) {
    case Family::cycle: spec = GraphSpec::cycle(param_long(params, "n")); break;
    case Family::torus:
      spec = GraphSpec::torus(param_long(params, "p"), param_long(params, "d"));
      break;
    case Family::hypercube: spec = GraphSpec::hypercube(param_long(params, "n")); break;
    case Family::complete: {
      bool loops = false;
      if (const auto it = params.find("self_loops"); it != params.end())
        loops = it->second == "true" || it->second == "1";
      spec = GraphSpec::complete(param_long(params, "n"), loops);
      break;
    }
    case Family::custom: {
      if (adjacency_file.empty())
        throw invalid_input("generate: custom family needs --adjacency file");
      const Json j = load_json_file(adjacency_file);
      const Index n = j.at("n").get<Index>();
      spec = GraphSpec::custom(matrix_rows_from_json(j.at("rows"), n));
      break;
    }
  }
  TransitionMatrix t = build_transition(spec);
  if (lazify) t = lazy(t);
  save_matrix(t, out);
  std::printf("wrote %s: %s, N = %ld%s\n", out.c_str(), t.spec.label().c_str(),
              static_cast<long>(t.size()), t.lazified ? ", lazy" : "");
  return exit_ok;
}

// ---- analyze ------------------------------------------------------------

int cmd_analyze(const std::string& matrix_file, const std::vector<double>& eps_list,
                const std::string& out, const std::string& profile_csv) {
  const TransitionMatrix t = load_matrix(matrix_file);
  const Spectrum s = eigendecompose(t);
  const SpectralGap gap = spectral_gap(s);
  Json j;
  j["type"] = "analyze";
  j["graph"] = t.spec.label();
  j["n"] = t.size();
  j["ergodic"] = t.ergodic();
  j["delta"] = gap.delta;
  j["lambda"] = gap.lambda;
  j["second_largest"] = gap.second_largest;
  j["most_negative"] = gap.most_negative;
  j["lambda_is_second_largest"] = gap.second_largest >= std::abs(gap.most_negative);

  if (t.ergodic()) {
    const ThresholdAmplification amp = threshold_and_amplify(t, eps_list);
    j["tau_mix"] = amp.tau_mix;
    Json rows = Json::array();
    for (const AmplifiedRow& row : amp.rows) {
      const MixingBounds bounds = mixing_bounds_from_gap(gap, t.size(), row.eps);
      rows.push_back({{"eps", row.eps},
                      {"tau", row.exact},
                      {"amplified_bound", row.amplified},
                      {"ds_lower", bounds.lower},
                      {"ds_upper", bounds.upper}});
    }
    j["rows"] = rows;
    if (!profile_csv.empty()) {
      MixingProfile profile;
      const double eps_min = *std::min_element(eps_list.begin(), eps_list.end());
      mixing_time_exact(t, eps_min, &profile);
      std::vector<std::vector<std::string>> csv_rows;
      for (std::size_t step = 0; step < profile.distances.size(); ++step)
        csv_rows.push_back({std::to_string(step), csv_cell(profile.distances[step])});
      write_csv(profile_csv, {"t", "distance_to_uniform"}, csv_rows);
    }
  }
  write_text_file(out, j.dump(2) + "\n");
  std::printf("wrote %s: delta = %s, ergodic = %s\n", out.c_str(), format_double(gap.delta).c_str(),
              t.ergodic() ? "true" : "false");
  return exit_ok;
}

// ---- cesaro / pi --------------------------------------------------------

int cmd_cesaro(const std::string& matrix_file, double horizon, const std::string& out) {
  const TransitionMatrix t = load_matrix(matrix_file);
  const Spectrum s = eigendecompose(t);
  const EigenvalueClasses classes = group_eigenvalues(s);
  const StochasticSnapshot snap = cesaro_finite(s, classes, horizon);
  const StochasticSnapshot limit = cesaro_infinite(s, classes);
  save_snapshot(snap, out, spec_to_json(t.spec, t.lazified));
  std::printf("wrote %s: T = %s, distance to limit = %s\n", out.c_str(),
              format_double(horizon).c_str(),
              format_double(matrix_tv_distance(snap, limit)).c_str());
  return exit_ok;
}

int cmd_pi(const std::string& matrix_file, const std::string& out) {
  const TransitionMatrix t = load_matrix(matrix_file);
  const PiFloorReport floor = pi_floor_report(t);
  const Spectrum s = eigendecompose(t);
  const EigenvalueClasses classes = group_eigenvalues(s);
  const StochasticSnapshot limit = cesaro_infinite(s, classes);
  if (!out.empty()) save_snapshot(limit, out, spec_to_json(t.spec, t.lazified));
  std::printf("graph %s: min entry = %s, N*min = %s, floor 1/N^2 %s\n", t.spec.label().c_str(),
              format_double(floor.min_entry).c_str(), format_double(floor.n_times_min).c_str(),
              floor.passes_inverse_n2 ? "passes" : "FAILS");
  return floor.passes_inverse_n2 ? exit_ok : exit_assertion_failed;
}

// ---- qmix ---------------------------------------------------------------

int cmd_qmix(const std::string& matrix_file, double eps, const std::string& out) {
  const TransitionMatrix t = load_matrix(matrix_file);
  const Spectrum s = eigendecompose(t);
  const EigenvalueClasses classes = group_eigenvalues(s);
  const CesaroTerms terms = cesaro_terms(s, classes);
  const QuantumMixingResult result = quantum_mixing_search(terms, eps);
  const AmplificationParams params = alpha_and_threshold(s, classes);
  Json j;
  j["type"] = "qmix";
  j["graph"] = t.spec.label();
  j["n"] = t.size();
  j["eps"] = eps;
  j["tau_prime"] = result.tau;
  j["distance_at_tau"] = result.distance;
  j["envelope_time"] = result.envelope_time;
  j["from_revival_candidate"] = result.from_candidate;
  j["alpha"] = params.alpha;
  j["eps0"] = params.eps0;
  j["tau_prime_mix"] = params.tau_prime_mix;
  j["amplification_ok"] = params.amplification_ok;
  if (!out.empty()) write_text_file(out, j.dump(2) + "\n");
  std::printf("graph %s: tau'(%s) = %s, alpha = %s, tau'_mix = %s\n", t.spec.label().c_str(),
              format_double(eps).c_str(), format_double(result.tau).c_str(),
              format_double(params.alpha).c_str(), format_double(params.tau_prime_mix).c_str());
  return exit_ok;
}

// ---- sample -------------------------------------------------------------

int cmd_sample(const std::string& matrix_file, double eps, std::uint64_t seed, long trials,
               int threads, const std::string& mode, const std::string& out,
               const std::string& trace_csv) {
  const TransitionMatrix t = load_matrix(matrix_file);
  const Spectrum s = eigendecompose(t);
  const EigenvalueClasses classes = group_eigenvalues(s);
  const ConvergenceParams params = convergence_params(s, classes, eps);
  const double horizon = params.time_horizon;
  const long rounds = mode == "single" ? 1 : params.rounds;
  const int start = 0;

  const Distribution exact = exact_output_law(s, classes, horizon, rounds, start);
  const Distribution uniform = Distribution::uniform(t.size());
  Json j;
  j["type"] = "sample";
  j["graph"] = t.spec.label();
  j["n"] = t.size();
  j["mode"] = mode;
  j["eps"] = eps;
  j["T"] = horizon;
  j["T_prime"] = rounds;
  j["alpha"] = params.amplification.alpha;
  j["eps0"] = params.amplification.eps0;
  j["seed"] = seed;
  j["tv_to_uniform_exact"] = tv_distance(exact, uniform);

  bool ok = true;
  if (mode == "exact") {
    ok = tv_distance(exact, uniform) <= eps;
  } else {
    const TrialSummary summary =
        run_trials(s, horizon, rounds, start, seed, trials, threads, !trace_csv.empty());
    j["trials"] = trials;
    const Distribution empirical = empirical_distribution(summary);
    j["tv_mc_vs_exact"] = tv_distance(empirical, exact);
    Json counts = Json::array();
    for (long c : summary.counts) counts.push_back(c);
    j["counts"] = counts;
    if (!trace_csv.empty()) {
      std::vector<std::vector<std::string>> rows;
      for (const SampleTrace& trace : summary.traces)
        for (std::size_t r = 0; r < trace.rounds.size(); ++r)
          rows.push_back({std::to_string(trace.trial), std::to_string(r),
                          csv_cell(trace.rounds[r].first), std::to_string(trace.rounds[r].second)});
      write_csv(trace_csv, {"trial", "round", "time", "state"}, rows);
    }
  }
  if (!out.empty()) write_text_file(out, j.dump(2) + "\n");
  std::printf("graph %s: T = %s, T' = %ld, tv_to_uniform_exact = %s%s\n", t.spec.label().c_str(),
              format_double(horizon).c_str(), rounds,
              format_double(j["tv_to_uniform_exact"].get<double>()).c_str(),
              ok ? "" : " (ASSERTION FAILED)");
  return ok ? exit_ok : exit_assertion_failed;
}

// ---- conjecture ---------------------------------------------------------

struct SuiteOutcome {
  Json checks = Json::array();
  std::vector<std::vector<std::string>> evidence;
  bool all_ok = true;

  void record(const std::string& name, bool ok, const Json& detail) {
    checks.push_back({{"check", name}, {"pass", ok}, {"detail", detail}});
    all_ok = all_ok && ok;
  }
};

void torus_suite(SuiteOutcome& outcome) {
  const Json golden = load_golden("torus_amplification.json");
  for (long d : {1L, 2L}) {
    const Json& entry = golden.at(d == 1 ? "d1" : "d2");
    const double floor = entry.at("floor").get<double>();
    std::vector<long> p_list;
    for (const Json& row : entry.at("table")) p_list.push_back(row.at("p").get<long>());
    const TorusAmplificationReport report = torus_amplification_report(p_list, d);
    bool floor_ok = true;
    Json rows = Json::array();
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
      const TorusAmplificationRow& row = report.rows[i];
      floor_ok = floor_ok && row.n_times_min >= floor;
      rows.push_back({{"p", row.p},
                      {"N", row.n},
                      {"n_times_min", row.n_times_min},
                      {"alpha", row.alpha},
                      {"max_class_size", row.max_class_size}});
      outcome.evidence.push_back({"torus_amplification_d" + std::to_string(d),
                                  std::to_string(row.p), std::to_string(row.n),
                                  csv_cell(row.n_times_min), csv_cell(row.alpha),
                                  std::to_string(row.max_class_size)});
    }
    outcome.record("torus_entry_floor_scaling_d" + std::to_string(d),
                   floor_ok && report.inverse_n2_ok, {{"floor", floor}, {"rows", rows}});
    outcome.record("torus_class_size_cap_d" + std::to_string(d), report.class_sizes_ok,
                   {{"cap", d == 1 ? 2 : 8}});
    outcome.record("torus_alpha_below_one_d" + std::to_string(d), report.alpha_below_one, {});
  }
  for (auto [p, d] : {std::pair<long, long>{5, 1}, {7, 1}, {5, 2}, {7, 2}}) {
    const MultiplicityCheck check = multiplicity_class_check(p, d);
    outcome.record("orbit_multiplicities_p" + std::to_string(p) + "_d" + std::to_string(d),
                   check.ok,
                   {{"classes", check.class_count}, {"max_size", check.max_class_size},
                    {"detail", check.detail}});
  }
  {
    RngStream rng(20260822, 0);
    const long n = 10007, d = 2;
    bool ok = true;
    long worst = n;
    for (int i = 0; i < 100; ++i) {
      std::vector<long> y = {static_cast<long>(rng.next_u64() % n),
                             static_cast<long>(rng.next_u64() % n)};
      try {
        worst = std::min(worst, cancellation_count(n, d, y));
      } catch (const numerical_failure&) {
        ok = false;
        break;
      }
    }
    outcome.record("cancellation_floor",
                   ok && static_cast<double>(worst) >= static_cast<double>(n) / 256.0,
                   {{"n", n}, {"worst_count", worst}});
  }
  {
    const Json golden_residual = load_golden("reference_values.json");
    const Spectrum s = eigendecompose(build_transition(GraphSpec::torus(5, 1)));
    const PeriodicityResult r = periodicity_check(s, 2.0 * std::numbers::pi);
    const double recorded = golden_residual.at("torus5_residual_at_2pi").get<double>();
    outcome.record("torus_no_short_period", std::abs(r.residual - recorded) <= 1e-9,
                   {{"residual", r.residual}, {"recorded", recorded}});
  }
  const Json golden_tau = load_golden("cycle_tau_prime.json");
  for (const Json& row : golden_tau.at("entries")) {
    const long n = row.at("n").get<long>();
    const DiameterReport diam = diameter_bound_report(GraphSpec::cycle(n));
    const double recorded = row.at("tau_prime_mix").get<double>();
    outcome.record("cycle_tau_prime_n" + std::to_string(n),
                   std::abs(diam.tau_prime_mix - recorded) <= 1e-6 * std::max(1.0, recorded),
                   {{"tau_prime_mix", diam.tau_prime_mix}, {"recorded", recorded}});
    outcome.evidence.push_back({"cycle_diameter", std::to_string(n),
                                std::to_string(diam.diameter), csv_cell(diam.tau_prime_mix),
                                csv_cell(diam.ratio_to_diameter), csv_cell(diam.gap_bound)});
  }
}

void hypercube_suite(SuiteOutcome& outcome) {
  for (long n : {3L, 4L, 5L}) {
    const TransitionMatrix t = build_transition(GraphSpec::hypercube(n));
    const PiFloorReport floor = pi_floor_report(t);
    outcome.record("hypercube_pi_floor_n" + std::to_string(n), floor.passes_inverse_n2,
                   {{"min_entry", floor.min_entry}, {"n_times_min", floor.n_times_min}});
    const Spectrum s = eigendecompose(t);
    const double period = 2.0 * std::numbers::pi * static_cast<double>(n);
    const PeriodicityResult r = periodicity_check(s, period);
    const EigenvalueClasses classes = group_eigenvalues(s);
    const double gap = matrix_tv_distance(cesaro_finite(s, classes, period),
                                          cesaro_infinite(s, classes));
    outcome.record("hypercube_period_n" + std::to_string(n), r.residual <= 1e-9 && gap <= 1e-9,
                   {{"residual", r.residual}, {"average_gap_at_period", gap}});
    const DiameterReport diam = diameter_bound_report(GraphSpec::hypercube(n));
    outcome.record("hypercube_tau_prime_within_period_n" + std::to_string(n),
                   diam.tau_prime_mix <= period + 1e-6,
                   {{"tau_prime_mix", diam.tau_prime_mix}, {"period", period}});
    outcome.evidence.push_back({"hypercube_diameter", std::to_string(n),
                                std::to_string(diam.diameter), csv_cell(diam.tau_prime_mix),
                                csv_cell(diam.ratio_to_diameter), csv_cell(diam.gap_bound)});
  }
}

void complete_suite(SuiteOutcome& outcome) {
  {
    const PiFloorReport floor = pi_floor_report(build_transition(GraphSpec::complete(16, true)));
    outcome.record("complete_pi_floor", floor.passes_inverse_n2,
                   {{"min_entry", floor.min_entry}, {"n_times_min", floor.n_times_min}});
  }
  const CompleteGraphReport report = complete_graph_negative_result(16, {0.7, 2.3, 5.0});
  outcome.record("complete_closed_form", report.closed_form_ok,
                 {{"deviation", report.closed_form_deviation}});
  outcome.record("complete_offdiag_cap", report.offdiag_ok,
                 {{"max_offdiag", report.max_offdiag_probability}, {"cap", report.offdiag_cap}});
  outcome.record("complete_alpha_formula", report.alpha_ok,
                 {{"alpha", report.alpha}, {"predicted", report.alpha_predicted}});
  outcome.record("complete_amplification_fails", report.amplification_degrades, {});
  const Spectrum s = eigendecompose(build_transition(GraphSpec::complete(16, true)));
  const PeriodicityResult r = periodicity_check(s, 2.0 * std::numbers::pi);
  outcome.record("complete_period_2pi", r.residual <= 1e-9, {{"residual", r.residual}});
  const DiameterReport diam = diameter_bound_report(GraphSpec::complete(16, true));
  outcome.record("complete_tau_prime_small", diam.tau_prime_mix <= 2.0 * std::numbers::pi + 1e-6,
                 {{"tau_prime_mix", diam.tau_prime_mix}});
  outcome.evidence.push_back({"complete_diameter", "16", "1", csv_cell(diam.tau_prime_mix),
                              csv_cell(diam.ratio_to_diameter), csv_cell(diam.gap_bound)});
}

int cmd_conjecture(const std::string& suite, const std::string& out) {
  SuiteOutcome outcome;
  if (suite == "torus" || suite == "all") torus_suite(outcome);
  if (suite == "hypercube" || suite == "all") hypercube_suite(outcome);
  if (suite == "complete" || suite == "all") complete_suite(outcome);
  Json j;
  j["type"] = "conjecture";
  j["suite"] = suite;
  j["all_pass"] = outcome.all_ok;
  j["checks"] = outcome.checks;
  write_text_file(out, j.dump(2) + "\n");
  std::filesystem::path csv_path(out);
  csv_path.replace_extension(".csv");
  write_csv(csv_path, {"table", "param", "size_or_diam", "value", "ratio_or_alpha", "extra"},
            outcome.evidence);
  int passed = 0;
  for (const Json& check : outcome.checks)
    if (check.at("pass").get<bool>()) ++passed;
  std::printf("suite %s: %d/%zu checks passed; wrote %s and %s\n", suite.c_str(), passed,
              outcome.checks.size(), out.c_str(), csv_path.c_str());
  return outcome.all_ok ? exit_ok : exit_assertion_failed;
}

// ---- trotter ------------------------------------------------------------

int cmd_trotter(const std::string& matrix_file, double time, const std::vector<long>& j_list,
                const std::string& out) {
  const TransitionMatrix t = load_matrix(matrix_file);
  const Spectrum s = eigendecompose(t);
  double constant = 2.0;
  try {
    const Json golden = load_golden("reference_values.json");
    const Json& constants = golden.at("trotter_bound_constants");
    const std::string family = family_name(t.spec.family);
    constant = constants.contains(family) ? constants.at(family).get<double>()
                                          : constants.at("default").get<double>();
  } catch (const invalid_input&) {
    std::fprintf(stderr, "note: no golden bound constants, using %s\n",
                 format_double(constant).c_str());
  }
  const std::vector<TrotterErrorRow> rows = trotter_error_sweep(t, s, time, j_list, constant);
  std::vector<std::vector<std::string>> csv_rows;
  bool ok = true;
  for (const TrotterErrorRow& row : rows) {
    ok = ok && row.error_2norm <= row.bound + 1e-12;
    csv_rows.push_back({std::to_string(row.j), csv_cell(row.error_2norm), csv_cell(row.bound)});
  }
  write_csv(out, {"j", "error_2norm", "bound"}, csv_rows);
  std::printf("wrote %s: %zu step counts, bound constant %s%s\n", out.c_str(), rows.size(),
              format_double(constant).c_str(), ok ? "" : " (BOUND EXCEEDED)");
  return ok ? exit_ok : exit_assertion_failed;
}

// ---- report -------------------------------------------------------------

int cmd_report(const std::vector<std::string>& inputs, const std::string& out) {
  struct Row {
    std::optional<double> delta, alpha, tau_prime_mix, t_horizon, tv_exact;
    std::optional<long> tau_mix, t_prime;
  };
  std::map<std::string, Row> rows;
  for (const std::string& input : inputs) {
    const Json j = load_json_file(input);
    const std::string type = j.value("type", "");
    const std::string graph = j.value("graph", "?");
    Row& row = rows[graph];
    if (type == "analyze") {
      row.delta = j.at("delta").get<double>();
      if (j.contains("tau_mix")) row.tau_mix = j.at("tau_mix").get<long>();
    } else if (type == "qmix") {
      row.alpha = j.at("alpha").get<double>();
      row.tau_prime_mix = j.at("tau_prime_mix").get<double>();
    } else if (type == "sample") {
      row.alpha = j.at("alpha").get<double>();
      row.t_horizon = j.at("T").get<double>();
      row.t_prime = j.at("T_prime").get<long>();
      row.tv_exact = j.at("tv_to_uniform_exact").get<double>();
    } else {
      throw invalid_input(input + ": unknown report input type '" + type + "'");
    }
  }
  auto cell = [](const auto& opt) -> std::string {
    if (!opt) return "-";
    if constexpr (std::is_same_v<std::decay_t<decltype(*opt)>, double>)
      return format_double(*opt);
    else
      return std::to_string(*opt);
  };
  std::string md = "| graph | delta | tau_mix | tau'_mix | alpha | T' | T*T' | tv_exact |\n";
  md += "|---|---|---|---|---|---|---|---|\n";
  std::vector<std::vector<std::string>> csv_rows;
  for (const auto& [graph, row] : rows) {
    std::string quantum_cost = "-";
    if (row.t_horizon && row.t_prime)
      quantum_cost = format_double(*row.t_horizon * static_cast<double>(*row.t_prime));
    md += "| " + graph + " | " + cell(row.delta) + " | " + cell(row.tau_mix) + " | " +
          cell(row.tau_prime_mix) + " | " + cell(row.alpha) + " | " + cell(row.t_prime) + " | " +
          quantum_cost + " | " + cell(row.tv_exact) + " |\n";
    csv_rows.push_back({graph, cell(row.delta), cell(row.tau_mix), cell(row.tau_prime_mix),
                        cell(row.alpha), cell(row.t_prime), quantum_cost, cell(row.tv_exact)});
  }
  write_text_file(out, md);
  std::filesystem::path csv_path(out);
  csv_path.replace_extension(".csv");
  write_csv(csv_path, {"graph", "delta", "tau_mix", "tau_prime_mix", "alpha", "T_prime",
                       "T_times_T_prime", "tv_exact"},
            csv_rows);
  std::printf("wrote %s and %s (%zu graphs)\n", out.c_str(), csv_path.c_str(), rows.size());
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum-walk sampling and Markov mixing experiments"};
  app.require_subcommand(1);

  double tol_eigen = tolerances().eigen_residual;
  double tol_class = tolerances().class_rel;
  app.add_option("--tol-eigen", tol_eigen, "eigendecomposition residual tolerance");
  app.add_option("--tol-class", tol_class, "relative eigenvalue class tolerance");

  std::string family, params_text, adjacency_file, matrix_file, out, mode = "double";
  std::string profile_csv, trace_csv, suite = "all";
  bool lazify = false;
  double eps = 0.01, horizon = 1.0, time = 1.0;
  std::uint64_t seed = 0;
  long trials = 10000;
  int threads = 1;
  std::vector<double> eps_list = {0.1, 0.01, 0.001};
  std::vector<long> j_list = {4, 8, 16, 32};
  std::vector<std::string> inputs;

  CLI::App* generate = app.add_subcommand("generate", "build a transition matrix file");
  generate->fallthrough();
  generate->add_option("--family", family, "cycle|torus|hypercube|complete|custom")->required();
  generate->add_option("--params", params_text, "comma list, e.g. p=5,d=2");
  generate->add_option("--adjacency", adjacency_file, "custom adjacency JSON");
  generate->add_flag("--lazy", lazify, "use (I+P)/2");
  generate->add_option("--out", out, "output matrix JSON")->required();

  CLI::App* analyze = app.add_subcommand("analyze", "classical mixing analysis");
  analyze->fallthrough();
  analyze->add_option("--matrix", matrix_file)->required();
  analyze->add_option("--eps", eps_list, "thresholds (default 0.1,0.01,0.001)")->delimiter(',');
  analyze->add_option("--out", out, "output report JSON")->required();
  analyze->add_option("--profile-csv", profile_csv, "per-step distance table");

  CLI::App* cesaro = app.add_subcommand("cesaro", "finite-time averaged walk snapshot");
  cesaro->fallthrough();
  cesaro->add_option("--matrix", matrix_file)->required();
  cesaro->add_option("--T,--t", horizon, "averaging horizon T")->required();
  cesaro->add_option("--out", out)->required();

  CLI::App* pi = app.add_subcommand("pi", "limiting average and its entry floor");
  pi->fallthrough();
  pi->add_option("--matrix", matrix_file)->required();
  pi->add_option("--out", out, "optional snapshot JSON");

  CLI::App* qmix = app.add_subcommand("qmix", "quantum mixing time search");
  qmix->fallthrough();
  qmix->add_option("--matrix", matrix_file)->required();
  qmix->add_option("--eps", eps, "threshold (default 0.01)");
  qmix->add_option("--out", out, "optional report JSON");

  CLI::App* sample = app.add_subcommand("sample", "run the sampling loops");
  sample->fallthrough();
  sample->add_option("--matrix", matrix_file)->required();
  sample->add_option("--eps", eps, "output accuracy (default 0.01)");
  sample->add_option("--seed", seed, "RNG seed (default 0)");
  sample->add_option("--trials", trials, "Monte Carlo trials (default 10000)");
  sample->add_option("--threads", threads, "worker threads (default 1)");
  sample->add_option("--mode", mode, "single|double|exact (default double)")
      ->check(CLI::IsMember({"single", "double", "exact"}));
  sample->add_option("--out", out, "summary JSON");
  sample->add_option("--trace-csv", trace_csv, "per-trial trace table");

  CLI::App* conjecture = app.add_subcommand("conjecture", "verification suites");
  conjecture->fallthrough();
  conjecture->add_option("--suite", suite, "torus|hypercube|complete|all (default all)")
      ->check(CLI::IsMember({"torus", "hypercube", "complete", "all"}));
  conjecture->add_option("--out", out)->required();

  CLI::App* trotter = app.add_subcommand("trotter", "product-formula error sweep");
  trotter->fallthrough();
  trotter->add_option("--matrix", matrix_file)->required();
  trotter->add_option("--t", time, "evolution time (default 1)");
  trotter->add_option("--j", j_list, "step counts (default 4,8,16,32)")->delimiter(',');
  trotter->add_option("--out", out)->required();

  CLI::App* report = app.add_subcommand("report", "aggregate prior outputs into one table");
  report->fallthrough();
  report->add_option("--inputs", inputs, "analyze/qmix/sample JSON files")
      ->required()
      ->delimiter(',');
  report->add_option("--out", out, "Markdown output (CSV twin written alongside)")->required();

  CLI11_PARSE(app, argc, argv);

  tolerances().eigen_residual = tol_eigen;
  tolerances().class_rel = tol_class;

  try {
    if (*generate) return cmd_generate(family, params_text, adjacency_file, lazify, out);
    if (*analyze) return cmd_analyze(matrix_file, eps_list, out, profile_csv);
    if (*cesaro) return cmd_cesaro(matrix_file, horizon, out);
    if (*pi) return cmd_pi(matrix_file, out);
    if (*qmix) return cmd_qmix(matrix_file, eps, out);
    if (*sample)
      return cmd_sample(matrix_file, eps, seed, trials, threads, mode, out, trace_csv);
    if (*conjecture) return cmd_conjecture(suite, out);
    if (*trotter) return cmd_trotter(matrix_file, time, j_list, out);
    if (*report) return cmd_report(inputs, out);
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return exit_error;
  }
  return exit_error;
}
