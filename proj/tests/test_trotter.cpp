#include "qwalk/trotter.hpp"

#include "oracles.hpp"
#include "qwalk/io.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

using namespace qwalk;

TEST_CASE("matching decomposition shapes per family", "[trotter]") {
  const HamiltonianParts even_cycle = edge_color_decompose(build_transition(GraphSpec::cycle(4)));
  CHECK(even_cycle.count() == 2);
  CHECK(even_cycle.part_edges[0].size() == 2);
  CHECK(even_cycle.part_edges[1].size() == 2);

  const HamiltonianParts odd_cycle = edge_color_decompose(build_transition(GraphSpec::cycle(5)));
  CHECK(odd_cycle.count() == 3);
  CHECK(odd_cycle.part_edges[2].size() == 1);  // wrap-around edge

  const HamiltonianParts cube = edge_color_decompose(build_transition(GraphSpec::hypercube(3)));
  CHECK(cube.count() == 3);
  for (std::size_t c = 0; c < cube.count(); ++c) {
    CHECK(cube.part_edges[c].size() == 4);
    CHECK(cube.part_direction[c] == static_cast<long>(c));
    for (const WalkEdge& e : cube.part_edges[c]) CHECK(e.weight == Catch::Approx(1.0 / 3.0));
  }

  const HamiltonianParts torus52 = edge_color_decompose(build_transition(GraphSpec::torus(5, 2)));
  CHECK(torus52.count() == 6);
  CHECK(torus52.part_direction == std::vector<long>{0, 0, 0, 1, 1, 1});

  const HamiltonianParts torus42 = edge_color_decompose(build_transition(GraphSpec::torus(4, 2)));
  CHECK(torus42.count() == 4);
  CHECK(torus42.part_direction == std::vector<long>{0, 0, 1, 1});

  const HamiltonianParts torus22 = edge_color_decompose(build_transition(GraphSpec::torus(2, 2)));
  CHECK(torus22.count() == 2);
  for (const auto& edges : torus22.part_edges)
    for (const WalkEdge& e : edges) CHECK(e.weight == Catch::Approx(0.5));
}

TEST_CASE("parts reassemble the transition matrix and are matchings", "[trotter]") {
  for (const GraphSpec& spec : {GraphSpec::cycle(4), GraphSpec::cycle(9), GraphSpec::torus(5, 2),
                                GraphSpec::torus(4, 2), GraphSpec::hypercube(4)}) {
    INFO(spec.label());
    const TransitionMatrix t = build_transition(spec);
    const HamiltonianParts parts = edge_color_decompose(t);
    CHECK(max_abs(parts.reassembled() - t.entries) <= 1e-12);
    for (std::size_t c = 0; c < parts.count(); ++c) {
      std::vector<int> touched(static_cast<std::size_t>(parts.n), 0);
      for (const WalkEdge& e : parts.part_edges[c]) {
        ++touched[static_cast<std::size_t>(e.a)];
        ++touched[static_cast<std::size_t>(e.b)];
      }
      for (int count : touched) CHECK(count <= 1);
    }
  }
}

TEST_CASE("decomposition rejects unsupported inputs", "[trotter]") {
  CHECK_THROWS_WITH(edge_color_decompose(lazy(build_transition(GraphSpec::cycle(5)))),
                    Catch::Matchers::ContainsSubstring("lazy"));
  CHECK_THROWS_AS(edge_color_decompose(build_transition(GraphSpec::complete(5, false))),
                  invalid_input);
  Matrix flip(2, 2);
  flip << 0.0, 1.0, 1.0, 0.0;
  CHECK_THROWS_AS(edge_color_decompose(build_transition(GraphSpec::custom(flip))), invalid_input);
}

TEST_CASE("matching exponential agrees with the series exponential", "[trotter]") {
  const std::vector<WalkEdge> edges = {{0, 1, 0.5}, {2, 3, 0.25}};
  Matrix h = Matrix::Zero(5, 5);
  h(0, 1) = h(1, 0) = 0.5;
  h(2, 3) = h(3, 2) = 0.25;
  for (double s : {0.3, 1.7, 4.0}) {
    const ComplexMatrix fast = matching_exponential(edges, 5, s);
    CHECK((fast - oracle::expm_series(h, s)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((fast.adjoint() * fast - ComplexMatrix::Identity(5, 5)).cwiseAbs().maxCoeff() <= 1e-13);
  }
  CHECK((matching_exponential(edges, 5, 0.0) - ComplexMatrix::Identity(5, 5))
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("even four-cycle parts commute exactly", "[trotter]") {
  const TransitionMatrix t = build_transition(GraphSpec::cycle(4));
  const HamiltonianParts parts = edge_color_decompose(t);
  const CommutatorReport comm = commutator_report(parts);
  CHECK(comm.max_norm <= 1e-14);
  const Spectrum s = eigendecompose(t);
  const ComplexMatrix exact = propagator(s, 2.0);
  CHECK((lie_product(parts, 2.0, 1) - exact).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("hypercube parts commute so one step is exact", "[trotter]") {
  const TransitionMatrix t = build_transition(GraphSpec::hypercube(3));
  const HamiltonianParts parts = edge_color_decompose(t);
  CHECK(commutator_report(parts).max_norm <= 1e-14);
  const Spectrum s = eigendecompose(t);
  for (double time : {1.0, 3.5}) {
    CHECK((lie_product(parts, time, 1) - propagator(s, time)).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("side-two torus parts commute across directions", "[trotter]") {
  const TransitionMatrix t = build_transition(GraphSpec::torus(2, 2));
  const HamiltonianParts parts = edge_color_decompose(t);
  CHECK(commutator_report(parts).max_norm <= 1e-14);
  const Spectrum s = eigendecompose(t);
  CHECK((lie_product(parts, 1.3, 2) - propagator(s, 1.3)).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("cross-direction commutators vanish on the torus", "[trotter]") {
  const HamiltonianParts parts = edge_color_decompose(build_transition(GraphSpec::torus(5, 2)));
  const CommutatorReport comm = commutator_report(parts);
  CHECK(comm.max_cross_direction <= 1e-12);
  CHECK(comm.max_norm > 1e-3);  // same-direction parts do not commute
  CHECK(comm.norms.rows() == 6);
  CHECK((comm.norms - Matrix(comm.norms.transpose())).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("odd cycle commutator norm matches the recorded value", "[trotter]") {
  const HamiltonianParts parts = edge_color_decompose(build_transition(GraphSpec::cycle(5)));
  const CommutatorReport comm = commutator_report(parts);
  const Json golden = load_golden("reference_values.json");
  CHECK(comm.max_norm ==
        Catch::Approx(golden.at("cycle5_commutator_max").get<double>()).margin(1e-12));
}

TEST_CASE("single part walks are reproduced exactly for any step count", "[trotter]") {
  const TransitionMatrix t = build_transition(GraphSpec::torus(2, 1));
  const HamiltonianParts parts = edge_color_decompose(t);
  REQUIRE(parts.count() == 1);
  const Spectrum s = eigendecompose(t);
  for (long j : {1L, 3L, 8L})
    CHECK((lie_product(parts, 2.2, j) - propagator(s, 2.2)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("lie product validates the step count", "[trotter]") {
  const HamiltonianParts parts = edge_color_decompose(build_transition(GraphSpec::cycle(5)));
  CHECK_THROWS_AS(lie_product(parts, 1.0, 0), invalid_input);
}

TEST_CASE("error sweep halves with the step count and stays under the bound", "[trotter]") {
  const TransitionMatrix t = build_transition(GraphSpec::torus(5, 2));
  const Spectrum s = eigendecompose(t);
  const Json golden = load_golden("reference_values.json");
  const double constant = golden.at("trotter_bound_constants").at("torus").get<double>();
  const std::vector<TrotterErrorRow> rows = trotter_error_sweep(t, s, 1.0, {4, 8, 16, 32}, constant);
  REQUIRE(rows.size() == 4);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    INFO("j = " << rows[i].j);
    CHECK(rows[i].error_2norm > 0.0);
    CHECK(rows[i].error_2norm <= rows[i].bound);
    CHECK(rows[i].error_max <= rows[i].error_2norm + 1e-15);
    if (i > 0) {
      const double ratio = rows[i - 1].error_2norm / rows[i].error_2norm;
      CHECK(ratio >= 1.5);
      CHECK(ratio <= 2.5);
    }
  }
}

TEST_CASE("error sweep on the odd cycle converges to the propagator", "[trotter]") {
  const TransitionMatrix t = build_transition(GraphSpec::cycle(5));
  const Spectrum s = eigendecompose(t);
  const Json golden = load_golden("reference_values.json");
  const double constant = golden.at("trotter_bound_constants").at("cycle").get<double>();
  const std::vector<TrotterErrorRow> rows =
      trotter_error_sweep(t, s, 1.0, {8, 256}, constant);
  CHECK(rows[0].error_2norm <= rows[0].bound);
  CHECK(rows[1].error_2norm <= rows[1].bound);
  CHECK(rows[1].error_2norm <= 1e-3);
  CHECK(rows[1].error_2norm <= rows[0].error_2norm / 16.0);
}
