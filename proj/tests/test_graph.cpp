#include "qwalk/graph.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

using namespace qwalk;

namespace {

std::vector<GraphSpec> family_zoo() {
  return {GraphSpec::cycle(9),        GraphSpec::cycle(4),
          GraphSpec::torus(5, 2),     GraphSpec::torus(4, 2),
          GraphSpec::torus(2, 3),     GraphSpec::hypercube(4),
          GraphSpec::complete(8, true), GraphSpec::complete(8, false)};
}

}  // namespace

TEST_CASE("factories reject bad parameters", "[graph]") {
  CHECK_THROWS_AS(GraphSpec::cycle(2), invalid_input);
  CHECK_THROWS_AS(GraphSpec::torus(1, 2), invalid_input);
  CHECK_THROWS_AS(GraphSpec::torus(5, 0), invalid_input);
  CHECK_THROWS_AS(GraphSpec::hypercube(0), invalid_input);
  CHECK_THROWS_AS(GraphSpec::complete(1, false), invalid_input);
  CHECK_NOTHROW(GraphSpec::cycle(3));
}

TEST_CASE("every family builds a symmetric doubly stochastic matrix", "[graph]") {
  for (const GraphSpec& spec : family_zoo()) {
    INFO(spec.label());
    const TransitionMatrix t = build_transition(spec);
    CHECK(t.size() == spec.vertex_count());
    CHECK(is_symmetric(t.entries, 1e-12));
    CHECK(column_sum_error(t.entries) <= 1e-12);
    CHECK(t.entries.minCoeff() >= 0.0);
    CHECK(t.irreducible());
  }
}

TEST_CASE("cycle structure", "[graph]") {
  const TransitionMatrix t = build_transition(GraphSpec::cycle(9));
  CHECK(t.degree == 2);
  for (Index x = 0; x < 9; ++x) {
    CHECK(t.entries((x + 1) % 9, x) == 0.5);
    CHECK(t.entries((x + 8) % 9, x) == 0.5);
    CHECK(t.entries(x, x) == 0.0);
  }
}

TEST_CASE("torus coordinates round trip and neighbors step one coordinate", "[graph]") {
  const long p = 5, d = 3;
  for (long x : {0L, 7L, 31L, 124L}) {
    CHECK(torus_index(torus_coords(x, p, d), p) == x);
  }
  const TransitionMatrix t = build_transition(GraphSpec::torus(5, 2));
  CHECK(t.degree == 4);
  // Vertex 7 = (2, 1): neighbors (1,1), (3,1), (2,0), (2,2).
  const std::vector<long> expected = {6, 8, 2, 12};
  for (long y : expected) CHECK(t.entries(y, 7) == 0.25);
  CHECK(t.entries.col(7).sum() == 1.0);
}

TEST_CASE("torus with side 2 equals the hypercube", "[graph]") {
  const TransitionMatrix torus = build_transition(GraphSpec::torus(2, 3));
  const TransitionMatrix cube = build_transition(GraphSpec::hypercube(3));
  CHECK(max_abs(torus.entries - cube.entries) == 0.0);
  CHECK(torus.degree == 3);
}

TEST_CASE("hypercube neighbors are single bit flips", "[graph]") {
  const TransitionMatrix t = build_transition(GraphSpec::hypercube(4));
  CHECK(t.degree == 4);
  for (Index x = 0; x < t.size(); ++x)
    for (Index y = 0; y < t.size(); ++y) {
      const int differing = __builtin_popcountll(static_cast<unsigned long long>(x ^ y));
      CHECK(t.entries(y, x) == (differing == 1 ? 0.25 : 0.0));
    }
}

TEST_CASE("complete graph variants", "[graph]") {
  const TransitionMatrix loops = build_transition(GraphSpec::complete(8, true));
  CHECK(loops.entries.minCoeff() == 0.125);
  CHECK(loops.entries.maxCoeff() == 0.125);
  const TransitionMatrix simple = build_transition(GraphSpec::complete(8, false));
  CHECK(simple.entries(0, 0) == 0.0);
  CHECK(simple.entries(1, 0) == Catch::Approx(1.0 / 7.0).epsilon(1e-14));
}

TEST_CASE("custom adjacency normalizes weight-regular graphs", "[graph]") {
  Matrix a(3, 3);
  a << 0, 2, 1,
       2, 0, 1,
       1, 1, 1;
  const TransitionMatrix t = build_transition(GraphSpec::custom(a));
  CHECK(max_abs(t.entries - a / 3.0) <= 1e-15);
  CHECK(t.degree == 0);  // weighted adjacency has no unweighted degree

  Matrix zero_one(4, 4);
  zero_one << 0, 1, 0, 1,
              1, 0, 1, 0,
              0, 1, 0, 1,
              1, 0, 1, 0;
  CHECK(build_transition(GraphSpec::custom(zero_one)).degree == 2);
}

TEST_CASE("custom adjacency rejections name the violated requirement", "[graph]") {
  Matrix unequal(3, 3);
  unequal << 0, 1, 0,
             1, 0, 1,
             0, 1, 0;
  CHECK_THROWS_WITH(build_transition(GraphSpec::custom(unequal)),
                    Catch::Matchers::ContainsSubstring("row sums"));

  Matrix asym = Matrix::Zero(3, 3);
  asym(0, 1) = 1.0;
  CHECK_THROWS_WITH(build_transition(GraphSpec::custom(asym)),
                    Catch::Matchers::ContainsSubstring("symmetric"));

  Matrix negative(2, 2);
  negative << 0.5, -0.5,
              -0.5, 0.5;
  CHECK_THROWS_WITH(build_transition(GraphSpec::custom(negative)),
                    Catch::Matchers::ContainsSubstring("negative"));

  Matrix disconnected = Matrix::Identity(4, 4);
  CHECK_THROWS_WITH(build_transition(GraphSpec::custom(disconnected)),
                    Catch::Matchers::ContainsSubstring("disconnected"));
}

TEST_CASE("laziness halves the walk and restores aperiodicity", "[graph]") {
  const TransitionMatrix plain = build_transition(GraphSpec::cycle(4));
  CHECK_FALSE(plain.aperiodic());  // even cycle is bipartite
  CHECK_FALSE(plain.ergodic());
  const TransitionMatrix slow = lazy(plain);
  CHECK(slow.lazified);
  CHECK(slow.aperiodic());
  CHECK(slow.ergodic());
  CHECK(slow.entries(0, 0) == 0.5);
  CHECK(slow.entries(1, 0) == 0.25);
  CHECK(max_abs(2.0 * slow.entries - Matrix::Identity(4, 4) - plain.entries) == 0.0);

  CHECK(build_transition(GraphSpec::cycle(9)).aperiodic());  // odd cycle already is
}

TEST_CASE("diameters", "[graph]") {
  CHECK(graph_diameter(build_transition(GraphSpec::cycle(9)).entries) == 4);
  CHECK(graph_diameter(build_transition(GraphSpec::cycle(8)).entries) == 4);
  CHECK(graph_diameter(build_transition(GraphSpec::hypercube(4)).entries) == 4);
  CHECK(graph_diameter(build_transition(GraphSpec::torus(5, 2)).entries) == 4);
  CHECK(graph_diameter(build_transition(GraphSpec::complete(8, true)).entries) == 1);
}

TEST_CASE("transition validation catches broken matrices", "[graph]") {
  Matrix close = build_transition(GraphSpec::cycle(5)).entries;
  close(2, 1) += 1e-6;
  CHECK_THROWS_AS(validate_transition(close), invalid_input);
}
