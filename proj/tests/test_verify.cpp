#include <doctest.h>

#include <cmath>

#include "cat5/io.hpp"
#include "cat5/verify.hpp"
#include "oracles.hpp"

using namespace cat5;

namespace {

FiniteMetricSpace tripod_extension() {
  return io::parse_input(oracle::fixture("tripod_extension.json"));
}

SpacelikeComplex five_vertex_complex() {
  MinkowskiEmbedding e;
  e.coords = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 0}, {0.25, 0.25, 0.25, -0.1}};
  e.metric_signs = {1, 1, 1, -1};
  e.time_axis = 3;
  return build_complex(e, ConeOrientation{1});
}

}  // namespace

TEST_CASE("geodesic bounds in the Euclidean branch are the input distances") {
  const auto s = io::parse_input(oracle::fixture("euclidean_5.json"));
  const auto r = embed_five_points(s);
  const auto b = geodesic_upper_bounds(r.complex, 8);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) CHECK(b[i][j] == doctest::Approx(s(i, j)).epsilon(1e-12));
  const auto rep = check_distance_preservation(r);
  CHECK(rep.pass);
  CHECK(rep.max_edge_residual < 1e-9);
}

TEST_CASE("geodesic bound along an edge of the five-vertex complex is its length") {
  const auto cx = five_vertex_complex();
  for (int res : {1, 2, 4, 8}) CHECK(geodesic_upper_bounds(cx, res)[0][1] == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("sampled graph contains the vertices and only spacelike arcs") {
  const auto r = embed_five_points(tripod_extension());
  for (int res : {1, 3, 8}) {
    const auto g = build_sampled_graph(r.complex, res);
    CHECK(g.resolution == res);
    for (std::size_t v = 0; v < 5; ++v) {
      const auto& key = g.nodes.at(g.vertex_node[v]).key;
      CHECK(key[v] == res);
    }
    CHECK(g.min_arc_form >= -1e-9);
    const auto dist = shortest_paths_from(g, r.complex, g.vertex_node[0]);
    CHECK(dist[g.vertex_node[0]] == 0.0);
  }
}

TEST_CASE("tripod extension: refinement study") {
  const auto s = tripod_extension();
  const auto r = embed_five_points(s);
  DistanceTable prev{};
  bool first = true;
  for (int res : {4, 8, 16}) {
    const auto b = geodesic_upper_bounds(r.complex, res);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j) {
        CHECK(b[i][j] >= s(i, j) - 1e-9);
        if (!first) CHECK(b[i][j] <= prev[i][j] + 1e-12);
        if (res == 16) CHECK(b[i][j] <= s(i, j) * 1.02 + 1e-12);
      }
    prev = b;
    first = false;
  }
  CHECK(check_distance_preservation(r, 8).pass);
}

TEST_CASE("a corrupted edge length is pinpointed") {
  const auto s = tripod_extension();
  auto cx = embed_five_points(s).complex;
  cx.edge_lengths[1][3] += 1e-3;
  cx.edge_lengths[3][1] += 1e-3;
  const auto rep = check_distance_preservation(cx, s, 4);
  CHECK_FALSE(rep.pass);
  REQUIRE(rep.worst_edge);
  CHECK(rep.worst_edge->first == 1);
  CHECK(rep.worst_edge->second == 3);
  CHECK_FALSE(rep.failures.empty());
}

TEST_CASE("no sampled path undercuts the metric on tree inputs") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto s = random_metric("tree", 5, seed);
    const auto rep = check_distance_preservation(embed_five_points(s), 4);
    REQUIRE(rep.pass);
  }
}

TEST_CASE("random_metric") {
  SUBCASE("deterministic per seed") {
    for (const char* kind : {"euclidean_3", "tree", "perturbed_tree", "general"})
      CHECK(random_metric(kind, 6, 99).distances() == random_metric(kind, 6, 99).distances());
    CHECK_FALSE(random_metric("general", 5, 1).distances() == random_metric("general", 5, 2).distances());
  }
  SUBCASE("Euclidean and tree samples pass the comparison") {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      REQUIRE(cat0_comparison_all(random_metric("tree", 5, seed)).holds);
      if (seed < 200) REQUIRE(cat0_comparison_all(random_metric("euclidean_3", 5, seed)).holds);
    }
  }
  SUBCASE("tree samples are four-point-condition metrics") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const auto s = random_metric("tree", 5, seed);
      for (const auto& l : pair_splits(0, 1, 2, 3)) {
        const double a = s(l.p, l.q) + s(l.x, l.y);
        const double b = s(l.p, l.x) + s(l.q, l.y);
        const double c = s(l.p, l.y) + s(l.q, l.x);
        // The two largest of the three sums coincide.
        const double hi = std::max({a, b, c});
        const double mid = a + b + c - hi - std::min({a, b, c});
        REQUIRE(hi - mid <= 1e-9 * hi);
      }
    }
  }
  SUBCASE("perturbed tree samples are valid five-point spaces") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto s = random_metric("perturbed_tree", 5, seed);
      CHECK(s.size() == 5);
    }
  }
  SUBCASE("generator names") {
    CHECK(generator_name(parse_generator("euclidean_4")) == "euclidean_4");
    CHECK(parse_generator("euclidean_4").euclidean_dim == 4);
    CHECK(parse_generator("perturbed_tree").kind == MetricKind::PerturbedTree);
    CHECK(oracle::error_of([] { parse_generator("fractal"); }) == ErrorCode::InvalidArgument);
  }
  SUBCASE("rejection budget") {
    GeneratorOptions g;
    g.kind = MetricKind::General;
    g.rejection_budget = 1;
    CHECK(oracle::error_of([&] { random_metric(g, 16, 5); }) == ErrorCode::RejectionBudgetExceeded);
  }
}

TEST_CASE("Rng") {
  Rng a(5), b(5);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    REQUIRE(u == b.uniform());
    REQUIRE(a.below(7) < 7);
    b.below(7);
  }
  CHECK(sample_seed(1, 0) != sample_seed(1, 1));
  CHECK(sample_seed(1, 0) != sample_seed(2, 0));
}

TEST_CASE("hunt_counterexamples") {
  HuntConfig cfg;
  cfg.generator = parse_generator("general");
  cfg.seed = 12345;
  cfg.budget = 300;
  SUBCASE("empty budget gives an empty report") {
    cfg.budget = 0;
    const auto r = hunt_counterexamples(cfg);
    CHECK(r.evaluated == 0);
    CHECK(r.hits.empty());
    CHECK(r.near_misses.empty());
  }
  SUBCASE("report does not depend on the worker count") {
    const auto one = io::dump(io::to_json(hunt_counterexamples(cfg, 1)));
    const auto four = io::dump(io::to_json(hunt_counterexamples(cfg, 4)));
    CHECK(one == four);
    CHECK(one == io::dump(io::to_json(hunt_counterexamples(cfg, 1))));
  }
  SUBCASE("no space passing the comparison has two negative eigenvalues") {
    const auto r = hunt_counterexamples(cfg, 2);
    CHECK(r.evaluated == 300);
    CHECK(r.candidates > 0);
    CHECK(r.hits.empty());
    REQUIRE_FALSE(r.near_misses.empty());
    for (std::size_t k = 1; k < r.near_misses.size(); ++k)
      CHECK(r.near_misses[k - 1].margin <= r.near_misses[k].margin);
  }
  SUBCASE("tree samples: no infeasible C5 labeling") {
    cfg.generator = parse_generator("tree");
    cfg.predicate = HuntPredicate::C4PassesC5Infeasible;
    cfg.budget = 100;
    const auto r = hunt_counterexamples(cfg, 2);
    CHECK(r.candidates == 100);
    CHECK(r.hits.empty());
  }
  SUBCASE("six Euclidean points: no infeasible octahedron labeling") {
    cfg.generator = parse_generator("euclidean_3");
    cfg.points = 6;
    cfg.predicate = HuntPredicate::C4PassesO3Infeasible;
    cfg.budget = 20;
    const auto r = hunt_counterexamples(cfg, 2);
    CHECK(r.hits.empty());
  }
}
