#include <doctest.h>

#include <cmath>
#include <random>

#include "cat5/metric.hpp"
#include "oracles.hpp"

using namespace cat5;

namespace {

FiniteMetricSpace tripod4() {
  return validate_metric({{0, 1, 1, 1}, {1, 0, 2, 2}, {1, 2, 0, 2}, {1, 2, 2, 0}});
}

// p=0, q=1, x=2, y=3: four unit sides, d(x,y) = 2, d(p,q) = 1.
FiniteMetricSpace failing_quadruple() {
  return validate_metric({{0, 1, 1, 1}, {1, 0, 1, 1}, {1, 1, 0, 2}, {1, 1, 2, 0}});
}

}  // namespace

TEST_CASE("validate_metric accepts the two-point space") {
  const auto s = validate_metric({{0, 1}, {1, 0}});
  CHECK(s.size() == 2);
  CHECK(s(0, 1) == 1.0);
}

TEST_CASE("validate_metric reports the violated triple") {
  try {
    validate_metric({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}});
    FAIL("expected TriangleViolation");
  } catch (const TriangleViolationError& e) {
    CHECK(e.i() == 0);
    CHECK(e.j() == 1);
    CHECK(e.k() == 2);
  }
}

TEST_CASE("validate_metric accepts the tripod; triangle inequalities by enumeration") {
  const std::vector<std::vector<double>> d{{0, 1, 1, 1}, {1, 0, 2, 2}, {1, 2, 0, 2}, {1, 2, 2, 0}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) CHECK(d[i][k] <= d[i][j] + d[j][k]);
  CHECK(validate_metric(d).size() == 4);
}

TEST_CASE("validate_metric rejects without repairing") {
  CHECK(oracle::error_of([] { validate_metric({{0, 1}, {2, 0}}); }) == ErrorCode::Asymmetric);
  CHECK(oracle::error_of([] { validate_metric({{1, 1}, {1, 0}}); }) == ErrorCode::NonzeroDiagonal);
  CHECK(oracle::error_of([] { validate_metric({{0, 0}, {0, 0}}); }) == ErrorCode::ZeroOffDiagonal);
  CHECK(oracle::error_of([] { validate_metric({{0, -1}, {-1, 0}}); }) == ErrorCode::NegativeDistance);
  CHECK(oracle::error_of([] { validate_metric({{0, NAN}, {NAN, 0}}); }) == ErrorCode::NonFinite);
  CHECK(oracle::error_of([] { validate_metric(std::vector<std::vector<double>>{{0, 1}, {1}}); }) ==
        ErrorCode::NotSquare);
}

TEST_CASE("model_triangle degenerate case puts c on the negative axis") {
  // |ab| = 1, |ac| = 1, |bc| = 2 forces c = (-1, 0).
  const auto t = model_triangle(1, 1, 2);
  CHECK(t.a.x == 0.0);
  CHECK(t.a.y == 0.0);
  CHECK(t.b.x == doctest::Approx(1.0));
  CHECK(t.c.x == doctest::Approx(-1.0));
  CHECK(t.c.y == doctest::Approx(0.0));
}

TEST_CASE("model_triangle right isosceles") {
  // |ac| = 1 and |bc| = sqrt 2 with b = (1, 0): law of cosines gives c = (0, 1).
  const auto t = model_triangle(1, 1, std::sqrt(2.0));
  CHECK(t.c.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(t.c.y == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("model_triangle (3,4,6) recomputed distances") {
  const auto t = model_triangle(3, 4, 6);
  CHECK(std::abs(distance(t.a, t.b) - 3) <= 1e-12 * 3);
  CHECK(std::abs(distance(t.a, t.c) - 4) <= 1e-12 * 4);
  CHECK(std::abs(distance(t.b, t.c) - 6) <= 1e-12 * 6);
  CHECK(t.c.y >= 0.0);
}

TEST_CASE("model_triangle reproduces random admissible triples") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.01, 10.0);
  int checked = 0;
  while (checked < 2000) {
    const double ab = u(rng), ac = u(rng), bc = u(rng);
    if (ab > ac + bc || ac > ab + bc || bc > ab + ac) continue;
    const auto t = model_triangle(ab, ac, bc);
    REQUIRE(std::abs(distance(t.a, t.b) - ab) <= 1e-12 * ab);
    REQUIRE(std::abs(distance(t.a, t.c) - ac) <= 1e-12 * std::max(ac, ab));
    REQUIRE(std::abs(distance(t.b, t.c) - bc) <= 1e-12 * std::max(bc, ab));
    REQUIRE(t.c.y >= 0.0);
    ++checked;
  }
  CHECK(oracle::error_of([] { model_triangle(1, 1, 3); }) == ErrorCode::NotRealizable);
}

TEST_CASE("quad_comparison: unit square in cyclic order p,x,q,y has zero slack") {
  const double r2 = std::sqrt(2.0);
  // p=0, x=1, q=2, y=3 around the square.
  const auto s = validate_metric({{0, 1, r2, 1}, {1, 0, 1, r2}, {r2, 1, 0, 1}, {1, r2, 1, 0}});
  const auto r = quad_comparison(s, 0, 2, 1, 3);
  CHECK(r.holds);
  CHECK(r.slack == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("quad_comparison: failing quadruple has slack -1") {
  const auto r = quad_comparison(failing_quadruple(), 0, 1, 2, 3);
  CHECK_FALSE(r.holds);
  CHECK(r.slack == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("quad_comparison holds on planar Euclidean quadruples") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 300; ++t) {
    const auto s = validate_metric(oracle::euclidean_distances(oracle::random_points(rng, 4, 2)));
    for (const auto& l : pair_splits(0, 1, 2, 3)) REQUIRE(quad_comparison(s, l.p, l.q, l.x, l.y).holds);
  }
}

TEST_CASE("quad_comparison is symmetric in p<->q and x<->y") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  int checked = 0;
  while (checked < 300) {
    std::vector<std::vector<double>> d(4, std::vector<double>(4, 0.0));
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) d[i][j] = d[j][i] = u(rng);
    std::optional<FiniteMetricSpace> s;
    try {
      s = validate_metric(d);
    } catch (const Error&) {
      continue;
    }
    const double a = quad_comparison(*s, 0, 1, 2, 3).slack;
    CHECK(quad_comparison(*s, 1, 0, 2, 3).slack == doctest::Approx(a).epsilon(1e-12));
    CHECK(quad_comparison(*s, 0, 1, 3, 2).slack == doctest::Approx(a).epsilon(1e-12));
    CHECK(quad_comparison(*s, 1, 0, 3, 2).slack == doctest::Approx(a).epsilon(1e-12));
    ++checked;
  }
}

TEST_CASE("quad_comparison agrees with a brute-force minimum over the glued segment") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(0.3, 1.7);
  int checked = 0;
  while (checked < 100) {
    std::vector<std::vector<double>> d(4, std::vector<double>(4, 0.0));
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) d[i][j] = d[j][i] = u(rng);
    std::optional<FiniteMetricSpace> s;
    try {
      s = validate_metric(d);
    } catch (const Error&) {
      continue;
    }
    for (const auto& l : pair_splits(0, 1, 2, 3)) {
      const double brute = oracle::brute_force_slack(d[l.p][l.q], d[l.p][l.x], d[l.p][l.y],
                                                     d[l.q][l.x], d[l.q][l.y], d[l.x][l.y]);
      CHECK(quad_comparison(*s, l.p, l.q, l.x, l.y).slack == doctest::Approx(brute).epsilon(1e-6).scale(1.0));
    }
    ++checked;
  }
}

TEST_CASE("quad_comparison rejects repeated indices") {
  CHECK(oracle::error_of([] { quad_comparison(tripod4(), 0, 0, 1, 2); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("cat0_comparison_all") {
  SUBCASE("four points: three labelings") {
    const auto r = cat0_comparison_all(tripod4());
    CHECK(r.labelings_checked == 3);
    CHECK(r.holds);
  }
  SUBCASE("five points on a tree") {
    // Center 0, leaves 1..3 at distance 1, point 4 halfway along the first leg.
    const auto s = validate_metric({{0, 1, 1, 1, .5},
                                    {1, 0, 2, 2, .5},
                                    {1, 2, 0, 2, 1.5},
                                    {1, 2, 2, 0, 1.5},
                                    {.5, .5, 1.5, 1.5, 0}});
    const auto r = cat0_comparison_all(s);
    CHECK(r.holds);
    CHECK(r.labelings_checked == 15);
  }
  SUBCASE("failing quadruple plus one point yields its witness") {
    const auto s = validate_metric(
        {{0, 1, 1, 1, 1}, {1, 0, 1, 1, 1}, {1, 1, 0, 2, 1}, {1, 1, 2, 0, 1}, {1, 1, 1, 1, 0}});
    const auto r = cat0_comparison_all(s);
    REQUIRE_FALSE(r.holds);
    REQUIRE(r.witness);
    CHECK(r.worst_slack == doctest::Approx(-1.0));
    const auto w = *r.witness;
    const bool pq = (w.p == 0 && w.q == 1) || (w.p == 1 && w.q == 0);
    const bool xy = (w.x == 2 && w.y == 3) || (w.x == 3 && w.y == 2);
    CHECK(pq);
    CHECK(xy);
  }
  SUBCASE("Euclidean four-point spaces in R^k pass") {
    std::mt19937_64 rng(5);
    for (std::size_t k = 1; k <= 4; ++k)
      for (int t = 0; t < 100; ++t) {
        auto pts = oracle::random_points(rng, 4, k);
        REQUIRE(cat0_comparison_all(validate_metric(oracle::euclidean_distances(pts))).holds);
      }
  }
}
