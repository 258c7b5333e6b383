// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "cat5/io.hpp"
#include "cat5/verify.hpp"
#include "oracles.hpp"

using namespace cat5;

namespace {

int g_failed = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
  std::printf("%s criterion %d: %s [%s]\n", pass ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failed;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Spaces that passed the comparison in suites 1-3, for the invariant checks.
std::vector<FiniteMetricSpace> g_passing;
std::vector<EmbeddingResult> g_minkowski_runs;

void euclidean_round_trip() {
  int failures = 0, n = 0;
  double worst = 0.0;
  for (int dim : {3, 4})
    for (std::uint64_t seed = 0; seed < 500; ++seed, ++n) {
      const auto s = random_metric("euclidean_" + std::to_string(dim), 5, seed);
      try {
        const auto r = embed_five_points(s);
        g_passing.push_back(s);
        bool ok = r.complex.branch == Branch::EuclideanFullSimplex;
        for (std::size_t i = 0; i < 5; ++i)
          for (std::size_t j = i + 1; j < 5; ++j) {
            const double rel = std::abs(std::sqrt(r.embedding.squared_distance(i, j)) - s(i, j)) / s(i, j);
            const double edge = std::abs(r.complex.edge_lengths[i][j] - s(i, j)) / s(i, j);
            worst = std::max({worst, rel, edge});
            ok = ok && rel <= 1e-9 && edge <= 1e-9;
          }
        failures += !ok;
      } catch (const Error&) {
        ++failures;
      }
    }
  report(1, failures == 0, "Euclidean round trip",
         fmt("%d samples, %d failures, worst relative residual %.2e", n, failures, worst));
}

void tree_pipeline() {
  int comparison_failures = 0, embed_failures = 0, residual_failures = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto s = random_metric("tree", 5, seed);
    if (!cat0_comparison_all(s).holds) {
      ++comparison_failures;
      continue;
    }
    g_passing.push_back(s);
    try {
      auto r = embed_five_points(s);
      worst = std::max(worst, r.max_edge_residual);
      residual_failures += !(r.max_edge_residual < 1e-8);
      if (r.complex.branch == Branch::MinkowskiLowerBoundary) g_minkowski_runs.push_back(std::move(r));
    } catch (const Error&) {
      ++embed_failures;
    }
  }
  const auto fixture = embed_five_points(io::parse_input(oracle::fixture("tripod_extension.json")));
  const bool fixture_ok = fixture.complex.branch == Branch::MinkowskiLowerBoundary &&
                          fixture.spectrum.signature.n_neg == 1;
  g_minkowski_runs.push_back(fixture);
  report(2, comparison_failures + embed_failures + residual_failures == 0 && fixture_ok,
         "tree-metric pipeline",
         fmt("1000 samples: %d comparison failures, %d embed failures, %d residuals >= 1e-8, worst "
             "%.2e; fixture %s with %d negative eigenvalue(s)",
             comparison_failures, embed_failures, residual_failures, worst,
             std::string(to_string(fixture.complex.branch)).c_str(), fixture.spectrum.signature.n_neg));
}

void corollary_invariant() {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto s = random_metric("perturbed_tree", 5, seed);
    if (!cat0_comparison_all(s).holds) continue;
    g_passing.push_back(s);
    try {
      auto r = embed_five_points(s);
      if (r.complex.branch == Branch::MinkowskiLowerBoundary) g_minkowski_runs.push_back(std::move(r));
    } catch (const Error&) {
    }
  }
  int neg_violations = 0, a0_violations = 0, minkowski = 0;
  for (const auto& s : g_passing) {
    const auto form = associated_form(s);
    const auto sp = eigendecompose(form);
    if (sp.signature.n_neg > 1) {
      ++neg_violations;
      continue;
    }
    if (sp.signature.n_neg == 0) continue;
    ++minkowski;
    const auto emb = minkowski_embedding(sp, form);
    std::vector<double> axis(emb.ambient_dim(), 0.0);
    axis[*emb.time_axis] = 1.0;
    try {
      a0_violations += classify(project_along(emb, axis)).side == Side::A_zero;
    } catch (const Error&) {
      ++a0_violations;  // degenerate projection also breaks the invariant
    }
  }
  report(3, neg_violations == 0 && a0_violations == 0, "at most one negative direction, never A_0",
         fmt("%zu comparison-passing spaces (%d Minkowski): %d with n_neg >= 2, %d projecting to A_0",
             g_passing.size(), minkowski, neg_violations, a0_violations));
}

void strata_combinatorics() {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g(0.0, 1.0);
  int samples = 0, count_violations = 0, structural_mismatch = 0;
  while (samples < 10000) {
    std::array<Vec3, 5> pts;
    for (auto& p : pts) p = {g(rng), g(rng), g(rng)};
    std::optional<Array5R3> arr;
    try {
      arr.emplace(pts);
    } catch (const Error&) {
      continue;
    }
    ++samples;
    const auto p = classify(*arr);
    count_violations += !(p.n_plus + p.n_zero + p.n_minus == 5 && p.n_plus >= 1 && p.n_minus >= 1 &&
                          p.n_zero <= 1 && std::abs(p.m) <= 3);
    structural_mismatch += !structural_check(*arr, p);
  }
  int fixtures_ok = 0;
  const struct {
    const char* file;
    int plus, zero, minus;
  } fixtures[] = {{"stratum_1_0_4.json", 1, 0, 4}, {"stratum_1_1_3.json", 1, 1, 3}, {"stratum_2_1_2.json", 2, 1, 2}};
  for (const auto& f : fixtures) {
    const auto arr = io::array_from_json(io::json::parse(io::read_file(oracle::fixture(f.file))));
    const auto p = classify(arr);
    fixtures_ok += p.n_plus == f.plus && p.n_zero == f.zero && p.n_minus == f.minus;
  }
  report(4, count_violations == 0 && structural_mismatch == 0 && fixtures_ok == 3, "strata combinatorics",
         fmt("%d arrays: %d counting violations, %d structural mismatches; %d/3 fixture triples", samples,
             count_violations, structural_mismatch, fixtures_ok));
}

// Per-direction test: from the facet barycenter, does a small step against a
// future-cone direction leave the simplex? Barycentric coordinates are affine
// in the step, so the step is scaled to move none of them by more than 1/8.
bool leaves_simplex(const MinkowskiEmbedding& emb, Simplex facet, const std::vector<double>& v) {
  std::vector<double> p(emb.ambient_dim(), 0.0);
  for (auto i : facet.vertices())
    for (std::size_t k = 0; k < p.size(); ++k) p[k] += emb.coords[i][k] / 4.0;
  std::vector<double> q = p;
  for (std::size_t k = 0; k < p.size(); ++k) q[k] -= v[k];
  const auto at_p = oracle::barycentric(emb.coords, p);
  const auto at_q = oracle::barycentric(emb.coords, q);
  double rate = 0.0;
  for (std::size_t k = 0; k < 5; ++k) rate = std::max(rate, std::abs(at_q[k] - at_p[k]));
  const double eps = 0.125 / rate;
  for (std::size_t k = 0; k < 5; ++k)
    if (at_p[k] + eps * (at_q[k] - at_p[k]) < 0.0) return true;
  return false;
}

struct DirectionCheck {
  int facets = 0, disagreements = 0;
};

void direction_check(const MinkowskiEmbedding& emb, ConeOrientation orient, std::mt19937_64& rng,
                     DirectionCheck& out) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), wide(-10.0, 10.0);
  std::vector<std::vector<double>> dirs;
  while (dirs.size() < 100) {
    std::vector<double> v(emb.ambient_dim(), 0.0);
    double r2 = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (emb.metric_signs[k] == 1) r2 += (v[k] = u(rng)) * v[k];
      if (emb.metric_signs[k] == 0) v[k] = wide(rng);
    }
    if (r2 >= 0.998) continue;
    v[*emb.time_axis] = orient.time_sign;
    dirs.push_back(v);
  }
  for (std::size_t i = 0; i < 5; ++i) {
    const auto f = Simplex::facet_omitting(i);
    const auto side = facet_side_test(emb, f, orient).side;
    int leaving = 0;
    for (const auto& v : dirs) leaving += leaves_simplex(emb, f, v);
    ++out.facets;
    if (side == FacetSide::Lower && leaving != 100) ++out.disagreements;
    if (side == FacetSide::Upper && leaving != 0) ++out.disagreements;
  }
}

void lower_side_structure() {
  std::map<std::size_t, int> histogram;
  int uncovered = 0;
  for (const auto& r : g_minkowski_runs) {
    ++histogram[r.complex.facets.size()];
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = i + 1; j < 5; ++j) uncovered += !r.complex.has_face(Simplex::of({i, j}));
  }
  int wrong_count = 0;
  for (const auto& [k, c] : histogram)
    if (k != 3 && k != 4) wrong_count += c;

  std::mt19937_64 rng(5);
  DirectionCheck dc;
  const auto fixture = embed_five_points(io::parse_input(oracle::fixture("tripod_extension.json")));
  direction_check(fixture.embedding, *fixture.orientation, rng, dc);
  for (double t : {-0.1, -0.2}) {
    MinkowskiEmbedding e;
    e.coords = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 0}, {0.25, 0.25, 0.25, t}};
    e.metric_signs = {1, 1, 1, -1};
    e.time_axis = 3;
    direction_check(e, choose_time_orientation(e), rng, dc);
  }
  for (const auto& r : g_minkowski_runs) direction_check(r.embedding, *r.orientation, rng, dc);

  std::string hist;
  for (const auto& [k, c] : histogram) hist += fmt("%zu:%d ", k, c);
  report(5, wrong_count == 0 && uncovered == 0 && dc.disagreements == 0, "lower side structure",
         fmt("%zu Minkowski runs, Lower facet counts {%s}-> %d outside {3,4}; %d uncovered edges; "
             "direction test %d disagreements over %d facets",
             g_minkowski_runs.size(), hist.c_str(), wrong_count, uncovered, dc.disagreements, dc.facets));
}

void geodesic_sanity() {
  const auto s = io::parse_input(oracle::fixture("tripod_extension.json"));
  const auto r = embed_five_points(s);
  bool monotone = true, above = true, close = true;
  double worst_gap = 0.0;
  DistanceTable prev{};
  bool first = true;
  for (int res : {4, 8, 16}) {
    const auto b = geodesic_upper_bounds(r.complex, res);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j) {
        if (!first && b[i][j] > prev[i][j]) monotone = false;
        if (b[i][j] < s(i, j) - 1e-9) above = false;
        if (res == 16 && i != j) {
          worst_gap = std::max(worst_gap, (b[i][j] - s(i, j)) / s(i, j));
          if (b[i][j] > 1.02 * s(i, j)) close = false;
        }
      }
    prev = b;
    first = false;
  }
  report(6, monotone && above && close, "geodesic sanity on the tripod extension",
         fmt("monotone %s, above metric %s, worst relative gap at resolution 16 %.2e", monotone ? "yes" : "no",
             above ? "yes" : "no", worst_gap));
}

void c4_equivalence() {
  std::size_t checked = 0, disagreements = 0, undecided = 0, in_band = 0;
  const char* kinds[] = {"euclidean_3", "tree", "perturbed_tree", "general"};
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const auto s = random_metric(kinds[k % 4], 4, k);
    const auto r = c4_equivalence_check(s);
    checked += r.checked;
    disagreements += r.disagreements;
    undecided += r.solver_undecided;
    in_band += r.in_band;
  }
  const double rate = static_cast<double>(undecided) / static_cast<double>(checked);
  report(7, disagreements == 0 && rate < 0.02, "C4 agrees with the quadruple comparison",
         fmt("1000 spaces, %zu labelings: %zu disagreements, solver Undecided rate %.3f%%, %zu zero-slack labelings "
             "excluded from the tally",
             checked, disagreements, 100.0 * rate, in_band));
}

void cycle_implication() {
  const char* kinds[] = {"euclidean_3", "tree", "perturbed_tree", "general"};
  int spaces = 0;
  std::size_t instances = 0, feasible = 0, infeasible = 0, undecided = 0;
  for (std::uint64_t k = 0; spaces < 200; ++k) {
    const auto s = random_metric(kinds[k % 4], 5, 10000 + k);
    if (!cat0_comparison_all(s).holds) continue;
    ++spaces;
    const auto r = cycle_implication_check(s, 5);
    instances += r.instances;
    feasible += r.feasible;
    infeasible += r.infeasible;
    undecided += r.undecided;
  }
  report(8, feasible == instances && infeasible == 0, "every C5 labeling feasible",
         fmt("%d spaces, %zu labelings: %zu Feasible, %zu Infeasible, %zu Undecided", spaces, instances, feasible,
             infeasible, undecided));
}

void hunter_consistency() {
  HuntConfig cfg;
  cfg.generator = parse_generator("general");
  cfg.budget = 10000;
  cfg.seed = 0x5eedULL;
  cfg.predicate = HuntPredicate::NegativePairAndComparison;
  const auto a = hunt_counterexamples(cfg, 4);
  const auto first = io::dump(io::to_json(a));
  const auto second = io::dump(io::to_json(hunt_counterexamples(cfg, 4)));
  const auto serial = io::dump(io::to_json(hunt_counterexamples(cfg, 1)));
  const bool identical = first == second && first == serial;
  report(9, a.hits.empty() && identical && a.evaluated == 10000, "hunter consistency",
         fmt("%zu samples, %zu passing the comparison, %zu hits; reports identical across runs and worker counts: %s",
             a.evaluated, a.candidates, a.hits.size(), identical ? "yes" : "no"));
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  euclidean_round_trip();
  tree_pipeline();
  corollary_invariant();
  strata_combinatorics();
  lower_side_structure();
  geodesic_sanity();
  c4_equivalence();
  cycle_implication();
  hunter_consistency();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d of 9 criteria failed (%.1f s)\n", g_failed, secs);
  return g_failed == 0 ? 0 : 1;
}
