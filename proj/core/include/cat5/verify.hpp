#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cat5/gamma_cmp.hpp"
#include "cat5/metric.hpp"
#include "cat5/minkowski_complex.hpp"

namespace cat5 {

using DistanceTable = std::array<std::array<double, 5>, 5>;

/// Sample nodes of a complex: every point of a maximal simplex whose
/// barycentric coordinates are multiples of 1/resolution. Nodes shared by
/// several simplices are stored once.
struct SampledComplexGraph {
  struct Node {
    std::array<int, 5> key{};   // barycentric numerators, summing to resolution
    std::vector<double> point;  // ambient coordinates
    std::vector<std::size_t> simplices;  // indices into SpacelikeComplex::simplices
  };
  int resolution = 0;
  std::vector<Node> nodes;
  std::vector<std::vector<std::size_t>> simplex_nodes;  // nodes of each maximal simplex
  std::array<std::size_t, 5> vertex_node{};
  double min_arc_form = 0.0;  // smallest W over all arcs (>= -tol when spacelike)
};

SampledComplexGraph build_sampled_graph(const SpacelikeComplex& cx, int resolution);

/// Dijkstra distances from one node; arcs join every pair of nodes sharing a
/// maximal simplex, weighted by sqrt(max(0, W(difference))).
std::vector<double> shortest_paths_from(const SampledComplexGraph& graph,
                                        const SpacelikeComplex& cx, std::size_t source);

/// Upper bounds on intrinsic distances between the 5 vertices. Euclidean
/// branch: ambient distances.
DistanceTable geodesic_upper_bounds(const SpacelikeComplex& cx, int resolution = 8);

struct PreservationReport {
  bool pass = true;
  double max_edge_residual = 0.0;  // relative to the input distance
  std::optional<std::pair<std::size_t, std::size_t>> worst_edge;
  double min_geodesic_gap = 0.0;  // min over pairs of (bound - d) / diameter
  std::optional<std::pair<std::size_t, std::size_t>> worst_geodesic_pair;
  DistanceTable bounds{};
  int resolution = 0;
  std::vector<std::string> failures;
};

/// Edge lengths equal the input metric to relative 1e-9 and sampled geodesic
/// bounds are not below the metric by more than 1e-9 * diameter.
PreservationReport check_distance_preservation(const SpacelikeComplex& cx,
                                               const FiniteMetricSpace& space,
                                               int resolution = 8);
PreservationReport check_distance_preservation(const EmbeddingResult& result,
                                               int resolution = 8);

enum class MetricKind { Euclidean, Tree, PerturbedTree, General };

struct GeneratorOptions {
  MetricKind kind = MetricKind::Euclidean;
  int euclidean_dim = 3;
  double perturbation = 0.1;          // delta of perturbed_tree
  std::size_t rejection_budget = 100000;
};

/// "euclidean_<k>", "tree", "perturbed_tree" or "general".
GeneratorOptions parse_generator(const std::string& name);
std::string generator_name(const GeneratorOptions& gen);

/// Uniform doubles in [0, 1) from a 64-bit Mersenne twister, with a fixed
/// bit-level conversion so sequences agree across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t below(std::size_t n);
  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);
/// Seed of sample `index` in a run seeded with `seed`.
std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index);

/// Deterministic per seed. Throws RejectionBudgetExceeded when the general
/// or perturbed-tree generator keeps producing invalid matrices.
FiniteMetricSpace random_metric(const GeneratorOptions& gen, std::size_t n, std::uint64_t seed);
FiniteMetricSpace random_metric(const std::string& kind, std::size_t n, std::uint64_t seed);

enum class HuntPredicate {
  NegativePairAndComparison,  // >= 2 negative eigenvalues and comparison passes
  C4PassesC5Infeasible,       // comparison passes, some C_5 labeling Infeasible
  C4PassesO3Infeasible,       // comparison passes, some O_3 labeling Infeasible
};

std::string to_string(HuntPredicate p);
HuntPredicate parse_predicate(const std::string& name);

struct HuntConfig {
  GeneratorOptions generator;
  std::size_t points = 5;
  std::size_t budget = 1000;
  std::uint64_t seed = 0;
  HuntPredicate predicate = HuntPredicate::NegativePairAndComparison;
  std::size_t near_misses = 10;
  GammaOptions gamma;
  double tol_compare = kDefaultCompareTol;
  double tol_zero = kDefaultZeroTol;
};

struct HuntSample {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  double margin = 0.0;  // >= 0 away from a hit, normalized by max d^2
  std::string detail;
  std::vector<std::vector<double>> distances;
};

struct HuntReport {
  HuntConfig config;
  std::size_t evaluated = 0;
  std::size_t candidates = 0;  // samples passing the comparison
  std::size_t undecided = 0;
  std::size_t generation_failures = 0;
  std::vector<HuntSample> hits;         // sorted by index
  std::vector<HuntSample> near_misses;  // sorted by margin, then index
};

/// Shards the budget over `workers` threads by sample index; the report does
/// not depend on the worker count.
HuntReport hunt_counterexamples(const HuntConfig& cfg, unsigned workers = 1);

}  // namespace cat5
