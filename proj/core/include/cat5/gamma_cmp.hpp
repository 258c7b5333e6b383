#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cat5/linalg.hpp"
#include "cat5/metric.hpp"

namespace cat5 {

/// Simple undirected graph on vertices 0..n-1 without self-loops.
class ComparisonGraph {
 public:
  ComparisonGraph() = default;
  /// Throws InvalidArgument on self-loops or out-of-range endpoints.
  static ComparisonGraph from_edges(std::size_t n,
                                    const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                                    std::string name = {});

  std::size_t size() const noexcept { return n_; }
  bool adjacent(std::size_t i, std::size_t j) const { return adj_.at(i * n_ + j); }
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;
  std::vector<std::pair<std::size_t, std::size_t>> non_edges() const;
  const std::string& name() const noexcept { return name_; }

 private:
  std::size_t n_ = 0;
  std::vector<bool> adj_;
  std::string name_;
};

/// Recognized names: "C<n>" or "cycle" (param n), "O3"/"octahedron",
/// "tripod"/"3-tree", "4-tree", "star" (param k) or "star_<k>".
/// Other trees must be given as explicit edge lists.
ComparisonGraph builtin_graph(std::string_view name, std::optional<std::size_t> param = {});

enum class GammaStatus { Feasible, Infeasible, Undecided };
std::string_view to_string(GammaStatus status);

struct GammaOptions {
  double feas_tol_rel = 1e-7;      // times max d^2
  double infeas_floor_rel = 1e-4;  // times max d^2
  int patience = 500;
  int max_iterations = 50000;
};

/// Gram matrix of the model points. Squared model distances read
/// sd(i,j) = G[i][i] - 2 G[i][j] + G[j][j].
struct GramWitness {
  Matrix gram;
  double residual = 0.0;  // max constraint violation (d^2 units)
  GammaStatus status = GammaStatus::Undecided;
  int iterations = 0;
  double min_eigenvalue = 0.0;
  double scale = 0.0;  // max d^2
};

/// Projection onto the PSD cone by eigenvalue clipping.
Matrix project_psd(const Matrix& a);

/// Feasibility of {G psd; sd(i,j) <= d(i,j)^2 on edges; sd(i,j) >= d(i,j)^2 on
/// non-edges} by Dykstra's alternating projections, started from the
/// classical-scaling Gram matrix. Infeasible means the residual settled above
/// the floor; it is numerical evidence, not a certificate.
GramWitness gamma_feasible(const ComparisonGraph& graph, const Matrix& dists,
                           const GammaOptions& options = {});

double constraint_residual(const ComparisonGraph& graph, const Matrix& dists,
                           const Matrix& gram);

struct C4Entry {
  Labeling labeling;
  double slack = 0.0;
  GammaStatus status = GammaStatus::Undecided;
  double residual = 0.0;
  bool in_band = false;
  bool agrees = false;
};

struct C4EquivalenceReport {
  std::size_t checked = 0;
  std::size_t agreements = 0;
  std::size_t disagreements = 0;
  std::size_t undecided = 0;         // in_band or solver Undecided
  std::size_t in_band = 0;
  std::size_t solver_undecided = 0;  // gamma_feasible returned Undecided
  std::vector<C4Entry> entries;
};

/// For every quadruple and pair split, compares gamma_feasible on the 4-cycle
/// p-x-q-y (diagonals {p,q} and {x,y}) against quad_comparison. Slacks within
/// feas_tol_rel * diameter of zero and solver Undecided results are tallied as
/// undecided.
C4EquivalenceReport c4_equivalence_check(const FiniteMetricSpace& space,
                                         const GammaOptions& options = {},
                                         double tol_compare = kDefaultCompareTol);

struct CycleAnomaly {
  std::vector<std::size_t> cycle;  // point indices in cycle order
  double residual = 0.0;
};

struct CycleImplicationReport {
  bool precondition_met = false;
  std::string skip_reason;
  std::size_t instances = 0;
  std::size_t feasible = 0;
  std::size_t infeasible = 0;
  std::size_t undecided = 0;
  std::vector<CycleAnomaly> anomalies;  // Infeasible instances
  std::vector<CycleAnomaly> undecided_cycles;
};

/// Runs C_k for k = 5..min(max_cycle, n) over all subsets and cyclic
/// labelings of a space that passes the CAT(0) comparison.
CycleImplicationReport cycle_implication_check(const FiniteMetricSpace& space,
                                               std::size_t max_cycle = 6,
                                               const GammaOptions& options = {},
                                               double tol_compare = kDefaultCompareTol);

/// Distinct cyclic orders of the given vertices (rotations and reflections
/// identified), first element fixed.
std::vector<std::vector<std::size_t>> cyclic_labelings(const std::vector<std::size_t>& vertices);

/// The 15 ways to label six points as octahedron vertices, as antipodal
/// pairings. Vertex order: (a0, a1, a2, b0, b1, b2) with a_k antipodal to b_k.
std::vector<std::vector<std::size_t>> octahedron_labelings(const std::vector<std::size_t>& six);

}  // namespace cat5
