#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <vector>

#include "cat5/linalg.hpp"

namespace cat5 {

inline constexpr std::size_t kMaxPoints = 16;
inline constexpr double kTriangleRelTol = 1e-12;
inline constexpr double kDefaultCompareTol = 1e-9;

/// A validated finite metric space on points 0..n-1.
///
/// Construct through validate_metric(); the invariants (zero diagonal,
/// symmetry, positive off-diagonal entries, triangle inequality up to a
/// relative 1e-12) hold for every instance.
class FiniteMetricSpace {
 public:
  std::size_t size() const noexcept { return d_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return d_(i, j); }
  const Matrix& distances() const noexcept { return d_; }
  double diameter() const;

  /// Sub-space on the given indices (in the given order).
  FiniteMetricSpace subspace(const std::vector<std::size_t>& indices) const;
  /// Same space with every distance multiplied by s > 0.
  FiniteMetricSpace scaled(double s) const;

 private:
  explicit FiniteMetricSpace(Matrix d) : d_(std::move(d)) {}
  friend FiniteMetricSpace validate_metric(const Matrix& raw);

  Matrix d_;
};

/// Throws cat5::Error (NotSquare, NonFinite, Asymmetric, NonzeroDiagonal,
/// ZeroOffDiagonal, NegativeDistance) or TriangleViolationError. Entries are
/// never repaired.
FiniteMetricSpace validate_metric(const Matrix& raw);
FiniteMetricSpace validate_metric(const std::vector<std::vector<double>>& raw);
FiniteMetricSpace validate_metric(std::initializer_list<std::initializer_list<double>> raw);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

double distance(Point2 a, Point2 b);

struct PlanarTriangle {
  Point2 a, b, c;
};

/// Planar triangle with |ab| = l_ab, |ac| = l_ac, |bc| = l_bc, a at the
/// origin, b on the positive x-axis, c in the closed upper half-plane.
/// Degenerate (collinear) triangles are allowed; NotRealizable when a triangle
/// inequality fails beyond a relative 1e-12.
PlanarTriangle model_triangle(double l_ab, double l_ac, double l_bc);

/// Pair split ((p, q), (x, y)): the model triangles are glued along [x y].
struct Labeling {
  std::size_t p = 0, q = 0, x = 0, y = 0;
  friend bool operator==(const Labeling&, const Labeling&) = default;
};

struct QuadCheckResult {
  bool holds = false;
  double slack = 0.0;  // min over z of |p~z| + |z q~|, minus d(p, q)
  Labeling labeling;
};

/// Comparison tolerance of a space: tol_compare * diameter.
double comparison_tolerance(const FiniteMetricSpace& space,
                            double tol_compare = kDefaultCompareTol);

/// Closed-form (2+2) comparison for one labeling.
QuadCheckResult quad_comparison(const FiniteMetricSpace& space, std::size_t p,
                                std::size_t q, std::size_t x, std::size_t y,
                                double tol_compare = kDefaultCompareTol);

struct ComparisonReport {
  bool holds = true;
  double worst_slack = 0.0;
  std::optional<Labeling> worst_labeling;  // set whenever n >= 4
  std::optional<Labeling> witness;         // worst labeling when the check fails
  std::size_t labelings_checked = 0;
  std::size_t failures = 0;
  double tolerance = 0.0;  // effective absolute tolerance
};

/// All C(n,4) quadruples, three pair splits each.
ComparisonReport cat0_comparison_all(const FiniteMetricSpace& space,
                                     double tol_compare = kDefaultCompareTol);

/// The three pair splits of a sorted quadruple a < b < c < d, in the order
/// {ab|cd}, {ac|bd}, {ad|bc}.
std::array<Labeling, 3> pair_splits(std::size_t a, std::size_t b, std::size_t c,
                                    std::size_t d);

}  // namespace cat5
