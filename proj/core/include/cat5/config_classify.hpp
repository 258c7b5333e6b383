#pragma once

#include <array>
#include <span>
#include <string_view>

#include "cat5/assoc_form.hpp"

namespace cat5 {

using Vec3 = std::array<double, 3>;

inline constexpr double kDegeneracyRelTol = 1e-10;

/// Five points in R^3 with no three collinear and not all five coplanar
/// (tolerances relative to the largest pairwise distance).
class Array5R3 {
 public:
  /// Throws DegenerateArray when the nondegeneracy conditions fail.
  explicit Array5R3(const std::array<Vec3, 5>& pts, double rel_tol = kDegeneracyRelTol);

  const std::array<Vec3, 5>& points() const noexcept { return pts_; }
  const Vec3& operator[](std::size_t i) const { return pts_.at(i); }
  double diameter() const noexcept { return diameter_; }
  /// tol_deg on facet determinants: rel_tol * diameter^3.
  double determinant_tolerance() const noexcept { return det_tol_; }

 private:
  std::array<Vec3, 5> pts_;
  double diameter_ = 0.0;
  double det_tol_ = 0.0;
};

enum class Side { A_minus, A_zero, A_plus };

std::string_view to_string(Side side);

struct OrientationProfile {
  std::array<int, 5> facet_signs{};  // facet i omits point i
  int n_plus = 0;
  int n_zero = 0;
  int n_minus = 0;
  int m = 0;  // n_minus - n_plus
  Side side = Side::A_zero;

  std::string stratum() const;  // "A_-3" ... "A_3"
};

/// Orientation sign of facet i is (-1)^i * sign det[p_j1 - p_j0, p_j2 - p_j0,
/// p_j3 - p_j0] over the indices j0 < j1 < j2 < j3 that omit i; determinants
/// below the array's tolerance report 0.
std::array<int, 5> facet_orientations(const Array5R3& arr);

OrientationProfile classify(const Array5R3& arr);
OrientationProfile profile_from_signs(const std::array<int, 5>& facet_signs);

/// Projects the embedded points along a timelike direction v (W(v) < 0) onto
/// the W-orthogonal complement of v and reads off the non-time coordinates.
/// Requires five points in R^4 with one negative axis; NotTimelike otherwise.
Array5R3 project_along(const MinkowskiEmbedding& emb, std::span<const double> v);

/// Convex-hull description of the strata, computed without facet signs:
/// |m| = 3: one point strictly inside the tetrahedron of the others;
/// |m| = 2: one point inside a face of the tetrahedron of the others;
/// m = 0:   five hull vertices, four of them coplanar;
/// |m| = 1: five hull vertices in general position (a bipyramid).
int hull_abs_m(const Array5R3& arr);

bool structural_check(const Array5R3& arr, const OrientationProfile& profile);

}  // namespace cat5
