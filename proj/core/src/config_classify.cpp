#include "cat5/config_classify.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "cat5/error.hpp"

namespace cat5 {

namespace {

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double len(const Vec3& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }

std::array<std::size_t, 4> omit(std::size_t i) {
  std::array<std::size_t, 4> out{};
  std::size_t k = 0;
  for (std::size_t j = 0; j < 5; ++j)
    if (j != i) out[k++] = j;
  return out;
}

double facet_det(const std::array<Vec3, 5>& p, std::size_t i) {
  const auto j = omit(i);
  return det3(sub(p[j[1]], p[j[0]]), sub(p[j[2]], p[j[0]]), sub(p[j[3]], p[j[0]]));
}

}  // namespace

Array5R3::Array5R3(const std::array<Vec3, 5>& pts, double rel_tol) : pts_(pts) {
  for (const auto& p : pts_)
    for (double c : p)
      if (!std::isfinite(c)) throw Error(ErrorCode::DegenerateArray, "non-finite coordinate");
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j)
      diameter_ = std::max(diameter_, len(sub(pts_[i], pts_[j])));
  if (diameter_ == 0.0) throw Error(ErrorCode::DegenerateArray, "all points coincide");
  det_tol_ = rel_tol * diameter_ * diameter_ * diameter_;

  const double area_tol = rel_tol * diameter_ * diameter_;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j)
      for (std::size_t k = j + 1; k < 5; ++k)
        if (len(cross(sub(pts_[j], pts_[i]), sub(pts_[k], pts_[i]))) <= area_tol)
          throw Error(ErrorCode::DegenerateArray,
                      "points " + std::to_string(i) + ", " + std::to_string(j) + ", " +
                          std::to_string(k) + " are collinear");
  bool all_flat = true;
  for (std::size_t i = 0; i < 5 && all_flat; ++i)
    all_flat = std::abs(facet_det(pts_, i)) <= det_tol_;
  if (all_flat) throw Error(ErrorCode::DegenerateArray, "all five points are coplanar");
}

std::string_view to_string(Side side) {
  switch (side) {
    case Side::A_minus: return "A_minus";
    case Side::A_plus: return "A_plus";
    case Side::A_zero: return "A_zero";
  }
  return "?";
}

std::string OrientationProfile::stratum() const { return "A_" + std::to_string(m); }

std::array<int, 5> facet_orientations(const Array5R3& arr) {
  std::array<int, 5> signs{};
  for (std::size_t i = 0; i < 5; ++i) {
    const double det = facet_det(arr.points(), i);
    const int s = std::abs(det) < arr.determinant_tolerance() ? 0 : (det > 0 ? 1 : -1);
    signs[i] = (i % 2 == 0) ? s : -s;
  }
  return signs;
}

OrientationProfile profile_from_signs(const std::array<int, 5>& facet_signs) {
  OrientationProfile p;
  p.facet_signs = facet_signs;
  for (int s : facet_signs) {
    if (s > 0) ++p.n_plus;
    else if (s < 0) ++p.n_minus;
    else ++p.n_zero;
  }
  p.m = p.n_minus - p.n_plus;
  p.side = p.m < 0 ? Side::A_minus : (p.m > 0 ? Side::A_plus : Side::A_zero);
  return p;
}

OrientationProfile classify(const Array5R3& arr) {
  return profile_from_signs(facet_orientations(arr));
}

Array5R3 project_along(const MinkowskiEmbedding& emb, std::span<const double> v) {
  if (emb.points() != 5 || emb.ambient_dim() != 4 || !emb.time_axis)
    throw Error(ErrorCode::InvalidArgument,
                "project_along needs five points in R^4 with one negative axis");
  if (v.size() != 4) throw Error(ErrorCode::InvalidArgument, "direction must lie in R^4");
  const double wv = emb.form(v);
  if (!(wv < 0.0)) throw Error(ErrorCode::NotTimelike, "direction is not timelike");
  const std::size_t t = *emb.time_axis;

  std::array<Vec3, 5> pts{};
  for (std::size_t i = 0; i < 5; ++i) {
    const auto& x = emb.coords[i];
    double bxv = 0.0;
    for (std::size_t k = 0; k < 4; ++k) bxv += emb.metric_signs[k] * x[k] * v[k];
    const double f = bxv / wv;
    std::size_t c = 0;
    for (std::size_t k = 0; k < 4; ++k) {
      if (k == t) continue;
      pts[i][c++] = x[k] - f * v[k];
    }
  }
  return Array5R3(pts);
}

namespace {

enum class Placement { Inside, OnFace, OnFacePlane, Outside };

// Where point i sits relative to the tetrahedron spanned by the other four.
// nullopt when the other four are coplanar.
std::optional<Placement> placement(const std::array<Vec3, 5>& p, std::size_t i) {
  constexpr double eps = 1e-9;
  const auto o = omit(i);
  const Vec3 e1 = sub(p[o[1]], p[o[0]]);
  const Vec3 e2 = sub(p[o[2]], p[o[0]]);
  const Vec3 e3 = sub(p[o[3]], p[o[0]]);
  const Vec3 r = sub(p[i], p[o[0]]);
  const double vol = det3(e1, e2, e3);
  double scale = std::max({len(e1), len(e2), len(e3)});
  if (std::abs(vol) <= kDegeneracyRelTol * scale * scale * scale) return std::nullopt;
  // Cramer's rule for barycentric coordinates.
  const double l1 = det3(r, e2, e3) / vol;
  const double l2 = det3(e1, r, e3) / vol;
  const double l3 = det3(e1, e2, r) / vol;
  const std::array<double, 4> lam{1.0 - l1 - l2 - l3, l1, l2, l3};
  int zeros = 0;
  bool negative = false;
  for (double l : lam) {
    if (std::abs(l) <= eps) ++zeros;
    else if (l < 0.0) negative = true;
  }
  if (!negative && zeros == 0) return Placement::Inside;
  if (!negative && zeros == 1) return Placement::OnFace;
  if (zeros > 0) return Placement::OnFacePlane;
  return Placement::Outside;
}

}  // namespace

int hull_abs_m(const Array5R3& arr) {
  bool coplanar_four = false;
  for (std::size_t i = 0; i < 5; ++i) {
    const auto pl = placement(arr.points(), i);
    if (!pl) {
      coplanar_four = true;
      continue;
    }
    if (*pl == Placement::Inside) return 3;
    if (*pl == Placement::OnFace) return 2;
    if (*pl == Placement::OnFacePlane) coplanar_four = true;
  }
  return coplanar_four ? 0 : 1;
}

bool structural_check(const Array5R3& arr, const OrientationProfile& profile) {
  if (profile.n_plus + profile.n_zero + profile.n_minus != 5) return false;
  if (profile.m != profile.n_minus - profile.n_plus) return false;
  const int expected_zero = std::abs(profile.m) % 2 == 0 ? 1 : 0;
  if (profile.n_zero != expected_zero) return false;
  return hull_abs_m(arr) == std::abs(profile.m);
}

}  // namespace cat5
