#include "cat5/metric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cat5/error.hpp"

namespace cat5 {

namespace {

std::string index_triple(std::size_t i, std::size_t j, std::size_t k) {
  std::ostringstream os;
  os << "(" << i << "," << j << "," << k << ")";
  return os.str();
}

}  // namespace

double FiniteMetricSpace::diameter() const {
  double m = 0.0;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i + 1; j < size(); ++j) m = std::max(m, d_(i, j));
  return m;
}

FiniteMetricSpace FiniteMetricSpace::subspace(const std::vector<std::size_t>& idx) const {
  Matrix sub(idx.size(), idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b) sub(a, b) = d_(idx.at(a), idx.at(b));
  return validate_metric(sub);
}

FiniteMetricSpace FiniteMetricSpace::scaled(double s) const {
  if (!(s > 0.0)) throw Error(ErrorCode::InvalidArgument, "scale factor must be positive");
  return FiniteMetricSpace(s * d_);
}

FiniteMetricSpace validate_metric(const std::vector<std::vector<double>>& raw) {
  for (const auto& r : raw)
    if (r.size() != raw.size())
      throw Error(ErrorCode::NotSquare, "distance matrix is not square");
  return validate_metric(Matrix::from_rows(raw));
}

FiniteMetricSpace validate_metric(std::initializer_list<std::initializer_list<double>> raw) {
  std::vector<std::vector<double>> rows;
  for (const auto& r : raw) rows.emplace_back(r);
  return validate_metric(rows);
}

FiniteMetricSpace validate_metric(const Matrix& d) {
  const std::size_t n = d.rows();
  if (!d.square()) throw Error(ErrorCode::NotSquare, "distance matrix is not square");
  if (n < 2 || n > kMaxPoints)
    throw Error(ErrorCode::InvalidArgument,
                "point count must be between 2 and " + std::to_string(kMaxPoints));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!std::isfinite(d(i, j)))
        throw Error(ErrorCode::NonFinite, "non-finite distance at " + index_triple(i, j, j));
  for (std::size_t i = 0; i < n; ++i) {
    if (d(i, i) != 0.0)
      throw Error(ErrorCode::NonzeroDiagonal,
                  "d[" + std::to_string(i) + "][" + std::to_string(i) + "] is nonzero");
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = d(i, j);
      const double b = d(j, i);
      if (std::abs(a - b) > kTriangleRelTol * std::max(std::abs(a), std::abs(b)))
        throw Error(ErrorCode::Asymmetric, "d[" + std::to_string(i) + "][" +
                                               std::to_string(j) + "] != d[" +
                                               std::to_string(j) + "][" +
                                               std::to_string(i) + "]");
      if (a < 0.0)
        throw Error(ErrorCode::NegativeDistance,
                    "negative distance between " + std::to_string(i) + " and " +
                        std::to_string(j));
      if (a == 0.0)
        throw Error(ErrorCode::ZeroOffDiagonal,
                    "points " + std::to_string(i) + " and " + std::to_string(j) +
                        " are at distance zero");
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = i + 1; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || j == k) continue;
        const double detour = d(i, j) + d(j, k);
        if (d(i, k) > detour * (1.0 + kTriangleRelTol))
          throw TriangleViolationError(
              i, j, k, "triangle inequality fails: d" + index_triple(i, j, k) + " " +
                           std::to_string(d(i, k)) + " > " + std::to_string(detour));
      }
  return FiniteMetricSpace(d);
}

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

PlanarTriangle model_triangle(double l_ab, double l_ac, double l_bc) {
  if (!(l_ab >= 0.0 && l_ac >= 0.0 && l_bc >= 0.0) || !std::isfinite(l_ab + l_ac + l_bc))
    throw Error(ErrorCode::NotRealizable, "side lengths must be finite and nonnegative");
  const double slack_tol = kTriangleRelTol * (l_ab + l_ac + l_bc);
  if (l_ab > l_ac + l_bc + slack_tol || l_ac > l_ab + l_bc + slack_tol ||
      l_bc > l_ab + l_ac + slack_tol)
    throw Error(ErrorCode::NotRealizable, "side lengths violate the triangle inequality");

  PlanarTriangle t;
  t.b = {l_ab, 0.0};
  if (l_ab == 0.0) {
    t.c = {l_ac, 0.0};
    return t;
  }
  const double x = (l_ab * l_ab + l_ac * l_ac - l_bc * l_bc) / (2.0 * l_ab);
  // Heron-style product keeps precision near degenerate triangles.
  const double s1 = l_ab + l_ac + l_bc;
  const double s2 = -l_ab + l_ac + l_bc;
  const double s3 = l_ab - l_ac + l_bc;
  const double s4 = l_ab + l_ac - l_bc;
  const double prod = std::max(0.0, s1) * std::max(0.0, s2) * std::max(0.0, s3) *
                      std::max(0.0, s4);
  t.c = {x, std::sqrt(prod) / (2.0 * l_ab)};
  return t;
}

double comparison_tolerance(const FiniteMetricSpace& space, double tol_compare) {
  return tol_compare * space.diameter();
}

QuadCheckResult quad_comparison(const FiniteMetricSpace& space, std::size_t p,
                                std::size_t q, std::size_t x, std::size_t y,
                                double tol_compare) {
  const std::size_t n = space.size();
  if (p >= n || q >= n || x >= n || y >= n)
    throw Error(ErrorCode::InvalidArgument, "quad_comparison: index out of range");
  if (p == q || p == x || p == y || q == x || q == y || x == y)
    throw Error(ErrorCode::InvalidArgument, "quad_comparison: indices must be distinct");

  const double dxy = space(x, y);
  const Point2 pt = model_triangle(dxy, space(x, p), space(y, p)).c;
  const Point2 qt_up = model_triangle(dxy, space(x, q), space(y, q)).c;
  const Point2 qt{qt_up.x, -qt_up.y};  // opposite side of [x y]

  auto through = [&](double z) {
    return distance(pt, {z, 0.0}) + distance({z, 0.0}, qt);
  };
  double m;
  const double h = pt.y - qt.y;  // >= 0
  if (h > 0.0) {
    const double cross = pt.x + (qt.x - pt.x) * (pt.y / h);
    if (cross >= 0.0 && cross <= dxy)
      m = distance(pt, qt);
    else
      m = std::min(through(0.0), through(dxy));
  } else {
    const double lo = std::min(pt.x, qt.x);
    const double hi = std::max(pt.x, qt.x);
    if (hi >= 0.0 && lo <= dxy)
      m = hi - lo;
    else
      m = std::min(through(0.0), through(dxy));
  }

  QuadCheckResult r;
  r.slack = m - space(p, q);
  r.holds = r.slack >= -comparison_tolerance(space, tol_compare);
  r.labeling = {p, q, x, y};
  return r;
}

std::array<Labeling, 3> pair_splits(std::size_t a, std::size_t b, std::size_t c,
                                    std::size_t d) {
  return {Labeling{a, b, c, d}, Labeling{a, c, b, d}, Labeling{a, d, b, c}};
}

ComparisonReport cat0_comparison_all(const FiniteMetricSpace& space, double tol_compare) {
  ComparisonReport rep;
  rep.tolerance = comparison_tolerance(space, tol_compare);
  const std::size_t n = space.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c)
        for (std::size_t d = c + 1; d < n; ++d)
          for (const Labeling& l : pair_splits(a, b, c, d)) {
            const QuadCheckResult r = quad_comparison(space, l.p, l.q, l.x, l.y, tol_compare);
            if (!rep.worst_labeling || r.slack < rep.worst_slack) {
              rep.worst_slack = r.slack;
              rep.worst_labeling = l;
            }
            ++rep.labelings_checked;
            if (!r.holds) ++rep.failures;
          }
  rep.holds = rep.failures == 0;
  if (!rep.holds) rep.witness = rep.worst_labeling;
  return rep;
}

}  // namespace cat5
