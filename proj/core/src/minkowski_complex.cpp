#include "cat5/minkowski_complex.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace cat5 {

Simplex Simplex::of(std::initializer_list<std::size_t> vertices) {
  std::uint8_t m = 0;
  for (std::size_t v : vertices) {
    if (v > 4) throw Error(ErrorCode::InvalidArgument, "simplex vertex out of range");
    m |= static_cast<std::uint8_t>(1u << v);
  }
  return Simplex(m);
}

std::size_t Simplex::size() const noexcept { return std::popcount(mask_); }

std::vector<std::size_t> Simplex::vertices() const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < 5; ++v)
    if (contains(v)) out.push_back(v);
  return out;
}

std::size_t Simplex::omitted() const {
  if (size() != 4) throw Error(ErrorCode::InvalidArgument, "not a facet");
  for (std::size_t v = 0; v < 5; ++v)
    if (!contains(v)) return v;
  return 5;
}

std::string_view to_string(FacetSide side) {
  switch (side) {
    case FacetSide::Lower: return "Lower";
    case FacetSide::Upper: return "Upper";
    case FacetSide::Timelike: return "Timelike";
  }
  return "?";
}

std::string_view to_string(Branch branch) {
  switch (branch) {
    case Branch::EuclideanFullSimplex: return "Euclidean_full_simplex";
    case Branch::MinkowskiLowerBoundary: return "Minkowski_lower_boundary";
  }
  return "?";
}

namespace {

void require_simplex(const MinkowskiEmbedding& emb) {
  if (emb.points() != 5 || emb.ambient_dim() != 4)
    throw Error(ErrorCode::InvalidArgument, "expected five points in R^4");
}

void require_minkowski(const MinkowskiEmbedding& emb) {
  require_simplex(emb);
  if (!emb.time_axis ||
      std::count(emb.metric_signs.begin(), emb.metric_signs.end(), -1) != 1)
    throw Error(ErrorCode::NotMinkowski, "embedding needs exactly one negative axis");
}

std::string simplex_label(Simplex s) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (std::size_t v : s.vertices()) {
    os << (first ? "" : ",") << v;
    first = false;
  }
  os << "}";
  return os.str();
}

struct NormalParts {
  double time = 0.0;     // time_sign * n_t
  double spatial = 0.0;  // norm over +1 axes
  double kernel = 0.0;   // norm over 0 axes
};

NormalParts split_normal(const MinkowskiEmbedding& emb, const std::array<double, 4>& n,
                         ConeOrientation orient) {
  NormalParts parts;
  for (std::size_t k = 0; k < 4; ++k) {
    const int s = emb.metric_signs[k];
    if (s < 0) parts.time = orient.time_sign * n[k];
    else if (s > 0) parts.spatial += n[k] * n[k];
    else parts.kernel += n[k] * n[k];
  }
  parts.spatial = std::sqrt(parts.spatial);
  parts.kernel = std::sqrt(parts.kernel);
  return parts;
}

}  // namespace

std::array<double, 4> outward_normal(const MinkowskiEmbedding& emb, Simplex facet) {
  require_simplex(emb);
  const std::size_t out = facet.omitted();
  const auto v = facet.vertices();
  std::array<std::array<double, 4>, 3> rows{};
  double scale = 0.0;
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t k = 0; k < 4; ++k)
      rows[r][k] = emb.coords[v[r + 1]][k] - emb.coords[v[0]][k];
    scale = std::max(scale, norm(rows[r]));
  }
  std::array<double, 4> n{};
  for (std::size_t k = 0; k < 4; ++k) {
    std::array<std::array<double, 3>, 3> minor{};
    for (std::size_t r = 0; r < 3; ++r) {
      std::size_t c = 0;
      for (std::size_t j = 0; j < 4; ++j)
        if (j != k) minor[r][c++] = rows[r][j];
    }
    const double d = det3(minor[0], minor[1], minor[2]);
    n[k] = (k % 2 == 0) ? d : -d;
  }
  const double len = norm(n);
  if (!(len > 1e-12 * scale * scale * scale))
    throw Error(ErrorCode::DegenerateFacet, "facet " + simplex_label(facet) +
                                                " is affinely degenerate");
  double toward = 0.0;
  for (std::size_t k = 0; k < 4; ++k) toward += n[k] * (emb.coords[out][k] - emb.coords[v[0]][k]);
  const double sign = toward > 0.0 ? -1.0 : 1.0;
  for (double& c : n) c *= sign / len;
  return n;
}

FacetSideResult facet_side_test(const MinkowskiEmbedding& emb, Simplex facet,
                                ConeOrientation orient, double tol) {
  require_minkowski(emb);
  FacetSideResult r;
  r.normal = outward_normal(emb, facet);
  const NormalParts parts = split_normal(emb, r.normal, orient);
  r.time_component = parts.time;
  r.spatial_norm = parts.spatial;
  r.kernel_norm = parts.kernel;
  const bool cone_ok = parts.kernel <= tol && parts.spatial <= std::abs(parts.time) + tol;
  if (cone_ok && parts.time < 0.0) r.side = FacetSide::Lower;
  else if (cone_ok && parts.time > 0.0) r.side = FacetSide::Upper;
  else r.side = FacetSide::Timelike;
  const double gap = std::abs(parts.spatial - std::abs(parts.time));
  r.near_boundary = gap <= 1e3 * tol || (parts.kernel > tol && parts.kernel <= 1e3 * tol);
  return r;
}

bool on_lower_side(const MinkowskiEmbedding& emb, Simplex face, ConeOrientation orient,
                   double tol) {
  require_minkowski(emb);
  if (face.size() == 0 || face.size() == 5) return false;
  if (face.size() == 4) return facet_side_test(emb, face, orient, tol).side == FacetSide::Lower;

  // Normal cone of the face: nonnegative combinations of the outward normals
  // of the facets that contain it. Normalize time_sign * n_t = -1 and look for
  // the combination with the smallest spatial part (a tiny convex QP solved
  // exactly by enumerating supports).
  std::vector<std::array<double, 4>> gens;
  for (std::size_t i = 0; i < 5; ++i)
    if (!face.contains(i)) gens.push_back(outward_normal(emb, Simplex::facet_omitting(i)));

  std::vector<std::size_t> spatial_axes, kernel_axes;
  std::size_t t = *emb.time_axis;
  for (std::size_t k = 0; k < 4; ++k) {
    if (emb.metric_signs[k] > 0) spatial_axes.push_back(k);
    else if (emb.metric_signs[k] == 0) kernel_axes.push_back(k);
  }

  const std::size_t g = gens.size();
  for (unsigned support = 1; support < (1u << g); ++support) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < g; ++i)
      if ((support >> i) & 1u) idx.push_back(i);
    const std::size_t k = idx.size();
    const std::size_t r = 1 + kernel_axes.size();
    Matrix kkt(k + r, k + r);
    std::vector<double> rhs(k + r, 0.0);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) {
        double s = 0.0;
        for (std::size_t ax : spatial_axes) s += gens[idx[a]][ax] * gens[idx[b]][ax];
        kkt(a, b) = 2.0 * s;
      }
    for (std::size_t a = 0; a < k; ++a) {
      const double time_row = orient.time_sign * gens[idx[a]][t];
      kkt(k, a) = kkt(a, k) = time_row;
      for (std::size_t z = 0; z < kernel_axes.size(); ++z)
        kkt(k + 1 + z, a) = kkt(a, k + 1 + z) = gens[idx[a]][kernel_axes[z]];
    }
    rhs[k] = -1.0;
    const Matrix pinv = symmetric_pinv(kkt);
    std::vector<double> lambda(k, 0.0);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t j = 0; j < k + r; ++j) lambda[a] += pinv(a, j) * rhs[j];

    double lam_sum = 0.0;
    bool nonneg = true;
    for (double l : lambda) {
      if (l < -1e-12) nonneg = false;
      lam_sum += std::abs(l);
    }
    if (!nonneg) continue;
    std::array<double, 4> n{};
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t ax = 0; ax < 4; ++ax) n[ax] += std::max(0.0, lambda[a]) * gens[idx[a]][ax];
    const NormalParts parts = split_normal(emb, n, orient);
    const double len = norm(n);
    if (std::abs(parts.time + 1.0) > 1e-9 * (1.0 + lam_sum)) continue;
    if (parts.kernel > tol * len) continue;
    if (parts.spatial <= -parts.time + tol * len) return true;
  }
  return false;
}

ConeOrientation choose_time_orientation(const MinkowskiEmbedding& emb) {
  require_minkowski(emb);
  std::array<double, 4> axis{};
  axis[*emb.time_axis] = 1.0;
  const Array5R3 projected = project_along(emb, axis);
  const OrientationProfile profile = classify(projected);
  if (profile.side == Side::A_zero)
    throw Error(ErrorCode::StratumA0,
                "projection along the time axis lies in A_0 (" + profile.stratum() + ")");
  // The facets of the majority orientation (at least three) must face the past.
  const int majority = profile.n_plus > profile.n_minus ? 1 : -1;
  std::optional<int> time_sign;
  for (std::size_t i = 0; i < 5; ++i) {
    if (profile.facet_signs[i] != majority) continue;
    const auto n = outward_normal(emb, Simplex::facet_omitting(i));
    const int ts = n[*emb.time_axis] > 0.0 ? -1 : 1;
    if (time_sign && *time_sign != ts)
      throw Error(ErrorCode::InvalidArgument,
                  "inconsistent facet orientations in the time projection");
    time_sign = ts;
  }
  return ConeOrientation{*time_sign};
}

bool SpacelikeComplex::has_face(Simplex s) const {
  return std::find(faces.begin(), faces.end(), s) != faces.end();
}

MinkowskiEmbedding SpacelikeComplex::embedding() const {
  MinkowskiEmbedding e;
  e.coords = vertices;
  e.metric_signs = metric_signs;
  e.time_axis = time_axis;
  return e;
}

namespace {

std::vector<Simplex> close_faces(const std::vector<Simplex>& maximal) {
  std::vector<Simplex> faces;
  for (unsigned m = 1; m < 32; ++m) {
    const Simplex s(static_cast<std::uint8_t>(m));
    for (Simplex top : maximal)
      if (top.contains(s)) {
        faces.push_back(s);
        break;
      }
  }
  return faces;
}

void fill_edge_lengths(SpacelikeComplex& cx, const MinkowskiEmbedding& emb,
                       const FiniteMetricSpace* reference, const Tolerances& tol) {
  double diam = 0.0;
  if (reference) diam = reference->diameter();
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      if (i == j) {
        cx.edge_lengths[i][j] = 0.0;
        continue;
      }
      const double w = emb.squared_distance(i, j);
      const double clamp = tol.length * diam;
      if (reference && w <= clamp * clamp) {
        cx.edge_lengths[i][j] = (*reference)(i, j);
        if (i < j)
          cx.diagnostics.push_back("edge {" + std::to_string(i) + "," + std::to_string(j) +
                                   "} is near-null; length clamped to the input distance");
      } else {
        cx.edge_lengths[i][j] = std::sqrt(std::max(0.0, w));
      }
    }
}

}  // namespace

SpacelikeComplex build_complex(const MinkowskiEmbedding& emb, ConeOrientation orient,
                               const FiniteMetricSpace* reference, const Tolerances& tol) {
  require_minkowski(emb);
  SpacelikeComplex cx;
  cx.branch = Branch::MinkowskiLowerBoundary;
  cx.vertices = emb.coords;
  cx.metric_signs = emb.metric_signs;
  cx.time_axis = emb.time_axis;
  cx.time_sign = orient.time_sign;

  for (std::size_t i = 0; i < 5; ++i) {
    const Simplex f = Simplex::facet_omitting(i);
    const FacetSideResult r = facet_side_test(emb, f, orient, tol.lightlike);
    if (r.side == FacetSide::Lower) cx.facets.push_back(f);
    if (r.near_boundary)
      cx.diagnostics.push_back("facet " + simplex_label(f) + " is within tolerance of lightlike (" +
                               std::string(to_string(r.side)) + ")");
  }
  std::sort(cx.facets.begin(), cx.facets.end());
  cx.simplices = cx.facets;

  // Lower faces not inside any Lower facet, largest first.
  std::vector<Simplex> candidates;
  for (unsigned m = 1; m < 31; ++m) {
    const Simplex s(static_cast<std::uint8_t>(m));
    if (s.size() >= 2 && s.size() <= 3) candidates.push_back(s);
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](Simplex a, Simplex b) { return a.size() > b.size(); });
  for (Simplex s : candidates) {
    const bool covered = std::any_of(cx.simplices.begin(), cx.simplices.end(),
                                     [&](Simplex top) { return top.contains(s); });
    if (covered) continue;
    if (on_lower_side(emb, s, orient, tol.lightlike)) {
      cx.simplices.push_back(s);
      cx.diagnostics.push_back("lower side contains " + simplex_label(s) +
                               " outside every Lower facet");
    }
  }

  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j) {
      const Simplex e = Simplex::of({i, j});
      const bool covered = std::any_of(cx.simplices.begin(), cx.simplices.end(),
                                       [&](Simplex top) { return top.contains(e); });
      if (!covered)
        throw Error(ErrorCode::EdgesNotCovered,
                    "edge " + simplex_label(e) + " is not on the lower side");
    }
  cx.faces = close_faces(cx.simplices);
  fill_edge_lengths(cx, emb, reference, tol);
  return cx;
}

SpacelikeComplex full_simplex_complex(const MinkowskiEmbedding& emb) {
  require_simplex(emb);
  SpacelikeComplex cx;
  cx.branch = Branch::EuclideanFullSimplex;
  cx.vertices = emb.coords;
  cx.metric_signs = emb.metric_signs;
  cx.time_axis = std::nullopt;
  cx.time_sign = 1;
  for (std::size_t i = 0; i < 5; ++i) cx.facets.push_back(Simplex::facet_omitting(i));
  std::sort(cx.facets.begin(), cx.facets.end());
  cx.simplices = {Simplex(0x1F)};
  cx.faces = close_faces(cx.simplices);
  cx.ambient_geodesics = true;
  fill_edge_lengths(cx, emb, nullptr, {});
  return cx;
}

EmbeddingResult embed_five_points(const FiniteMetricSpace& space, const Tolerances& tol) {
  if (space.size() != 5)
    throw Error(ErrorCode::InvalidArgument, "embed_five_points needs a 5-point space");
  ComparisonReport comparison = cat0_comparison_all(space, tol.compare);
  if (!comparison.holds) {
    const Labeling w = *comparison.witness;
    std::ostringstream os;
    os << "CAT(0) comparison fails for (p,q,x,y) = (" << w.p << "," << w.q << "," << w.x
       << "," << w.y << "), slack " << comparison.worst_slack;
    throw ComparisonFailedError(w, comparison.worst_slack, os.str());
  }

  QuadraticForm form = associated_form(space);
  Spectrum spectrum = eigendecompose(form, tol.zero);
  MinkowskiEmbedding emb;
  SpacelikeComplex cx;
  std::optional<OrientationProfile> profile;
  std::optional<ConeOrientation> orientation;

  if (is_euclidean(spectrum)) {
    emb = euclidean_embedding(spectrum, form);
    cx = full_simplex_complex(emb);
  } else {
    emb = minkowski_embedding(spectrum, form);  // throws on >= 2 negative eigenvalues
    std::array<double, 4> axis{};
    axis[*emb.time_axis] = 1.0;
    profile = classify(project_along(emb, axis));
    orientation = choose_time_orientation(emb);
    cx = build_complex(emb, *orientation, &space, tol);
  }

  double residual = 0.0;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j)
      residual = std::max(residual, std::abs(cx.edge_lengths[i][j] - space(i, j)) / space(i, j));

  return EmbeddingResult{space,   std::move(form), std::move(spectrum), std::move(emb),
                         std::move(cx), profile,  orientation,         std::move(comparison),
                         tol,     residual};
}

}  // namespace cat5
