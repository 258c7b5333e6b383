#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cat5/assoc_form.hpp"
#include "cat5/config_classify.hpp"
#include "cat5/error.hpp"
#include "cat5/metric.hpp"

namespace cat5 {

/// Vertex subset of the 4-simplex on {0..4}, stored as a bit mask.
class Simplex {
 public:
  constexpr Simplex() = default;
  constexpr explicit Simplex(std::uint8_t mask) : mask_(mask & 0x1F) {}
  static Simplex of(std::initializer_list<std::size_t> vertices);
  static constexpr Simplex facet_omitting(std::size_t i) {
    return Simplex(static_cast<std::uint8_t>(0x1F & ~(1u << i)));
  }

  std::uint8_t mask() const noexcept { return mask_; }
  std::size_t size() const noexcept;
  bool contains(std::size_t v) const noexcept { return (mask_ >> v) & 1u; }
  bool contains(Simplex other) const noexcept { return (mask_ & other.mask_) == other.mask_; }
  std::vector<std::size_t> vertices() const;
  /// The vertex a facet omits (size() must be 4).
  std::size_t omitted() const;

  friend constexpr bool operator==(Simplex, Simplex) = default;
  friend constexpr auto operator<=>(Simplex a, Simplex b) { return a.mask_ <=> b.mask_; }

 private:
  std::uint8_t mask_ = 0;
};

struct ConeOrientation {
  int time_sign = 1;  // sign of the time coordinate on the future cone C+
  ConeOrientation flipped() const { return {-time_sign}; }
  friend bool operator==(ConeOrientation, ConeOrientation) = default;
};

enum class FacetSide { Lower, Upper, Timelike };
std::string_view to_string(FacetSide side);

struct Tolerances {
  double compare = kDefaultCompareTol;   // relative to the diameter
  double zero = kDefaultZeroTol;         // eigenvalue classification
  double lightlike = 1e-9;               // spacelike/lightlike boundary on unit normals
  double length = 1e-9;                  // edge-length clamp, relative to the diameter
};

struct FacetSideResult {
  FacetSide side = FacetSide::Timelike;
  std::array<double, 4> normal{};  // outward, unit Euclidean length
  double time_component = 0.0;     // time_sign * n_t
  double spatial_norm = 0.0;       // over the +1 axes
  double kernel_norm = 0.0;        // over the 0-sign axes
  bool near_boundary = false;      // within tolerance of the light cone
};

/// Outward unit normal of a facet of the embedded 4-simplex, from a cofactor
/// expansion, oriented away from the omitted vertex. DegenerateFacet if the
/// facet vertices are affinely dependent.
std::array<double, 4> outward_normal(const MinkowskiEmbedding& emb, Simplex facet);

/// Lower iff the supporting hyperplane is spacelike or lightlike and faces the
/// past: time_sign * n_t < 0, |n_spatial| <= -time_sign * n_t + tol and the
/// kernel part of n vanishes (kernel directions are free inside C+).
FacetSideResult facet_side_test(const MinkowskiEmbedding& emb, Simplex facet,
                                ConeOrientation orient, double tol = 1e-9);

/// Whether a face of the simplex has a past-facing spacelike supporting
/// hyperplane, i.e. whether its normal cone meets the closed past normal cone.
/// For facets this agrees with facet_side_test(...) == Lower.
bool on_lower_side(const MinkowskiEmbedding& emb, Simplex face, ConeOrientation orient,
                   double tol = 1e-9);

/// Time orientation whose projection along the time axis lands in A_-, so the
/// majority-orientation facets face the past. StratumA0 when the projection
/// lies in A_0.
ConeOrientation choose_time_orientation(const MinkowskiEmbedding& emb);

enum class Branch { EuclideanFullSimplex, MinkowskiLowerBoundary };
std::string_view to_string(Branch branch);

struct SpacelikeComplex {
  Branch branch = Branch::MinkowskiLowerBoundary;
  std::vector<std::vector<double>> vertices;  // 5 points in R^4
  std::vector<int> metric_signs;
  std::optional<std::size_t> time_axis;
  int time_sign = 1;
  std::vector<Simplex> facets;      // 3-simplices on the lower side
  std::vector<Simplex> simplices;   // maximal simplices of the complex
  std::vector<Simplex> faces;       // every face, closed under sub-simplices
  std::array<std::array<double, 5>, 5> edge_lengths{};
  bool ambient_geodesics = false;   // solid simplex: geodesics are straight segments
  std::vector<std::string> diagnostics;

  bool has_face(Simplex s) const;
  MinkowskiEmbedding embedding() const;
};

/// Lower side of the boundary of the embedded simplex. Facets are those
/// classified Lower; lower-dimensional faces with a past-facing spacelike
/// supporting hyperplane that lie in no Lower facet are kept as extra maximal
/// simplices. Throws EdgesNotCovered if some edge misses the lower side.
/// When reference is given, edge lengths of near-null vertex pairs are clamped
/// to the reference distances.
SpacelikeComplex build_complex(const MinkowskiEmbedding& emb, ConeOrientation orient,
                               const FiniteMetricSpace* reference = nullptr,
                               const Tolerances& tol = {});

/// Solid simplex of a Euclidean embedding.
SpacelikeComplex full_simplex_complex(const MinkowskiEmbedding& emb);

struct EmbeddingResult {
  FiniteMetricSpace space;
  QuadraticForm form;
  Spectrum spectrum;
  MinkowskiEmbedding embedding;
  SpacelikeComplex complex;
  std::optional<OrientationProfile> profile;
  std::optional<ConeOrientation> orientation;
  ComparisonReport comparison;
  Tolerances tolerances;
  double max_edge_residual = 0.0;  // relative
};

class ComparisonFailedError : public Error {
 public:
  ComparisonFailedError(Labeling witness, double slack, const std::string& what)
      : Error(ErrorCode::ComparisonFailed, what), witness_(witness), slack_(slack) {}
  Labeling witness() const noexcept { return witness_; }
  double slack() const noexcept { return slack_; }

 private:
  Labeling witness_;
  double slack_;
};

/// Distance-preserving map of a 5-point CAT(0) space onto the vertices of a
/// CAT(0) subcomplex of the 4-simplex.
EmbeddingResult embed_five_points(const FiniteMetricSpace& space, const Tolerances& tol = {});

}  // namespace cat5
