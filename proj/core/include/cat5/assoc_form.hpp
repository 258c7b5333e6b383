#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cat5/linalg.hpp"
#include "cat5/metric.hpp"

namespace cat5 {

inline constexpr double kDefaultZeroTol = 1e-9;
inline constexpr int kJacobiSweepCap = 100;

/// The associated form W of a point array in the basis v_i - v_base, where
/// the simplex vertex v_base sits at the origin:
///
///   B[a][b] = (d(i,base)^2 + d(j,base)^2 - d(i,j)^2) / 2
///
/// with i = indices[a], j = indices[b]. Hence W(v_i - v_j) = d(i,j)^2.
struct QuadraticForm {
  std::size_t dim = 0;
  Matrix b;
  std::size_t base_index = 0;
  std::vector<std::size_t> indices;  // point index of each row, ascending
};

struct Signature {
  int n_pos = 0;
  int n_zero = 0;
  int n_neg = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

struct Spectrum {
  std::vector<double> eigenvalues;  // descending
  Matrix frame;                     // orthonormal eigenvectors as columns
  Signature signature;
  double zero_tol = 0.0;
  int sweeps = 0;

  int sign_of(std::size_t k) const;  // +1, 0 or -1 after zero_tol classification
};

/// n points realizing a metric under the diagonal form
/// sum_k metric_signs[k] * (a_k - b_k)^2. The ambient dimension is
/// max(4, n - 1); unused axes carry sign 0 and zero coordinates.
struct MinkowskiEmbedding {
  std::vector<std::vector<double>> coords;
  std::vector<int> metric_signs;
  std::optional<std::size_t> time_axis;

  std::size_t points() const noexcept { return coords.size(); }
  std::size_t ambient_dim() const noexcept { return metric_signs.size(); }
  /// W(a - b) for two ambient vectors.
  double form(std::span<const double> a, std::span<const double> b) const;
  double form(std::span<const double> v) const;
  double squared_distance(std::size_t i, std::size_t j) const;
};

QuadraticForm associated_form(const FiniteMetricSpace& space, std::size_t base_index);
inline QuadraticForm associated_form(const FiniteMetricSpace& space) {
  return associated_form(space, space.size() - 1);
}

/// Throws NoConvergence when the Jacobi sweep cap is hit.
Spectrum eigendecompose(const QuadraticForm& form, double zero_tol_rel = kDefaultZeroTol);

bool is_euclidean(const Spectrum& spectrum);

/// Throws NotPSD when the spectrum has a negative eigenvalue.
MinkowskiEmbedding euclidean_embedding(const Spectrum& spectrum, const QuadraticForm& form);

/// Requires exactly one negative eigenvalue: NotMinkowski for PSD input,
/// TooManyNegativeEigenvaluesError otherwise. Kernel axes keep the unscaled
/// eigenframe coordinate (sign 0) so the simplex stays affinely independent.
MinkowskiEmbedding minkowski_embedding(const Spectrum& spectrum, const QuadraticForm& form);

}  // namespace cat5
