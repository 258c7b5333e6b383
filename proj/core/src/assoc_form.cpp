#include "cat5/assoc_form.hpp"

#include <algorithm>
#include <cmath>

#include "cat5/error.hpp"

namespace cat5 {

int Spectrum::sign_of(std::size_t k) const {
  const double l = eigenvalues.at(k);
  if (l > zero_tol) return 1;
  if (l < -zero_tol) return -1;
  return 0;
}

double MinkowskiEmbedding::form(std::span<const double> a, std::span<const double> b) const {
  double s = 0.0;
  for (std::size_t k = 0; k < metric_signs.size(); ++k) {
    const double diff = a[k] - b[k];
    s += metric_signs[k] * diff * diff;
  }
  return s;
}

double MinkowskiEmbedding::form(std::span<const double> v) const {
  double s = 0.0;
  for (std::size_t k = 0; k < metric_signs.size(); ++k) s += metric_signs[k] * v[k] * v[k];
  return s;
}

double MinkowskiEmbedding::squared_distance(std::size_t i, std::size_t j) const {
  return form(coords.at(i), coords.at(j));
}

QuadraticForm associated_form(const FiniteMetricSpace& space, std::size_t base) {
  const std::size_t n = space.size();
  if (base >= n) throw Error(ErrorCode::InvalidArgument, "base_index out of range");
  QuadraticForm f;
  f.dim = n - 1;
  f.base_index = base;
  for (std::size_t i = 0; i < n; ++i)
    if (i != base) f.indices.push_back(i);
  f.b = Matrix(f.dim, f.dim);
  for (std::size_t a = 0; a < f.dim; ++a)
    for (std::size_t c = 0; c < f.dim; ++c) {
      const std::size_t i = f.indices[a];
      const std::size_t j = f.indices[c];
      const double dib = space(i, base);
      const double djb = space(j, base);
      const double dij = space(i, j);
      f.b(a, c) = 0.5 * (dib * dib + djb * djb - dij * dij);
    }
  return f;
}

Spectrum eigendecompose(const QuadraticForm& form, double zero_tol_rel) {
  if (form.dim > kMaxPoints - 1)
    throw Error(ErrorCode::InvalidArgument, "form dimension exceeds 15");
  const auto eig = jacobi_eigen(form.b, kJacobiSweepCap);
  if (!eig)
    throw Error(ErrorCode::NoConvergence,
                "Jacobi iteration did not converge within " +
                    std::to_string(kJacobiSweepCap) + " sweeps");
  Spectrum s;
  s.eigenvalues = eig->values;
  s.frame = eig->vectors;
  s.sweeps = eig->sweeps;
  double radius = 0.0;
  for (double l : s.eigenvalues) radius = std::max(radius, std::abs(l));
  s.zero_tol = zero_tol_rel * std::max(1.0, radius);
  for (std::size_t k = 0; k < s.eigenvalues.size(); ++k) {
    switch (s.sign_of(k)) {
      case 1: ++s.signature.n_pos; break;
      case -1: ++s.signature.n_neg; break;
      default: ++s.signature.n_zero; break;
    }
  }
  return s;
}

bool is_euclidean(const Spectrum& spectrum) { return spectrum.signature.n_neg == 0; }

namespace {

// Rows of the eigenframe are the coordinates of v_i - v_base. Eigenvalues are
// sorted descending, so axis order is positive, zero, negative.
MinkowskiEmbedding embed(const Spectrum& spectrum, const QuadraticForm& form,
                         bool unscaled_kernel) {
  const std::size_t dim = form.dim;
  const std::size_t n = dim + 1;
  const std::size_t ambient = std::max<std::size_t>(4, dim);
  MinkowskiEmbedding e;
  e.metric_signs.assign(ambient, 0);
  e.coords.assign(n, std::vector<double>(ambient, 0.0));
  for (std::size_t k = 0; k < dim; ++k) {
    const int sign = spectrum.sign_of(k);
    e.metric_signs[k] = sign;
    if (sign < 0) e.time_axis = k;
    const double scale = (sign == 0 && unscaled_kernel)
                             ? 1.0
                             : std::sqrt(std::abs(spectrum.eigenvalues[k]));
    for (std::size_t a = 0; a < dim; ++a)
      e.coords[form.indices[a]][k] = scale * spectrum.frame(a, k);
  }
  return e;
}

}  // namespace

MinkowskiEmbedding euclidean_embedding(const Spectrum& spectrum, const QuadraticForm& form) {
  if (!is_euclidean(spectrum))
    throw Error(ErrorCode::NotPSD, "associated form has a negative eigenvalue");
  return embed(spectrum, form, false);
}

MinkowskiEmbedding minkowski_embedding(const Spectrum& spectrum, const QuadraticForm& form) {
  const int neg = spectrum.signature.n_neg;
  if (neg == 0)
    throw Error(ErrorCode::NotMinkowski,
                "associated form is positive semidefinite; use the Euclidean embedding");
  if (neg > 1)
    throw TooManyNegativeEigenvaluesError(
        neg, "associated form has " + std::to_string(neg) + " negative eigenvalues");
  return embed(spectrum, form, true);
}

}  // namespace cat5
