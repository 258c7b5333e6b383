#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace cat5 {

/// Dense row-major matrix for the small (n <= 16) problems in this library.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> init);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::vector<std::vector<double>> to_rows() const;
  Matrix transposed() const;
  double max_abs() const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator*(double s, const Matrix& a);
  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct SymmetricEigen {
  std::vector<double> values;  // descending
  Matrix vectors;              // column k pairs with values[k]
  int sweeps = 0;
};

/// Cyclic Jacobi with threshold sweeps. Returns nullopt if the off-diagonal
/// mass has not vanished after max_sweeps.
std::optional<SymmetricEigen> jacobi_eigen(const Matrix& a, int max_sweeps = 100);

/// Solves a·x = b by Gaussian elimination with partial pivoting; nullopt when
/// a pivot falls below rel_tol times the largest entry.
std::optional<std::vector<double>> solve_linear(Matrix a, std::vector<double> b,
                                                double rel_tol = 1e-14);

/// Moore-Penrose pseudo-inverse of a symmetric matrix.
Matrix symmetric_pinv(const Matrix& a, double rel_tol = 1e-12);

double determinant(Matrix a);
double det3(std::span<const double, 3> a, std::span<const double, 3> b,
            std::span<const double, 3> c);

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

}  // namespace cat5
