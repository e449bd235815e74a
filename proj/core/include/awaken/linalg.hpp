#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace awaken {

// Small dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::vector<double>& storage() noexcept { return data_; }
  const std::vector<double>& storage() const noexcept { return data_; }

  Matrix transposed() const;
  double trace() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);

// Eigenvalues sorted descending; eigenvectors stored as the matching columns.
struct SymmetricEigen {
  std::vector<double> values;
  Matrix vectors;
};

// Cyclic Jacobi rotations. Input must be square; it is symmetrized first.
SymmetricEigen jacobi_eigen(const Matrix& a, double tolerance = 1e-15, int max_sweeps = 100);

// Square root of a symmetric PSD matrix. Eigenvalues below -tolerance*scale throw.
Matrix sqrt_psd(const Matrix& a, double tolerance = 1e-10);

// Sample covariance (divisor N-1) of the rows of `points`.
Matrix sample_covariance(const Matrix& points);
std::vector<double> column_means(const Matrix& points);

struct PrincipalAxisStats {
  double variance_ratio = 0.0;
  std::vector<double> projections;
  bool degenerate = false;
};

// PCA summary of N points (rows). Uses the N x N Gram matrix when d > N.
PrincipalAxisStats principal_axis_stats(const Matrix& points);

// Ranks with ties averaged, 1-based.
std::vector<double> average_ranks(std::span<const double> values);
double pearson_correlation(std::span<const double> a, std::span<const double> b);
double spearman_correlation(std::span<const double> a, std::span<const double> b);

}  // namespace awaken
