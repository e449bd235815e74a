#include "awaken/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace awaken {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::trace() const {
  if (rows_ != cols_) throw std::invalid_argument("trace of a non-square matrix");
  double s = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) s += (*this)(i, i);
  return s;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: inner dimension mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ci = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      auto bk = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

static void require_same_dims(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("matrix dimension mismatch");
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  require_same_dims(a, b);
  Matrix c = a;
  for (std::size_t i = 0; i < c.storage().size(); ++i) c.storage()[i] += b.storage()[i];
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same_dims(a, b);
  Matrix c = a;
  for (std::size_t i = 0; i < c.storage().size(); ++i) c.storage()[i] -= b.storage()[i];
  return c;
}

SymmetricEigen jacobi_eigen(const Matrix& input, double tolerance, int max_sweeps) {
  const std::size_t n = input.rows();
  if (input.cols() != n) throw std::invalid_argument("jacobi_eigen: matrix is not square");
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (input(i, j) + input(j, i));
  Matrix v = Matrix::identity(n);

  double scale = 0.0;
  for (double x : a.storage()) scale += x * x;
  scale = std::sqrt(scale);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (std::sqrt(off) <= tolerance * scale || off == 0.0) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });
  SymmetricEigen out{std::vector<double>(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

Matrix sqrt_psd(const Matrix& a, double tolerance) {
  const auto eig = jacobi_eigen(a);
  const std::size_t n = a.rows();
  const double scale = std::max(1.0, eig.values.empty() ? 0.0 : std::abs(eig.values.front()));
  Matrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    double lambda = eig.values[k];
    if (lambda < -tolerance * scale) {
      throw std::domain_error("sqrt_psd: matrix is not positive semidefinite (eigenvalue " +
                              std::to_string(lambda) + ")");
    }
    const double r = std::sqrt(std::max(lambda, 0.0));
    if (r == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const double vi = r * eig.vectors(i, k);
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vi * eig.vectors(j, k);
    }
  }
  return out;
}

std::vector<double> column_means(const Matrix& points) {
  if (points.rows() == 0) throw std::invalid_argument("column_means: no rows");
  std::vector<double> m(points.cols(), 0.0);
  for (std::size_t i = 0; i < points.rows(); ++i)
    for (std::size_t j = 0; j < points.cols(); ++j) m[j] += points(i, j);
  for (double& x : m) x /= static_cast<double>(points.rows());
  return m;
}

Matrix sample_covariance(const Matrix& points) {
  const std::size_t n = points.rows();
  const std::size_t d = points.cols();
  if (n < 2) throw std::invalid_argument("sample_covariance: need at least 2 points");
  const auto mu = column_means(points);
  Matrix cov(d, d);
  std::vector<double> c(d);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t j = 0; j < d; ++j) c[j] = points(r, j) - mu[j];
    for (std::size_t i = 0; i < d; ++i) {
      auto row = cov.row(i);
      for (std::size_t j = i; j < d; ++j) row[j] += c[i] * c[j];
    }
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      cov(i, j) /= static_cast<double>(n - 1);
      cov(j, i) = cov(i, j);
    }
  return cov;
}

PrincipalAxisStats principal_axis_stats(const Matrix& points) {
  const std::size_t n = points.rows();
  const std::size_t d = points.cols();
  if (n < 2) throw std::invalid_argument("principal_axis_stats: need at least 2 points");
  const auto mu = column_means(points);
  Matrix centered(n, d);
  double total = 0.0;
  double magnitude = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      centered(i, j) = points(i, j) - mu[j];
      total += centered(i, j) * centered(i, j);
      magnitude += points(i, j) * points(i, j);
    }

  PrincipalAxisStats out;
  out.projections.assign(n, 0.0);
  // Identical points leave only round-off from the mean.
  if (total <= 1e-24 * std::max(magnitude, 1e-300)) {
    out.degenerate = true;
    return out;
  }

  double lambda1 = 0.0;
  if (d > n) {
    Matrix gram(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < d; ++k) s += centered(i, k) * centered(j, k);
        gram(i, j) = gram(j, i) = s;
      }
    const auto eig = jacobi_eigen(gram);
    lambda1 = std::max(eig.values[0], 0.0);
    const double r = std::sqrt(lambda1);
    for (std::size_t i = 0; i < n; ++i) out.projections[i] = r * eig.vectors(i, 0);
  } else {
    Matrix scatter(d, d);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) scatter(i, j) += centered(r, i) * centered(r, j);
    const auto eig = jacobi_eigen(scatter);
    lambda1 = std::max(eig.values[0], 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) s += centered(i, k) * eig.vectors(k, 0);
      out.projections[i] = s;
    }
  }
  // Eigenvector sign is arbitrary; make the largest projection positive.
  std::size_t imax = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(out.projections[i]) > std::abs(out.projections[imax])) imax = i;
  if (out.projections[imax] < 0)
    for (double& p : out.projections) p = -p;

  out.variance_ratio = std::clamp(lambda1 / total, 0.0, 1.0);
  return out;
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double pearson_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) throw std::invalid_argument("correlation: need two equal-length series");
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

double spearman_correlation(std::span<const double> a, std::span<const double> b) {
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  return pearson_correlation(ra, rb);
}

}  // namespace awaken
