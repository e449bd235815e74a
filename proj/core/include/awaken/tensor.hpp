#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace awaken {

using Shape = std::vector<std::size_t>;

std::size_t shape_size(const Shape& shape);
std::string shape_string(const Shape& shape);

// Dense row-major tensor of doubles.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, double fill = 0.0);
  Tensor(Shape shape, std::vector<double> data);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.size(); }
  std::size_t size() const noexcept { return data_.size(); }
  std::size_t dim(std::size_t axis) const;

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }
  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }
  double& operator[](std::size_t i) noexcept { return data_[i]; }
  double operator[](std::size_t i) const noexcept { return data_[i]; }

  // Contiguous block at position `index` of the leading axis.
  std::size_t slice_size() const;
  std::span<double> slice(std::size_t index);
  std::span<const double> slice(std::size_t index) const;

  Tensor reshaped(Shape shape) const;
  void fill(double value);

  Tensor& operator+=(const Tensor& other);
  Tensor& operator-=(const Tensor& other);
  Tensor& operator*=(double k);

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  Shape shape_;
  std::vector<double> data_;
};

Tensor operator+(Tensor a, const Tensor& b);
Tensor operator-(Tensor a, const Tensor& b);
Tensor operator*(double k, Tensor a);

// y += alpha * x
void axpy(double alpha, const Tensor& x, Tensor& y);

void require_same_shape(const Tensor& a, const Tensor& b, std::string_view what);
void require_finite(const Tensor& t, std::string_view what);
bool all_finite(std::span<const double> values);

double dot(std::span<const double> a, std::span<const double> b);
double dot(const Tensor& a, const Tensor& b);
double norm(std::span<const double> a);
double norm(const Tensor& a);
double sum(std::span<const double> a);
double mean(std::span<const double> a);
double mean_squared_difference(std::span<const double> a, std::span<const double> b);

// Angle in [0, pi]; throws std::invalid_argument on a zero-norm operand.
double angle_between(std::span<const double> a, std::span<const double> b);
double angle_between(const Tensor& a, const Tensor& b);

}  // namespace awaken
