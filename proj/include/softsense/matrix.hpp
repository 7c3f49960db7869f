#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace softsense {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }
  const std::vector<double>& data() const noexcept { return data_; }

  std::string shape_string() const;
  bool all_finite() const;

  /// Rows picked by index, in the given order.
  Matrix gather_rows(std::span<const std::size_t> indices) const;
  Matrix transposed() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// a · bᵀ, shapes (n×k)·(m×k)ᵀ -> n×m.
Matrix matmul_nt(const Matrix& a, const Matrix& b);
/// aᵀ · b, shapes (n×k)ᵀ·(n×m) -> k×m.
Matrix matmul_tn(const Matrix& a, const Matrix& b);
/// a · b, shapes (n×k)·(k×m) -> n×m.
Matrix matmul(const Matrix& a, const Matrix& b);

Matrix hconcat(const Matrix& left, const Matrix& right);
Matrix vconcat(const Matrix& top, const Matrix& bottom);

/// Fixed-order dot product (four interleaved partial sums).
double dot(std::span<const double> a, std::span<const double> b);

void require_same_shape(const Matrix& a, const Matrix& b, const char* what);

}  // namespace softsense
