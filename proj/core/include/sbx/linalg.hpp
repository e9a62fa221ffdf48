#pragma once

// Dense row-major matrices of doubles and the handful of products the
// auto-encoder needs. Every product accumulates each output cell in
// ascending index order, so results are bit-reproducible.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace sbx {

using Vector = std::vector<double>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  /// "RxC", used in error messages.
  std::string shape() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// a · b. Throws DimensionError naming both shapes when a.cols != b.rows.
Matrix matmul(const Matrix& a, const Matrix& b);

/// a · bᵀ without materialising the transpose.
Matrix matmul_transposed_b(const Matrix& a, const Matrix& b);

/// aᵀ · b without materialising the transpose.
Matrix matmul_transposed_a(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& a);

/// m · x
Vector matvec(const Matrix& m, std::span<const double> x);
/// mᵀ · x
Vector matvec_transposed(const Matrix& m, std::span<const double> x);

/// Gathers the given rows into a new matrix, in order.
Matrix select_rows(const Matrix& m, std::span<const std::size_t> indices);

/// Single-row matrix holding a copy of v.
Matrix row_matrix(std::span<const double> v);

bool all_finite(std::span<const double> v) noexcept;

}  // namespace sbx
