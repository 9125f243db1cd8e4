#pragma once

#include <cstdint>
#include <vector>

namespace hategraph {

// Dense row-major matrix of doubles.
struct Matrix {
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(std::int64_t r, std::int64_t c)
      : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

  double& operator()(std::int64_t i, std::int64_t j) { return a[i * cols + j]; }
  double operator()(std::int64_t i, std::int64_t j) const { return a[i * cols + j]; }
  double* row(std::int64_t i) { return a.data() + i * cols; }
  const double* row(std::int64_t i) const { return a.data() + i * cols; }

  bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }
};

double dot(const double* x, const double* y, std::int64_t n);

Matrix matmul(const Matrix& A, const Matrix& B);     // A * B
Matrix matmul_tn(const Matrix& A, const Matrix& B);  // A^T * B
Matrix matmul_nt(const Matrix& A, const Matrix& B);  // A * B^T
Matrix transpose(const Matrix& A);
void add_inplace(Matrix& acc, const Matrix& x);
void scale_inplace(Matrix& m, double c);

}  // namespace hategraph
