#include "hategraph/matrix.hpp"

#include <stdexcept>

#include "hategraph/threads.hpp"

namespace hategraph {

double dot(const double* x, const double* y, std::int64_t n) {
  double s = 0.0;
  for (std::int64_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

Matrix matmul(const Matrix& A, const Matrix& B) {
  if (A.cols != B.rows) throw std::invalid_argument("matmul: shape mismatch");
  Matrix C(A.rows, B.cols);
  parallel_for(A.rows, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      const double* ai = A.row(i);
      double* ci = C.row(i);
      for (std::int64_t k = 0; k < A.cols; ++k) {
        double aik = ai[k];
        if (aik == 0.0) continue;
        const double* bk = B.row(k);
        for (std::int64_t j = 0; j < B.cols; ++j) ci[j] += aik * bk[j];
      }
    }
  });
  return C;
}

Matrix matmul_tn(const Matrix& A, const Matrix& B) {
  if (A.rows != B.rows) throw std::invalid_argument("matmul_tn: shape mismatch");
  Matrix C(A.cols, B.cols);
  // C[k][j] = sum_i A[i][k] * B[i][j]; serial over i keeps accumulation order fixed
  for (std::int64_t i = 0; i < A.rows; ++i) {
    const double* ai = A.row(i);
    const double* bi = B.row(i);
    for (std::int64_t k = 0; k < A.cols; ++k) {
      double aik = ai[k];
      if (aik == 0.0) continue;
      double* ck = C.row(k);
      for (std::int64_t j = 0; j < B.cols; ++j) ck[j] += aik * bi[j];
    }
  }
  return C;
}

Matrix matmul_nt(const Matrix& A, const Matrix& B) {
  if (A.cols != B.cols) throw std::invalid_argument("matmul_nt: shape mismatch");
  Matrix C(A.rows, B.rows);
  parallel_for(A.rows, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      const double* ai = A.row(i);
      double* ci = C.row(i);
      for (std::int64_t j = 0; j < B.rows; ++j) ci[j] = dot(ai, B.row(j), A.cols);
    }
  });
  return C;
}

Matrix transpose(const Matrix& A) {
  Matrix T(A.cols, A.rows);
  for (std::int64_t i = 0; i < A.rows; ++i)
    for (std::int64_t j = 0; j < A.cols; ++j) T(j, i) = A(i, j);
  return T;
}

void add_inplace(Matrix& acc, const Matrix& x) {
  if (!acc.same_shape(x)) throw std::invalid_argument("add_inplace: shape mismatch");
  for (std::size_t i = 0; i < acc.a.size(); ++i) acc.a[i] += x.a[i];
}

void scale_inplace(Matrix& m, double c) {
  for (double& v : m.a) v *= c;
}

}  // namespace hategraph
