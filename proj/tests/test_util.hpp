#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "hategraph/graph.hpp"
#include "hategraph/matrix.hpp"
#include "hategraph/rng.hpp"

namespace hategraph::testing {

inline double rel_err(double got, double want) {
  double denom = std::max({std::abs(got), std::abs(want), 1e-12});
  return std::abs(got - want) / denom;
}

inline double max_rel_err(const Matrix& got, const Matrix& want) {
  double worst = 0.0;
  for (std::size_t i = 0; i < got.a.size(); ++i)
    worst = std::max(worst, rel_err(got.a[i], want.a[i]));
  return worst;
}

inline double max_abs_err(const Matrix& got, const Matrix& want) {
  double worst = 0.0;
  for (std::size_t i = 0; i < got.a.size(); ++i)
    worst = std::max(worst, std::abs(got.a[i] - want.a[i]));
  return worst;
}

// plain dense product, the oracle for every sparse/tape route
inline Matrix dense_matmul(const Matrix& A, const Matrix& B) {
  Matrix C(A.rows, B.cols);
  for (std::int64_t i = 0; i < A.rows; ++i)
    for (std::int64_t j = 0; j < B.cols; ++j) {
      double s = 0.0;
      for (std::int64_t k = 0; k < A.cols; ++k) s += A(i, k) * B(k, j);
      C(i, j) = s;
    }
  return C;
}

inline Matrix random_matrix(std::int64_t r, std::int64_t c, Rng& rng,
                            double lo = -1.0, double hi = 1.0) {
  Matrix m(r, c);
  for (double& v : m.a) v = rng.uniform(lo, hi);
  return m;
}

inline DirectedGraph random_graph(std::int64_t n, double p, Rng& rng,
                                  bool weighted = false) {
  std::vector<Edge> edges;
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (rng.real01() < p)
        edges.push_back({static_cast<std::int32_t>(i), static_cast<std::int32_t>(j),
                         weighted ? rng.uniform(0.1, 2.0) : 1.0});
    }
  return build_graph(n, edges);
}

// central finite difference of a scalar function wrt one slot of a matrix
inline double fd_slot(const std::function<double()>& eval, double& slot,
                      double h = 1e-5) {
  double orig = slot;
  slot = orig + h;
  double up = eval();
  slot = orig - h;
  double down = eval();
  slot = orig;
  return (up - down) / (2.0 * h);
}

}  // namespace hategraph::testing
