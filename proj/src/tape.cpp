#include "hategraph/tape.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hategraph {

EdgeStructure make_edge_structure(const Csr& adj, bool add_self_loops) {
  EdgeStructure es;
  es.n = adj.nrows;
  es.offsets.assign(adj.nrows + 1, 0);
  for (std::int64_t r = 0; r < adj.nrows; ++r) {
    bool has_diag = false;
    for (std::int64_t e = adj.offsets[r]; e < adj.offsets[r + 1]; ++e)
      if (adj.col[e] == r) has_diag = true;
    bool insert_diag = add_self_loops && !has_diag;
    bool inserted = false;
    for (std::int64_t e = adj.offsets[r]; e < adj.offsets[r + 1]; ++e) {
      std::int32_t c = adj.col[e];
      if (insert_diag && !inserted && c > r) {
        es.col.push_back(static_cast<std::int32_t>(r));
        inserted = true;
      }
      es.col.push_back(c);
    }
    if (insert_diag && !inserted) es.col.push_back(static_cast<std::int32_t>(r));
    es.offsets[r + 1] = static_cast<std::int64_t>(es.col.size());
  }
  es.row.resize(es.col.size());
  for (std::int64_t r = 0; r < es.n; ++r)
    for (std::int64_t e = es.offsets[r]; e < es.offsets[r + 1]; ++e)
      es.row[e] = static_cast<std::int32_t>(r);
  return es;
}

int Tape::push(Matrix value, bool needs_grad, std::function<void(Tape&)> back) {
  Node n;
  n.grad = Matrix(value.rows, value.cols);
  n.val = std::move(value);
  n.needs_grad = needs_grad;
  n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

int Tape::leaf(Matrix value, bool needs_grad) {
  return push(std::move(value), needs_grad, nullptr);
}

int Tape::matmul(int a, int b) {
  const Matrix& A = val(a);
  const Matrix& B = val(b);
  Matrix C = hategraph::matmul(A, B);
  bool ng = nodes_[a].needs_grad || nodes_[b].needs_grad;
  int id = push(std::move(C), ng, nullptr);
  nodes_[id].back = [a, b, id](Tape& t) {
    const Matrix& g = t.grad(id);
    if (t.nodes_[a].needs_grad) add_inplace(t.grad_mut(a), matmul_nt(g, t.val(b)));
    if (t.nodes_[b].needs_grad) add_inplace(t.grad_mut(b), matmul_tn(t.val(a), g));
  };
  return id;
}

int Tape::spmm(const Csr* m, const Csr* mt, int x) {
  Matrix Y = hategraph::spmm(*m, val(x));
  bool ng = nodes_[x].needs_grad;
  int id = push(std::move(Y), ng, nullptr);
  nodes_[id].back = [mt, x, id](Tape& t) {
    if (t.nodes_[x].needs_grad)
      add_inplace(t.grad_mut(x), hategraph::spmm(*mt, t.grad(id)));
  };
  return id;
}

int Tape::add(int a, int b) {
  Matrix Y = val(a);
  add_inplace(Y, val(b));
  bool ng = nodes_[a].needs_grad || nodes_[b].needs_grad;
  int id = push(std::move(Y), ng, nullptr);
  nodes_[id].back = [a, b, id](Tape& t) {
    const Matrix& g = t.grad(id);
    if (t.nodes_[a].needs_grad) add_inplace(t.grad_mut(a), g);
    if (t.nodes_[b].needs_grad) add_inplace(t.grad_mut(b), g);
  };
  return id;
}

int Tape::sub(int a, int b) {
  Matrix Y = val(a);
  const Matrix& B = val(b);
  if (!Y.same_shape(B)) throw std::invalid_argument("sub: shape mismatch");
  for (std::size_t i = 0; i < Y.a.size(); ++i) Y.a[i] -= B.a[i];
  bool ng = nodes_[a].needs_grad || nodes_[b].needs_grad;
  int id = push(std::move(Y), ng, nullptr);
  nodes_[id].back = [a, b, id](Tape& t) {
    const Matrix& g = t.grad(id);
    if (t.nodes_[a].needs_grad) add_inplace(t.grad_mut(a), g);
    if (t.nodes_[b].needs_grad) {
      Matrix& gb = t.grad_mut(b);
      for (std::size_t i = 0; i < gb.a.size(); ++i) gb.a[i] -= g.a[i];
    }
  };
  return id;
}

int Tape::scale(int a, double c) {
  Matrix Y = val(a);
  for (double& v : Y.a) v *= c;
  int id = push(std::move(Y), nodes_[a].needs_grad, nullptr);
  nodes_[id].back = [a, c, id](Tape& t) {
    if (!t.nodes_[a].needs_grad) return;
    Matrix& ga = t.grad_mut(a);
    const Matrix& g = t.grad(id);
    for (std::size_t i = 0; i < ga.a.size(); ++i) ga.a[i] += c * g.a[i];
  };
  return id;
}

int Tape::relu(int a) { return leaky_relu(a, 0.0); }

int Tape::leaky_relu(int a, double slope) {
  Matrix Y = val(a);
  for (double& v : Y.a) v = v > 0.0 ? v : slope * v;
  int id = push(std::move(Y), nodes_[a].needs_grad, nullptr);
  nodes_[id].back = [a, slope, id](Tape& t) {
    if (!t.nodes_[a].needs_grad) return;
    Matrix& ga = t.grad_mut(a);
    const Matrix& g = t.grad(id);
    const Matrix& in = t.val(a);
    for (std::size_t i = 0; i < ga.a.size(); ++i)
      ga.a[i] += (in.a[i] > 0.0 ? 1.0 : slope) * g.a[i];
  };
  return id;
}

int Tape::dropout(int a, double rate, Rng& rng) {
  if (rate < 0.0 || rate >= 1.0) throw std::invalid_argument("dropout rate in [0,1)");
  Matrix Y = val(a);
  std::vector<std::uint8_t> mask(Y.a.size(), 1);
  if (rate > 0.0) {
    double keep = 1.0 - rate;
    double inv = 1.0 / keep;
    for (std::size_t i = 0; i < Y.a.size(); ++i) {
      if (rng.real01() < rate) {
        mask[i] = 0;
        Y.a[i] = 0.0;
      } else {
        Y.a[i] *= inv;  // inverted scaling: inference needs no rescale
      }
    }
  }
  int id = push(std::move(Y), nodes_[a].needs_grad, nullptr);
  double inv = rate > 0.0 ? 1.0 / (1.0 - rate) : 1.0;
  nodes_[id].back = [a, id, inv, mask = std::move(mask)](Tape& t) {
    if (!t.nodes_[a].needs_grad) return;
    Matrix& ga = t.grad_mut(a);
    const Matrix& g = t.grad(id);
    for (std::size_t i = 0; i < ga.a.size(); ++i)
      if (mask[i]) ga.a[i] += inv * g.a[i];
  };
  return id;
}

int Tape::log_softmax_rows(int a) {
  Matrix Y = val(a);
  for (std::int64_t i = 0; i < Y.rows; ++i) {
    double* r = Y.row(i);
    double mx = r[0];
    for (std::int64_t j = 1; j < Y.cols; ++j) mx = std::max(mx, r[j]);
    double sum = 0.0;
    for (std::int64_t j = 0; j < Y.cols; ++j) sum += std::exp(r[j] - mx);
    double lse = mx + std::log(sum);
    for (std::int64_t j = 0; j < Y.cols; ++j) r[j] -= lse;
  }
  int id = push(std::move(Y), nodes_[a].needs_grad, nullptr);
  nodes_[id].back = [a, id](Tape& t) {
    if (!t.nodes_[a].needs_grad) return;
    Matrix& ga = t.grad_mut(a);
    const Matrix& g = t.grad(id);
    const Matrix& y = t.val(id);
    for (std::int64_t i = 0; i < y.rows; ++i) {
      double gsum = 0.0;
      for (std::int64_t j = 0; j < y.cols; ++j) gsum += g(i, j);
      for (std::int64_t j = 0; j < y.cols; ++j)
        ga(i, j) += g(i, j) - std::exp(y(i, j)) * gsum;
    }
  };
  return id;
}

int Tape::nll_masked(int logp, std::vector<int> labels, std::vector<std::int32_t> mask) {
  if (mask.empty()) throw std::invalid_argument("empty mask");
  const Matrix& lp = val(logp);
  if (static_cast<std::int64_t>(labels.size()) != lp.rows)
    throw std::invalid_argument("labels size mismatch");
  double loss = 0.0;
  for (std::int32_t i : mask) {
    int y = labels[i];
    if (y < 0 || y >= lp.cols) throw std::invalid_argument("label out of range");
    loss -= lp(i, y);
  }
  Matrix out(1, 1);
  out(0, 0) = loss / static_cast<double>(mask.size());
  int id = push(std::move(out), nodes_[logp].needs_grad, nullptr);
  nodes_[id].back = [logp, id, labels = std::move(labels),
                     mask = std::move(mask)](Tape& t) {
    if (!t.nodes_[logp].needs_grad) return;
    double g = t.grad(id)(0, 0) / static_cast<double>(mask.size());
    Matrix& gl = t.grad_mut(logp);
    for (std::int32_t i : mask) gl(i, labels[i]) -= g;
  };
  return id;
}

int Tape::gather_rows(int a, const std::vector<std::int32_t>* index) {
  const Matrix& A = val(a);
  Matrix Y(static_cast<std::int64_t>(index->size()), A.cols);
  for (std::size_t e = 0; e < index->size(); ++e) {
    const double* src = A.row((*index)[e]);
    double* dst = Y.row(static_cast<std::int64_t>(e));
    for (std::int64_t j = 0; j < A.cols; ++j) dst[j] = src[j];
  }
  int id = push(std::move(Y), nodes_[a].needs_grad, nullptr);
  nodes_[id].back = [a, id, index](Tape& t) {
    if (!t.nodes_[a].needs_grad) return;
    Matrix& ga = t.grad_mut(a);
    const Matrix& g = t.grad(id);
    for (std::size_t e = 0; e < index->size(); ++e) {
      double* dst = ga.row((*index)[e]);
      const double* src = g.row(static_cast<std::int64_t>(e));
      for (std::int64_t j = 0; j < ga.cols; ++j) dst[j] += src[j];
    }
  };
  return id;
}

int Tape::segment_softmax(int e, const EdgeStructure* es) {
  const Matrix& E = val(e);
  if (E.cols != 1 || E.rows != es->num_edges())
    throw std::invalid_argument("segment_softmax expects one score per edge");
  Matrix Y(E.rows, 1);
  for (std::int64_t r = 0; r < es->n; ++r) {
    std::int64_t lo = es->offsets[r], hi = es->offsets[r + 1];
    if (lo == hi) continue;
    double mx = E(lo, 0);
    for (std::int64_t k = lo + 1; k < hi; ++k) mx = std::max(mx, E(k, 0));
    double sum = 0.0;
    for (std::int64_t k = lo; k < hi; ++k) sum += std::exp(E(k, 0) - mx);
    for (std::int64_t k = lo; k < hi; ++k) Y(k, 0) = std::exp(E(k, 0) - mx) / sum;
  }
  int id = push(std::move(Y), nodes_[e].needs_grad, nullptr);
  nodes_[id].back = [e, id, es](Tape& t) {
    if (!t.nodes_[e].needs_grad) return;
    Matrix& ge = t.grad_mut(e);
    const Matrix& g = t.grad(id);
    const Matrix& y = t.val(id);
    for (std::int64_t r = 0; r < es->n; ++r) {
      std::int64_t lo = es->offsets[r], hi = es->offsets[r + 1];
      double dotga = 0.0;
      for (std::int64_t k = lo; k < hi; ++k) dotga += g(k, 0) * y(k, 0);
      for (std::int64_t k = lo; k < hi; ++k)
        ge(k, 0) += y(k, 0) * (g(k, 0) - dotga);
    }
  };
  return id;
}

int Tape::edge_aggregate(int alpha, int x, const EdgeStructure* es) {
  const Matrix& A = val(alpha);
  const Matrix& X = val(x);
  if (A.cols != 1 || A.rows != es->num_edges())
    throw std::invalid_argument("edge_aggregate expects one weight per edge");
  if (X.rows != es->n) throw std::invalid_argument("edge_aggregate: row mismatch");
  Matrix Y(es->n, X.cols);
  for (std::int64_t r = 0; r < es->n; ++r) {
    double* yr = Y.row(r);
    for (std::int64_t k = es->offsets[r]; k < es->offsets[r + 1]; ++k) {
      double w = A(k, 0);
      const double* xr = X.row(es->col[k]);
      for (std::int64_t j = 0; j < X.cols; ++j) yr[j] += w * xr[j];
    }
  }
  bool ng = nodes_[alpha].needs_grad || nodes_[x].needs_grad;
  int id = push(std::move(Y), ng, nullptr);
  nodes_[id].back = [alpha, x, id, es](Tape& t) {
    const Matrix& g = t.grad(id);
    const Matrix& A = t.val(alpha);
    const Matrix& X = t.val(x);
    if (t.nodes_[alpha].needs_grad) {
      Matrix& ga = t.grad_mut(alpha);
      for (std::int64_t k = 0; k < es->num_edges(); ++k)
        ga(k, 0) += dot(g.row(es->row[k]), X.row(es->col[k]), X.cols);
    }
    if (t.nodes_[x].needs_grad) {
      Matrix& gx = t.grad_mut(x);
      for (std::int64_t k = 0; k < es->num_edges(); ++k) {
        double w = A(k, 0);
        double* dst = gx.row(es->col[k]);
        const double* src = g.row(es->row[k]);
        for (std::int64_t j = 0; j < gx.cols; ++j) dst[j] += w * src[j];
      }
    }
  };
  return id;
}

int Tape::edge_cosine(int h, const EdgeStructure* es) {
  const Matrix& H = val(h);
  if (H.rows != es->n) throw std::invalid_argument("edge_cosine: row mismatch");
  std::vector<double> norms(es->n);
  for (std::int64_t i = 0; i < es->n; ++i)
    norms[i] = std::sqrt(dot(H.row(i), H.row(i), H.cols));
  Matrix Y(es->num_edges(), 1);
  for (std::int64_t k = 0; k < es->num_edges(); ++k) {
    double nu = norms[es->row[k]], nv = norms[es->col[k]];
    Y(k, 0) = nu > 0.0 && nv > 0.0
                  ? dot(H.row(es->row[k]), H.row(es->col[k]), H.cols) / (nu * nv)
                  : 0.0;  // zero-norm rows contribute cosine 0
  }
  int id = push(std::move(Y), nodes_[h].needs_grad, nullptr);
  nodes_[id].back = [h, id, es, norms = std::move(norms)](Tape& t) {
    if (!t.nodes_[h].needs_grad) return;
    Matrix& gh = t.grad_mut(h);
    const Matrix& g = t.grad(id);
    const Matrix& y = t.val(id);
    const Matrix& H = t.val(h);
    for (std::int64_t k = 0; k < es->num_edges(); ++k) {
      double gc = g(k, 0);
      if (gc == 0.0) continue;
      std::int32_t u = es->row[k], v = es->col[k];
      double nu = norms[u], nv = norms[v];
      if (nu <= 0.0 || nv <= 0.0) continue;
      double c = y(k, 0);
      const double* hu = H.row(u);
      const double* hv = H.row(v);
      double* gu = gh.row(u);
      double* gv = gh.row(v);
      for (std::int64_t j = 0; j < H.cols; ++j) {
        gu[j] += gc * (hv[j] / (nu * nv) - c * hu[j] / (nu * nu));
        gv[j] += gc * (hu[j] / (nu * nv) - c * hv[j] / (nv * nv));
      }
    }
  };
  return id;
}

int Tape::scalar_mul(int x, int scalar_node) {
  const Matrix& S = val(scalar_node);
  if (S.rows != 1 || S.cols != 1) throw std::invalid_argument("scalar node must be 1x1");
  double s = S(0, 0);
  Matrix Y = val(x);
  for (double& v : Y.a) v *= s;
  bool ng = nodes_[x].needs_grad || nodes_[scalar_node].needs_grad;
  int id = push(std::move(Y), ng, nullptr);
  nodes_[id].back = [x, scalar_node, id](Tape& t) {
    const Matrix& g = t.grad(id);
    const Matrix& X = t.val(x);
    double s = t.val(scalar_node)(0, 0);
    if (t.nodes_[x].needs_grad) {
      Matrix& gx = t.grad_mut(x);
      for (std::size_t i = 0; i < gx.a.size(); ++i) gx.a[i] += s * g.a[i];
    }
    if (t.nodes_[scalar_node].needs_grad) {
      double acc = 0.0;
      for (std::size_t i = 0; i < X.a.size(); ++i) acc += g.a[i] * X.a[i];
      t.grad_mut(scalar_node)(0, 0) += acc;
    }
  };
  return id;
}

void Tape::backward(int root) {
  const Matrix& r = val(root);
  if (r.rows != 1 || r.cols != 1)
    throw std::invalid_argument("backward root must be a scalar");
  grad_mut(root)(0, 0) = 1.0;
  for (int i = root; i >= 0; --i) {
    if (nodes_[i].back && nodes_[i].needs_grad) nodes_[i].back(*this);
  }
}

}  // namespace hategraph
