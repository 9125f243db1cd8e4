#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hategraph/graph.hpp"
#include "hategraph/matrix.hpp"
#include "hategraph/rng.hpp"

namespace hategraph {

// Graph structure shared by attention layers: CSR over rows with self-loops
// included, plus the per-edge source row for gather/scatter.
struct EdgeStructure {
  std::int64_t n = 0;
  std::vector<std::int64_t> offsets;  // n + 1
  std::vector<std::int32_t> col;      // per edge: target node
  std::vector<std::int32_t> row;      // per edge: source node (segment id)

  std::int64_t num_edges() const { return static_cast<std::int64_t>(col.size()); }
};

EdgeStructure make_edge_structure(const Csr& adj, bool add_self_loops);

// Reverse-mode tape over dense matrices plus constant sparse operators.
// Nodes are recorded in evaluation order, so the reverse sweep visits them in
// reverse topological order exactly once. Sparse operands passed by pointer
// must outlive the tape.
class Tape {
 public:
  int leaf(Matrix value, bool needs_grad = false);

  int matmul(int a, int b);
  int spmm(const Csr* m, const Csr* mt, int x);
  int add(int a, int b);
  int sub(int a, int b);
  int scale(int a, double c);
  int relu(int a);
  int leaky_relu(int a, double slope);
  int dropout(int a, double rate, Rng& rng);
  int log_softmax_rows(int a);
  // -mean over masked rows of logp[row, label[row]]
  int nll_masked(int logp, std::vector<int> labels, std::vector<std::int32_t> mask);
  int gather_rows(int a, const std::vector<std::int32_t>* index);
  int segment_softmax(int e, const EdgeStructure* es);
  int edge_aggregate(int alpha, int x, const EdgeStructure* es);
  int edge_cosine(int h, const EdgeStructure* es);
  int scalar_mul(int x, int scalar_node);  // scalar_node is 1x1

  const Matrix& val(int id) const { return nodes_[id].val; }
  const Matrix& grad(int id) const { return nodes_[id].grad; }

  // Seeds d(root)/d(root) = 1 (root must be 1x1) and accumulates gradients
  // into every needs_grad node.
  void backward(int root);

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix val;
    Matrix grad;
    bool needs_grad = false;
    std::function<void(Tape&)> back;  // empty for leaves
  };

  int push(Matrix value, bool needs_grad, std::function<void(Tape&)> back);
  Matrix& grad_mut(int id) { return nodes_[id].grad; }

  std::vector<Node> nodes_;
};

}  // namespace hategraph
