#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hategraph/matrix.hpp"

namespace hategraph {

// Compressed sparse row matrix. Column indices strictly increasing per row.
struct Csr {
  std::int64_t nrows = 0;
  std::int64_t ncols = 0;
  std::vector<std::int64_t> offsets;  // size nrows + 1
  std::vector<std::int32_t> col;
  std::vector<double> val;

  std::int64_t nnz() const { return static_cast<std::int64_t>(col.size()); }
  bool has_entry(std::int32_t r, std::int32_t c) const;
};

Csr csr_transpose(const Csr& m);
Matrix csr_to_dense(const Csr& m);

struct Edge {
  std::int32_t src = 0;
  std::int32_t dst = 0;
  double weight = 1.0;
};

// Directed graph over dense node ids 0..n-1. Immutable once built.
// `names` maps dense id -> external id; empty when nodes are anonymous.
struct DirectedGraph {
  Csr adj;
  std::vector<std::string> names;

  std::int64_t num_nodes() const { return adj.nrows; }
  std::int64_t num_edges() const { return adj.nnz(); }
  std::pair<std::int64_t, std::int64_t> out_range(std::int32_t u) const {
    return {adj.offsets[u], adj.offsets[u + 1]};
  }
};

// Duplicate (src,dst) pairs merge by weight summation. Self-loops kept as given.
// Throws on negative or non-finite weights and on out-of-range ids.
DirectedGraph build_graph(std::int64_t num_nodes, const std::vector<Edge>& edges,
                          std::vector<std::string> names = {});

DirectedGraph reverse(const DirectedGraph& g);

// Union of both edge directions; parallel opposing weights merge by max.
DirectedGraph symmetrize(const DirectedGraph& g);

enum class NormKind { SymmetricGcn, RowStochastic, ScaledLaplacian };

struct NormalizedAdjacency {
  Csr m;
  Csr mt;  // transpose, kept for reverse-mode propagation
  NormKind kind = NormKind::SymmetricGcn;
  double lambda_max = 0.0;  // populated for ScaledLaplacian
};

NormalizedAdjacency normalize(const DirectedGraph& g, NormKind kind);

// Sparse * dense; per-row accumulation order is fixed (CSR order), so results
// do not depend on the row partitioning used internally.
Matrix spmm(const Csr& m, const Matrix& x);
Matrix spmm(const NormalizedAdjacency& adj, const Matrix& x);

struct SubgraphResult {
  DirectedGraph graph;
  std::vector<std::int32_t> original_id;  // new dense id -> old dense id
};

// Seeds plus their in/out neighbors; non-seed nodes below min_posts dropped;
// all edges with both endpoints retained. Throws if the result is empty.
SubgraphResult extract_1_5_degree(const DirectedGraph& g,
                                  const std::vector<std::int32_t>& seeds,
                                  std::int64_t min_posts,
                                  const std::vector<std::int64_t>& post_counts);

// TSV edge list: src<TAB>dst[<TAB>weight], '#' comment lines skipped.
// External ids are mapped to dense ids in sorted order, so loading is
// independent of line order.
DirectedGraph load_edge_tsv(const std::string& path);
void save_edge_tsv(const DirectedGraph& g, const std::string& path);
void save_node_mapping_tsv(const DirectedGraph& g, const std::string& path);

}  // namespace hategraph
