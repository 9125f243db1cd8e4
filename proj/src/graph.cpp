#include "hategraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "hategraph/io.hpp"
#include "hategraph/rng.hpp"
#include "hategraph/threads.hpp"

namespace hategraph {

bool Csr::has_entry(std::int32_t r, std::int32_t c) const {
  auto lo = col.begin() + offsets[r];
  auto hi = col.begin() + offsets[r + 1];
  auto it = std::lower_bound(lo, hi, c);
  return it != hi && *it == c;
}

Csr csr_transpose(const Csr& m) {
  Csr t;
  t.nrows = m.ncols;
  t.ncols = m.nrows;
  t.offsets.assign(t.nrows + 1, 0);
  for (std::int32_t c : m.col) t.offsets[c + 1]++;
  for (std::int64_t i = 0; i < t.nrows; ++i) t.offsets[i + 1] += t.offsets[i];
  t.col.resize(m.col.size());
  t.val.resize(m.val.size());
  std::vector<std::int64_t> cursor(t.offsets.begin(), t.offsets.end() - 1);
  for (std::int64_t r = 0; r < m.nrows; ++r) {
    for (std::int64_t e = m.offsets[r]; e < m.offsets[r + 1]; ++e) {
      std::int64_t pos = cursor[m.col[e]]++;
      t.col[pos] = static_cast<std::int32_t>(r);
      t.val[pos] = m.val[e];
    }
  }
  return t;
}

Matrix csr_to_dense(const Csr& m) {
  Matrix d(m.nrows, m.ncols);
  for (std::int64_t r = 0; r < m.nrows; ++r)
    for (std::int64_t e = m.offsets[r]; e < m.offsets[r + 1]; ++e)
      d(r, m.col[e]) = m.val[e];
  return d;
}

DirectedGraph build_graph(std::int64_t num_nodes, const std::vector<Edge>& edges,
                          std::vector<std::string> names) {
  if (num_nodes < 0) throw std::invalid_argument("negative node count");
  if (!names.empty() && static_cast<std::int64_t>(names.size()) != num_nodes)
    throw std::invalid_argument("name table size mismatch");
  for (const Edge& e : edges) {
    if (e.src < 0 || e.dst < 0 || e.src >= num_nodes || e.dst >= num_nodes)
      throw std::invalid_argument("edge endpoint out of range");
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight))
      throw std::invalid_argument("edge weight must be finite and >= 0");
  }
  std::vector<Edge> sorted = edges;
  std::sort(sorted.begin(), sorted.end(), [](const Edge& a, const Edge& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  });

  DirectedGraph g;
  g.adj.nrows = g.adj.ncols = num_nodes;
  g.adj.offsets.assign(num_nodes + 1, 0);
  g.names = std::move(names);
  g.adj.col.reserve(sorted.size());
  g.adj.val.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    double w = 0.0;
    while (j < sorted.size() && sorted[j].src == sorted[i].src &&
           sorted[j].dst == sorted[i].dst) {
      w += sorted[j].weight;
      ++j;
    }
    g.adj.col.push_back(sorted[i].dst);
    g.adj.val.push_back(w);
    g.adj.offsets[sorted[i].src + 1]++;
    i = j;
  }
  for (std::int64_t i = 0; i < num_nodes; ++i) g.adj.offsets[i + 1] += g.adj.offsets[i];
  return g;
}

DirectedGraph reverse(const DirectedGraph& g) {
  DirectedGraph r;
  r.adj = csr_transpose(g.adj);
  r.names = g.names;
  return r;
}

DirectedGraph symmetrize(const DirectedGraph& g) {
  std::map<std::pair<std::int32_t, std::int32_t>, double> merged;
  for (std::int64_t u = 0; u < g.num_nodes(); ++u) {
    for (std::int64_t e = g.adj.offsets[u]; e < g.adj.offsets[u + 1]; ++e) {
      std::int32_t v = g.adj.col[e];
      double w = g.adj.val[e];
      auto up = [&](std::int32_t a, std::int32_t b) {
        auto [it, fresh] = merged.try_emplace({a, b}, w);
        if (!fresh && w > it->second) it->second = w;
      };
      up(static_cast<std::int32_t>(u), v);
      up(v, static_cast<std::int32_t>(u));
    }
  }
  std::vector<Edge> edges;
  edges.reserve(merged.size());
  for (const auto& [key, w] : merged) edges.push_back({key.first, key.second, w});
  return build_graph(g.num_nodes(), edges, g.names);
}

namespace {

// Weighted degrees of A + I.
std::vector<double> loop_augmented_degrees(const Csr& adj) {
  std::vector<double> deg(adj.nrows, 1.0);
  for (std::int64_t r = 0; r < adj.nrows; ++r)
    for (std::int64_t e = adj.offsets[r]; e < adj.offsets[r + 1]; ++e)
      deg[r] += adj.val[e];
  return deg;
}

// A + I in CSR form (diagonal entry inserted/merged per row).
Csr add_identity(const Csr& adj) {
  Csr out;
  out.nrows = adj.nrows;
  out.ncols = adj.ncols;
  out.offsets.assign(adj.nrows + 1, 0);
  for (std::int64_t r = 0; r < adj.nrows; ++r) {
    bool has_diag = adj.has_entry(static_cast<std::int32_t>(r), static_cast<std::int32_t>(r));
    std::int64_t row_len = adj.offsets[r + 1] - adj.offsets[r] + (has_diag ? 0 : 1);
    out.offsets[r + 1] = out.offsets[r] + row_len;
    bool inserted = false;
    for (std::int64_t e = adj.offsets[r]; e < adj.offsets[r + 1]; ++e) {
      std::int32_t c = adj.col[e];
      if (!inserted && c > r) {
        out.col.push_back(static_cast<std::int32_t>(r));
        out.val.push_back(1.0);
        inserted = true;
      }
      double v = adj.val[e] + (c == r ? 1.0 : 0.0);
      out.col.push_back(c);
      out.val.push_back(v);
    }
    if (!inserted && !has_diag) {
      out.col.push_back(static_cast<std::int32_t>(r));
      out.val.push_back(1.0);
    }
  }
  return out;
}

Csr symmetric_gcn_matrix(const Csr& adj) {
  Csr atil = add_identity(adj);
  std::vector<double> deg = loop_augmented_degrees(adj);
  for (std::int64_t r = 0; r < atil.nrows; ++r) {
    double dr = 1.0 / std::sqrt(deg[r]);
    for (std::int64_t e = atil.offsets[r]; e < atil.offsets[r + 1]; ++e)
      atil.val[e] *= dr / std::sqrt(deg[atil.col[e]]);
  }
  return atil;
}

Csr row_stochastic_matrix(const Csr& adj) {
  Csr out;
  out.nrows = adj.nrows;
  out.ncols = adj.ncols;
  out.offsets.assign(adj.nrows + 1, 0);
  for (std::int64_t r = 0; r < adj.nrows; ++r) {
    double sum = 0.0;
    for (std::int64_t e = adj.offsets[r]; e < adj.offsets[r + 1]; ++e) sum += adj.val[e];
    if (sum <= 0.0) {
      // empty (or all-zero) row: self-loop keeps the operator stochastic
      out.col.push_back(static_cast<std::int32_t>(r));
      out.val.push_back(1.0);
      out.offsets[r + 1] = out.offsets[r] + 1;
      continue;
    }
    for (std::int64_t e = adj.offsets[r]; e < adj.offsets[r + 1]; ++e) {
      out.col.push_back(adj.col[e]);
      out.val.push_back(adj.val[e] / sum);
    }
    out.offsets[r + 1] = out.offsets[r] + (adj.offsets[r + 1] - adj.offsets[r]);
  }
  return out;
}

double power_iteration_lambda_max(const Csr& m, double tol, int max_iters) {
  const std::int64_t n = m.nrows;
  if (n == 0) return 0.0;
  Rng rng(fnv1a64("lambda-max-start"));
  std::vector<double> x(n), y(n);
  for (auto& v : x) v = rng.uniform(-1.0, 1.0);
  double lambda = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    double norm = 0.0;
    for (double v : x) norm += v * v;
    norm = std::sqrt(norm);
    if (norm < 1e-300) return 0.0;
    for (auto& v : x) v /= norm;
    for (std::int64_t r = 0; r < n; ++r) {
      double s = 0.0;
      for (std::int64_t e = m.offsets[r]; e < m.offsets[r + 1]; ++e)
        s += m.val[e] * x[m.col[e]];
      y[r] = s;
    }
    double next = 0.0;
    for (std::int64_t r = 0; r < n; ++r) next += x[r] * y[r];  // Rayleigh quotient
    x.swap(y);
    if (std::abs(next - lambda) <= tol * std::max(1.0, std::abs(next))) return next;
    lambda = next;
  }
  return lambda;
}

// L = I - D~^{-1/2} (A+I) D~^{-1/2}, rescaled to 2L/lambda_max - I.
Csr scaled_laplacian_matrix(const Csr& adj, double* lambda_out) {
  Csr norm = symmetric_gcn_matrix(adj);
  Csr lap = norm;  // same sparsity; diagonal always present via A+I
  for (std::int64_t r = 0; r < lap.nrows; ++r) {
    for (std::int64_t e = lap.offsets[r]; e < lap.offsets[r + 1]; ++e) {
      double id = lap.col[e] == r ? 1.0 : 0.0;
      lap.val[e] = id - norm.val[e];
    }
  }
  double lambda = power_iteration_lambda_max(lap, 1e-6, 10000);
  if (lambda < 1e-9) lambda = 1.0;  // L == 0 (edgeless): result is -I
  if (lambda_out) *lambda_out = lambda;
  for (std::int64_t r = 0; r < lap.nrows; ++r) {
    for (std::int64_t e = lap.offsets[r]; e < lap.offsets[r + 1]; ++e) {
      double id = lap.col[e] == r ? 1.0 : 0.0;
      lap.val[e] = 2.0 * lap.val[e] / lambda - id;
    }
  }
  return lap;
}

}  // namespace

NormalizedAdjacency normalize(const DirectedGraph& g, NormKind kind) {
  NormalizedAdjacency out;
  out.kind = kind;
  switch (kind) {
    case NormKind::SymmetricGcn:
      out.m = symmetric_gcn_matrix(g.adj);
      break;
    case NormKind::RowStochastic:
      out.m = row_stochastic_matrix(g.adj);
      break;
    case NormKind::ScaledLaplacian:
      out.m = scaled_laplacian_matrix(g.adj, &out.lambda_max);
      break;
  }
  out.mt = csr_transpose(out.m);
  return out;
}

Matrix spmm(const Csr& m, const Matrix& x) {
  if (m.ncols != x.rows) throw std::invalid_argument("spmm: shape mismatch");
  Matrix y(m.nrows, x.cols);
  parallel_for(m.nrows, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t r = lo; r < hi; ++r) {
      double* yr = y.row(r);
      for (std::int64_t e = m.offsets[r]; e < m.offsets[r + 1]; ++e) {
        double w = m.val[e];
        const double* xr = x.row(m.col[e]);
        for (std::int64_t j = 0; j < x.cols; ++j) yr[j] += w * xr[j];
      }
    }
  });
  return y;
}

Matrix spmm(const NormalizedAdjacency& adj, const Matrix& x) { return spmm(adj.m, x); }

SubgraphResult extract_1_5_degree(const DirectedGraph& g,
                                  const std::vector<std::int32_t>& seeds,
                                  std::int64_t min_posts,
                                  const std::vector<std::int64_t>& post_counts) {
  if (static_cast<std::int64_t>(post_counts.size()) != g.num_nodes())
    throw std::invalid_argument("post_counts size mismatch");
  std::vector<char> is_seed(g.num_nodes(), 0);
  for (std::int32_t s : seeds) {
    if (s < 0 || s >= g.num_nodes()) throw std::invalid_argument("seed out of range");
    is_seed[s] = 1;
  }
  DirectedGraph rev = reverse(g);
  std::set<std::int32_t> keep;
  for (std::int32_t s : seeds) {
    keep.insert(s);
    for (std::int64_t e = g.adj.offsets[s]; e < g.adj.offsets[s + 1]; ++e)
      keep.insert(g.adj.col[e]);
    for (std::int64_t e = rev.adj.offsets[s]; e < rev.adj.offsets[s + 1]; ++e)
      keep.insert(rev.adj.col[e]);
  }
  for (auto it = keep.begin(); it != keep.end();) {
    if (!is_seed[*it] && post_counts[*it] < min_posts) it = keep.erase(it);
    else ++it;
  }
  if (keep.empty()) throw std::runtime_error("1.5-degree extraction produced an empty graph");

  SubgraphResult res;
  res.original_id.assign(keep.begin(), keep.end());
  std::vector<std::int32_t> new_id(g.num_nodes(), -1);
  for (std::size_t i = 0; i < res.original_id.size(); ++i)
    new_id[res.original_id[i]] = static_cast<std::int32_t>(i);

  std::vector<Edge> edges;
  for (std::int32_t old_u : res.original_id) {
    for (std::int64_t e = g.adj.offsets[old_u]; e < g.adj.offsets[old_u + 1]; ++e) {
      std::int32_t old_v = g.adj.col[e];
      if (new_id[old_v] >= 0)
        edges.push_back({new_id[old_u], new_id[old_v], g.adj.val[e]});
    }
  }
  std::vector<std::string> names;
  if (!g.names.empty()) {
    names.reserve(res.original_id.size());
    for (std::int32_t old : res.original_id) names.push_back(g.names[old]);
  }
  res.graph = build_graph(static_cast<std::int64_t>(res.original_id.size()), edges,
                          std::move(names));
  return res;
}

DirectedGraph load_edge_tsv(const std::string& path) {
  std::vector<std::string> lines = read_lines(path);
  struct RawEdge {
    std::string src, dst;
    double w;
  };
  std::vector<RawEdge> raw;
  std::set<std::string> ids;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string& line = lines[ln];
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() < 2 || fields.size() > 3)
      throw std::runtime_error(path + ":" + std::to_string(ln + 1) + ": expected 2 or 3 fields");
    double w = 1.0;
    if (fields.size() == 3) {
      try {
        w = std::stod(std::string(fields[2]));
      } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(ln + 1) + ": bad weight");
      }
    }
    raw.push_back({std::string(fields[0]), std::string(fields[1]), w});
    ids.insert(raw.back().src);
    ids.insert(raw.back().dst);
  }
  std::vector<std::string> names(ids.begin(), ids.end());
  std::map<std::string, std::int32_t> index;
  for (std::size_t i = 0; i < names.size(); ++i)
    index[names[i]] = static_cast<std::int32_t>(i);
  std::vector<Edge> edges;
  edges.reserve(raw.size());
  for (const RawEdge& e : raw) edges.push_back({index[e.src], index[e.dst], e.w});
  const std::int64_t num_nodes = static_cast<std::int64_t>(names.size());
  return build_graph(num_nodes, edges, std::move(names));
}

void save_edge_tsv(const DirectedGraph& g, const std::string& path) {
  std::string out;
  for (std::int64_t u = 0; u < g.num_nodes(); ++u) {
    for (std::int64_t e = g.adj.offsets[u]; e < g.adj.offsets[u + 1]; ++e) {
      std::string su = g.names.empty() ? std::to_string(u) : g.names[u];
      std::string sv = g.names.empty() ? std::to_string(g.adj.col[e]) : g.names[g.adj.col[e]];
      out += su + "\t" + sv + "\t" + format_double(g.adj.val[e]) + "\n";
    }
  }
  write_file(path, out);
}

void save_node_mapping_tsv(const DirectedGraph& g, const std::string& path) {
  std::string out;
  for (std::int64_t u = 0; u < g.num_nodes(); ++u) {
    std::string name = g.names.empty() ? std::to_string(u) : g.names[u];
    out += name + "\t" + std::to_string(u) + "\n";
  }
  write_file(path, out);
}

}  // namespace hategraph
