#include "hategraph/walks.hpp"

#include <stdexcept>
#include <string>

#include "hategraph/io.hpp"
#include "hategraph/rng.hpp"
#include "hategraph/threads.hpp"

namespace hategraph {

std::vector<double> node2vec_step_probs(const DirectedGraph& g, std::int32_t prev,
                                        std::int32_t cur, double p, double q) {
  auto [lo, hi] = g.out_range(cur);
  std::vector<double> w(hi - lo, 0.0);
  double total = 0.0;
  for (std::int64_t e = lo; e < hi; ++e) {
    std::int32_t x = g.adj.col[e];
    double bias;
    if (x == prev) bias = 1.0 / p;
    else if (g.adj.has_entry(prev, x)) bias = 1.0;
    else bias = 1.0 / q;
    w[e - lo] = bias;
    total += bias;
  }
  for (double& v : w) v /= total;
  return w;
}

namespace {

std::int32_t uniform_step(const DirectedGraph& g, std::int32_t cur, Rng& rng) {
  auto [lo, hi] = g.out_range(cur);
  if (hi == lo) return -1;
  return g.adj.col[lo + static_cast<std::int64_t>(rng.below(hi - lo))];
}

std::int32_t biased_step(const DirectedGraph& g, std::int32_t prev, std::int32_t cur,
                         double p, double q, Rng& rng) {
  auto [lo, hi] = g.out_range(cur);
  if (hi == lo) return -1;
  // linear scan over the (small) out-neighborhood
  double total = 0.0;
  for (std::int64_t e = lo; e < hi; ++e) {
    std::int32_t x = g.adj.col[e];
    total += x == prev ? 1.0 / p : (g.adj.has_entry(prev, x) ? 1.0 : 1.0 / q);
  }
  double u = rng.real01() * total;
  double acc = 0.0;
  for (std::int64_t e = lo; e < hi; ++e) {
    std::int32_t x = g.adj.col[e];
    acc += x == prev ? 1.0 / p : (g.adj.has_entry(prev, x) ? 1.0 : 1.0 / q);
    if (u < acc) return x;
  }
  return g.adj.col[hi - 1];
}

}  // namespace

std::vector<std::vector<std::int32_t>> generate_walks(const DirectedGraph& g,
                                                      const WalkConfig& cfg) {
  if (g.num_nodes() == 0) throw std::invalid_argument("empty graph");
  if (cfg.walks_per_node < 1 || cfg.walk_length < 1)
    throw std::invalid_argument("walk counts must be >= 1");
  if (!(cfg.p > 0.0) || !(cfg.q > 0.0))
    throw std::invalid_argument("p and q must be > 0");

  const std::int64_t n = g.num_nodes();
  const std::int64_t total = n * cfg.walks_per_node;
  std::vector<std::vector<std::int32_t>> walks(total);
  std::uint64_t base = substream(cfg.seed, "walks");
  parallel_for(total, [&](std::int64_t lo_i, std::int64_t hi_i) {
    for (std::int64_t t = lo_i; t < hi_i; ++t) {
      std::int32_t start = static_cast<std::int32_t>(t / cfg.walks_per_node);
      Rng rng(mix_seed(base, static_cast<std::uint64_t>(t)));
      std::vector<std::int32_t>& walk = walks[t];
      walk.reserve(cfg.walk_length);
      walk.push_back(start);
      while (static_cast<int>(walk.size()) < cfg.walk_length) {
        std::int32_t cur = walk.back();
        std::int32_t next;
        if (!cfg.second_order || walk.size() == 1)
          next = uniform_step(g, cur, rng);
        else
          next = biased_step(g, walk[walk.size() - 2], cur, cfg.p, cfg.q, rng);
        if (next < 0) break;  // sink: truncate
        walk.push_back(next);
      }
    }
  });
  return walks;
}

void save_walks(const std::vector<std::vector<std::int32_t>>& walks,
                const std::string& path) {
  std::string out;
  for (const auto& w : walks) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i > 0) out += ' ';
      out += std::to_string(w[i]);
    }
    out += '\n';
  }
  write_file(path, out);
}

}  // namespace hategraph
