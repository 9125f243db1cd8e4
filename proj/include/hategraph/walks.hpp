#pragma once

#include <cstdint>
#include <vector>

#include "hategraph/graph.hpp"

namespace hategraph {

struct WalkConfig {
  int walks_per_node = 10;
  int walk_length = 80;
  bool second_order = false;  // false: uniform first-order; true: p/q-biased
  double p = 1.0;             // return parameter
  double q = 1.0;             // in-out parameter
  std::uint64_t seed = 1;
};

// walks_per_node walks from every node, truncated at sinks. Steps follow edge
// direction. Each walk's RNG stream depends only on (seed, node, walk index),
// so output is identical regardless of internal scheduling.
std::vector<std::vector<std::int32_t>> generate_walks(const DirectedGraph& g,
                                                      const WalkConfig& cfg);

// Second-order step distribution over out-neighbors of `cur` given `prev`:
// back to prev scaled by 1/p, to mutual neighbors of prev by 1, else by 1/q.
std::vector<double> node2vec_step_probs(const DirectedGraph& g, std::int32_t prev,
                                        std::int32_t cur, double p, double q);

void save_walks(const std::vector<std::vector<std::int32_t>>& walks,
                const std::string& path);

}  // namespace hategraph
