#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hategraph/graph.hpp"

namespace hategraph {

struct BeliefVector {
  std::vector<double> values;  // each in [0,1]
  int iterations = 0;
};

// Repost edges reversed, then row-normalized; rows without out-edges get a
// unit self-loop so the operator stays row-stochastic.
NormalizedAdjacency build_belief_network(const DirectedGraph& repost_graph);

// b0 = indicator(seeds); b_{t+1} = W b_t, synchronous, no clamping.
BeliefVector diffuse(const NormalizedAdjacency& op,
                     const std::vector<std::int32_t>& seeds, int iterations = 5);

enum class Tier : std::uint8_t { Low = 0, Medium = 1, High = 2 };

struct TierAssignment {
  std::vector<Tier> tier;         // per node
  std::vector<double> centroids;  // ascending, size k
};

// Globally optimal 1-D k-means via dynamic programming (clusters contiguous
// in sorted order). Ties between adjacent centroids resolve to the lower tier.
// Throws if the input has fewer than k distinct values.
TierAssignment kmeans_1d(const std::vector<double>& scores, int k = 3);

struct TierSample {
  std::vector<std::int32_t> nodes;   // union over tiers, ascending
  std::vector<std::int64_t> shortfall;  // per tier: per_tier - drawn
};

// Uniform without-replacement sample of up to per_tier eligible nodes
// (post_counts >= min_posts) from each tier. Deterministic under rng_seed.
TierSample sample_tiers(const TierAssignment& tiers, std::int64_t per_tier,
                        std::int64_t min_posts,
                        const std::vector<std::int64_t>& post_counts,
                        std::uint64_t rng_seed);

void save_belief_csv(const BeliefVector& b, const TierAssignment& t,
                     const std::vector<std::string>& names, const std::string& path);

}  // namespace hategraph
