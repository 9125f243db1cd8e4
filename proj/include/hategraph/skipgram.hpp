#pragma once

#include <cstdint>
#include <vector>

#include "hategraph/matrix.hpp"
#include "hategraph/walks.hpp"

namespace hategraph {

struct SkipgramConfig {
  int dim = 128;
  int window = 10;
  int negative = 5;
  int epochs = 5;
  double alpha = 0.025;
  double min_alpha = 1e-4;
  std::uint64_t seed = 1;
};

struct NodeEmbedding {
  Matrix vectors;  // num_nodes x dim
  SkipgramConfig cfg;
  std::vector<double> epoch_loss;
};

// SGNS over (center, context) pairs from the walks; the effective window for
// each center position is drawn uniformly from 1..window (word2vec behavior).
NodeEmbedding train_skipgram(const std::vector<std::vector<std::int32_t>>& walks,
                             std::int64_t num_nodes, const SkipgramConfig& cfg);

}  // namespace hategraph
