#include "hategraph/skipgram.hpp"

#include <algorithm>
#include <stdexcept>

#include "hategraph/rng.hpp"
#include "hategraph/sgns.hpp"

namespace hategraph {

NodeEmbedding train_skipgram(const std::vector<std::vector<std::int32_t>>& walks,
                             std::int64_t num_nodes, const SkipgramConfig& cfg) {
  if (walks.empty()) throw std::invalid_argument("no walks");
  if (num_nodes < 1) throw std::invalid_argument("num_nodes must be >= 1");

  std::vector<std::int64_t> counts(num_nodes, 0);
  std::int64_t total_positions = 0;
  for (const auto& w : walks) {
    for (std::int32_t v : w) {
      if (v < 0 || v >= num_nodes) throw std::invalid_argument("walk node out of range");
      counts[v]++;
    }
    total_positions += static_cast<std::int64_t>(w.size());
  }

  NodeEmbedding emb;
  emb.cfg = cfg;
  emb.vectors = Matrix(num_nodes, cfg.dim);
  Matrix out(num_nodes, cfg.dim);
  Rng init_rng(substream(cfg.seed, "skipgram-init"));
  double span = 0.5 / cfg.dim;
  for (double& v : emb.vectors.a) v = init_rng.uniform(-span, span);

  AliasTable noise = make_noise_table(counts);
  Rng rng(substream(cfg.seed, "skipgram-train"));
  std::vector<double> grad_buf(cfg.dim);
  std::vector<std::int32_t> negs;
  const double total_steps =
      static_cast<double>(std::max<std::int64_t>(1, total_positions) * cfg.epochs);
  std::int64_t step = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double loss_sum = 0.0;
    std::int64_t pairs = 0;
    for (const auto& walk : walks) {
      const std::int64_t len = static_cast<std::int64_t>(walk.size());
      for (std::int64_t i = 0; i < len; ++i) {
        double lr = cfg.alpha + (cfg.min_alpha - cfg.alpha) * (step / total_steps);
        ++step;
        std::int64_t reach = 1 + static_cast<std::int64_t>(rng.below(cfg.window));
        std::int64_t lo = std::max<std::int64_t>(0, i - reach);
        std::int64_t hi = std::min(len - 1, i + reach);
        double* center = emb.vectors.row(walk[i]);
        for (std::int64_t j = lo; j <= hi; ++j) {
          if (j == i) continue;
          draw_negatives(noise, rng, walk[j], cfg.negative, negs);
          loss_sum += sgns_step(center, cfg.dim, out, walk[j], negs, lr, grad_buf);
          ++pairs;
        }
      }
    }
    emb.epoch_loss.push_back(pairs > 0 ? loss_sum / static_cast<double>(pairs) : 0.0);
  }
  return emb;
}

}  // namespace hategraph
