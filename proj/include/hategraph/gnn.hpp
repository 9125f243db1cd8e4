#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hategraph/graph.hpp"
#include "hategraph/matrix.hpp"
#include "hategraph/tape.hpp"

namespace hategraph {

enum class GnnVariant { Gcn, Cheb, SageMean, Agnn, Gat };

std::string variant_name(GnnVariant v);
GnnVariant variant_from_name(const std::string& name);

struct GnnConfig {
  GnnVariant variant = GnnVariant::Gcn;
  int in_dim = 100;
  int hidden_dim = 32;
  int out_dim = 2;
  int cheb_k = 2;
  int agnn_hops = 1;     // attention propagation layers between the transforms
  int gat_heads = 1;
  double gat_leaky_slope = 0.2;
  int sage_sample = 0;   // <= 0 means full neighborhood
  int epochs = 200;
  double lr = 0.01;
  double weight_decay = 5e-4;
  double dropout = 0.2;
  std::uint64_t seed = 1;
};

struct GnnModel {
  GnnConfig cfg;
  std::map<std::string, Matrix> params;  // ordered: deterministic iteration
  std::map<std::string, Matrix> adam_m, adam_v;
  std::int64_t adam_t = 0;

  void init_params();  // Glorot-uniform, seeded from cfg.seed
};

// Propagation operators derived once per graph; pass the symmetrized graph
// when convolution should ignore edge direction.
struct GraphContext {
  std::int64_t n = 0;
  NormalizedAdjacency gcn;    // D~^-1/2 (A+I) D~^-1/2
  NormalizedAdjacency lap;    // 2L/lambda_max - I
  EdgeStructure loops;        // neighbors plus self
  Csr neighbors;              // structure only, no self loops (mean aggregation)
  Csr neighbors_t;
};

GraphContext make_graph_context(const DirectedGraph& g);

// Mean-over-neighbors operator; sample_size <= 0 keeps full neighborhoods.
// Sampling is without replacement, per (seed, epoch, node).
Csr sampled_mean_adjacency(const Csr& neighbors, int sample_size, std::uint64_t seed,
                           std::int64_t epoch);

struct SageOperator {
  Csr mean;
  Csr mean_t;
};

SageOperator make_sage_operator(const GraphContext& ctx, int sample_size,
                                std::uint64_t seed, std::int64_t epoch);

// Single-layer forwards (inference building blocks and test oracles).
Matrix gcn_layer(const NormalizedAdjacency& adj, const Matrix& H, const Matrix& W);
Matrix cheb_layer(const NormalizedAdjacency& lap, const Matrix& H,
                  const std::vector<Matrix>& Wk);
Matrix sage_mean_layer(const Csr& mean_adj, const Matrix& H, const Matrix& Wself,
                       const Matrix& Wneigh);
Matrix agnn_layer(const EdgeStructure& loops, const Matrix& H, double beta);
Matrix gat_layer(const EdgeStructure& loops, const Matrix& H, const Matrix& W,
                 const Matrix& a_src, const Matrix& a_dst, double leaky_slope);

// Attention coefficients for diagnostics/tests (row-stochastic per node).
Matrix agnn_attention(const EdgeStructure& loops, const Matrix& H, double beta);

struct GnnForward {
  int logp = -1;                             // tape node of log-probabilities
  std::map<std::string, int> param_nodes;    // leaf ids by parameter name
};

// Conv1 -> ReLU -> dropout(train) -> Conv2 -> log-softmax.
// The sage variant aggregates through `sage_epoch_adj`, which must outlive
// the tape.
GnnForward gnn_forward_tape(Tape& tape, const GnnModel& model, const GraphContext& ctx,
                            const Matrix& X, bool training, Rng* dropout_rng,
                            std::int64_t epoch, const SageOperator* sage_epoch_adj);

Matrix gnn_forward(const GnnModel& model, const GraphContext& ctx, const Matrix& X,
                   bool training = false, Rng* dropout_rng = nullptr,
                   std::int64_t epoch = 0);

struct TrainCurve {
  std::vector<double> train_loss;
  std::vector<double> val_loss;  // empty when no validation nodes
  int best_epoch = -1;
};

// Full-batch training; parameters at the best validation loss are retained
// (final parameters when no validation nodes are given).
TrainCurve gnn_train(GnnModel& model, const GraphContext& ctx, const Matrix& X,
                     const std::vector<int>& labels,
                     const std::vector<std::int32_t>& train_nodes,
                     const std::vector<std::int32_t>& val_nodes);

struct Prediction {
  std::vector<int> label;
  std::vector<double> prob;  // probability of the predicted class
  Matrix log_probs;
};

Prediction gnn_predict(const GnnModel& model, const GraphContext& ctx, const Matrix& X);

void adam_step(Matrix& param, const Matrix& grad, Matrix& m, Matrix& v,
               std::int64_t t, double lr, double weight_decay);

void save_gnn(const GnnModel& model, const std::string& path);
GnnModel load_gnn(const std::string& path);
void save_loss_curve_csv(const TrainCurve& curve, const std::string& path);

}  // namespace hategraph
