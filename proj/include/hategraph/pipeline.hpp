#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hategraph/doc2vec.hpp"
#include "hategraph/eval.hpp"
#include "hategraph/gnn.hpp"
#include "hategraph/graph.hpp"
#include "hategraph/lexicon.hpp"
#include "hategraph/logistic.hpp"
#include "hategraph/posthoc.hpp"
#include "hategraph/skipgram.hpp"
#include "hategraph/synth.hpp"
#include "hategraph/text.hpp"
#include "hategraph/walks.hpp"
#include "hategraph/word_embed.hpp"

namespace hategraph {

class PipelineError : public std::runtime_error {
 public:
  std::string path;
  explicit PipelineError(const std::string& msg, std::string p = "")
      : std::runtime_error(msg), path(std::move(p)) {}
};

struct DatasetPaths {
  std::string edges, posts, labels, lexicon, edge_times;
  bool use_synth = false;
  SynthConfig synth;
};

struct PipelineConfig {
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  DatasetPaths dataset;
  DatasetPaths target;  // transfer target

  std::string feature_source = "doc2vec";  // doc2vec | pretrained | deepwalk | node2vec
  std::string pretrained_path;
  Doc2vecConfig doc2vec;
  WalkConfig walk;
  SkipgramConfig skipgram;

  std::string model = "agnn";
  GnnConfig gnn;
  LogisticConfig logistic;

  int fold_k = 5;
  std::vector<int> fractions = {5, 10, 15, 20, 50, 80};
  std::vector<std::string> bench_models = {"gcn",  "cheb",     "sage",
                                           "agnn", "gat",      "logistic"};

  int diffusion_iterations = 5;
  std::int64_t seed_min_hl_posts = 2;
  std::int64_t per_tier = 300;
  std::int64_t tier_min_posts = 10;

  std::int64_t trending_min_count = 10;
  double trending_ratio = 0.2;
  std::int64_t min_lifetime_posts = 10;

  std::string config_json;  // canonical echo for manifests
};

PipelineConfig parse_pipeline_config(const std::string& json_text);

// Users come from the post corpus; graph nodes are exactly those users, in
// sorted-id order, so features, labels, and graph rows stay aligned.
struct Dataset {
  DirectedGraph graph;
  UserCorpus corpus;
  std::vector<int> labels;  // -1 unlabeled
  std::vector<TimedEdge> timed_edges;
  Lexicon lexicon;
  bool has_lexicon = false;
  bool has_timed_edges = false;
};

Dataset load_dataset(const DatasetPaths& paths, std::uint64_t seed);

struct FeatureSet {
  Matrix X;
  Doc2vecModel doc2vec;        // populated when source == doc2vec
  bool has_doc2vec = false;
  std::vector<double> center;  // subtracted column means (doc2vec source)
};

// doc2vec features are centered on the corpus mean; the stored center is
// reapplied to vectors inferred for transfer targets.
FeatureSet compute_features(const Dataset& ds, const PipelineConfig& cfg);

void center_columns(Matrix& X, std::vector<double>* mean_out);
void subtract_center(Matrix& X, const std::vector<double>& center);

// Benchmark model runners named per the CLI model flags. deepwalk/node2vec
// train their embeddings once on first use and share them across cells.
std::vector<std::pair<std::string, ModelFn>> make_benchmark_models(
    const std::vector<std::string>& names, const PipelineConfig& cfg);

GnnConfig gnn_config_for(const PipelineConfig& cfg, const std::string& variant,
                         std::int64_t in_dim, std::uint64_t seed);

// Train-side leftover used for validation-based parameter selection.
std::vector<std::int32_t> leftover_nodes(const std::vector<int>& labels,
                                         const std::vector<std::int32_t>& train_nodes,
                                         const std::vector<std::int32_t>& eval_nodes);

struct ManifestBuilder {
  std::string command;
  std::string config_json;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> inputs;   // path, hash
  std::vector<std::pair<std::string, std::string>> outputs;  // path, hash

  void add_input(const std::string& path);
  void add_output(const std::string& path);
  void write(const std::string& path) const;
};

int cmd_synth(const PipelineConfig& cfg);
int cmd_embed(const PipelineConfig& cfg);
int cmd_train(const PipelineConfig& cfg);
int cmd_benchmark(const PipelineConfig& cfg);
int cmd_transfer(const PipelineConfig& cfg);
int cmd_posthoc(const PipelineConfig& cfg);

}  // namespace hategraph
