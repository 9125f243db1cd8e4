#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hategraph/gnn.hpp"
#include "hategraph/graph.hpp"
#include "hategraph/lexicon.hpp"
#include "hategraph/matrix.hpp"
#include "hategraph/text.hpp"

namespace hategraph {

// Stratified k-fold plan with nested label-fraction subsets. Fractions are
// percentages of the full labeled set, drawn inside each fold's train side,
// and subset(m1) is a prefix of subset(m2) for m1 < m2.
struct FoldPlan {
  int k = 5;
  std::vector<int> fractions;
  std::vector<std::vector<std::int32_t>> test_folds;
  // train_subsets[fold][fraction index] -> node ids
  std::vector<std::vector<std::vector<std::int32_t>>> train_subsets;
  std::uint64_t seed = 0;

  const std::vector<std::int32_t>& subset(int fold, int fraction) const;
};

// labels: full-length vector, -1 marks unlabeled nodes.
FoldPlan make_fold_plan(const std::vector<int>& labels, int k,
                        const std::vector<int>& fractions, std::uint64_t seed);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct MetricsReport {
  ClassMetrics per_class[2];
  double macro_f1 = 0.0;
  double accuracy = 0.0;
};

// Binary labels; empty denominators score 0.
MetricsReport macro_metrics(const std::vector<int>& y_true,
                            const std::vector<int>& y_pred);

struct BenchContext {
  const DirectedGraph* graph = nullptr;  // propagation graph
  const GraphContext* ctx = nullptr;
  const Matrix* features = nullptr;
  const std::vector<int>* labels = nullptr;  // -1 unlabeled
  std::uint64_t seed = 0;
};

// A benchmark model trains on the given supervision and predicts labels for
// eval_nodes. Unlabeled nodes are visible through the context, never as
// supervision.
using ModelFn = std::function<std::vector<int>(
    const BenchContext&, const std::vector<std::int32_t>& train_nodes,
    const std::vector<std::int32_t>& eval_nodes)>;

struct BenchRow {
  std::string model;
  int m = 0;
  int fold = 0;
  MetricsReport report;
  bool failed = false;
  std::string error;
};

std::vector<BenchRow> run_benchmark(
    const std::vector<std::pair<std::string, ModelFn>>& models,
    const BenchContext& bench, const FoldPlan& plan);

void save_benchmark_csv(const std::vector<BenchRow>& rows, std::uint64_t seed,
                        const std::string& path);
std::string benchmark_summary_json(const std::vector<BenchRow>& rows);

// Mean macro-F1 over folds for one (model, m) cell.
double mean_macro_f1(const std::vector<BenchRow>& rows, const std::string& model, int m);

// Zero-shot transfer: a model trained on a source graph evaluated on a target
// graph whose features were produced under the source feature space.
MetricsReport cross_platform_eval_gnn(const GnnModel& model, const GraphContext& target,
                                      const Matrix& target_features,
                                      const std::vector<int>& target_labels);

// Predictions with selected feature rows replaced (replacement.rows() must
// equal rows.size()).
std::vector<int> predict_with_rows_replaced(const GnnModel& model,
                                            const GraphContext& ctx, const Matrix& X,
                                            const std::vector<std::int32_t>& rows,
                                            const Matrix& replacement);

struct SwapResult {
  double retained_hate = 0.0;     // fraction of correct hate predictions kept
  double retained_nonhate = 0.0;  // fraction of correct non-hate predictions kept
  std::int64_t baseline_correct_hate = 0;
  std::int64_t baseline_correct_nonhate = 0;
};

// Replaces hate-node features with the mean non-hate test feature (and vice
// versa) and reports the per-class fraction of previously-correct predictions
// that survive.
SwapResult embedding_swap_diagnostic(const GnnModel& model, const GraphContext& ctx,
                                     const Matrix& X,
                                     const std::vector<std::int32_t>& hate_test,
                                     const std::vector<std::int32_t>& nonhate_test,
                                     const std::vector<int>& labels);

// Fraction of hateful nodes among neighbors within `radius` hops (in or out
// edges), self excluded; nullopt for nodes with no such neighbors.
std::optional<double> neighbor_composition(const DirectedGraph& g,
                                           const std::vector<int>& hateful,
                                           std::int32_t node, int radius = 1);

// Percent of the user's posts containing at least one lexicon term
// (whole-token match after preprocessing). Throws for users with no posts.
double hl_post_rate(const UserCorpus& corpus, const Lexicon& lex, int user_index);

// Number of posts with a lexicon hit, per user (seed-set construction).
std::vector<std::int64_t> hl_post_counts(const UserCorpus& corpus, const Lexicon& lex);

}  // namespace hategraph
