#include "hategraph/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "hategraph/io.hpp"
#include "hategraph/rng.hpp"

namespace hategraph {

const std::vector<std::int32_t>& FoldPlan::subset(int fold, int fraction) const {
  for (std::size_t i = 0; i < fractions.size(); ++i)
    if (fractions[i] == fraction) return train_subsets[fold][i];
  throw std::invalid_argument("fraction not in plan: " + std::to_string(fraction));
}

FoldPlan make_fold_plan(const std::vector<int>& labels, int k,
                        const std::vector<int>& fractions, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("k must be >= 2");
  std::vector<std::int32_t> by_class[2];
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) continue;
    if (labels[i] > 1) throw std::invalid_argument("labels must be binary");
    by_class[labels[i]].push_back(static_cast<std::int32_t>(i));
  }
  for (int c = 0; c < 2; ++c)
    if (static_cast<int>(by_class[c].size()) < k)
      throw std::invalid_argument("class " + std::to_string(c) +
                                  " has fewer members than folds");
  const std::int64_t total =
      static_cast<std::int64_t>(by_class[0].size() + by_class[1].size());
  const double share1 = static_cast<double>(by_class[1].size()) / total;

  FoldPlan plan;
  plan.k = k;
  plan.fractions = fractions;
  std::sort(plan.fractions.begin(), plan.fractions.end());
  plan.seed = seed;
  plan.test_folds.assign(k, {});
  plan.train_subsets.assign(k, {});

  std::vector<std::vector<std::int32_t>> fold_members[2];
  for (int c = 0; c < 2; ++c) {
    std::vector<std::int32_t> pool = by_class[c];
    Rng rng(mix_seed(substream(seed, "fold-deal"), static_cast<std::uint64_t>(c)));
    rng.shuffle(pool);
    fold_members[c].assign(k, {});
    for (std::size_t i = 0; i < pool.size(); ++i)
      fold_members[c][i % k].push_back(pool[i]);
  }
  for (int f = 0; f < k; ++f) {
    for (int c = 0; c < 2; ++c)
      plan.test_folds[f].insert(plan.test_folds[f].end(), fold_members[c][f].begin(),
                                fold_members[c][f].end());
    std::sort(plan.test_folds[f].begin(), plan.test_folds[f].end());
  }

  for (int f = 0; f < k; ++f) {
    // class-interleaved priority order over the fold's train side; fraction
    // subsets are prefixes of it, hence nested by construction
    std::vector<std::int32_t> train_side[2];
    for (int c = 0; c < 2; ++c) {
      for (int other = 0; other < k; ++other)
        if (other != f)
          train_side[c].insert(train_side[c].end(), fold_members[c][other].begin(),
                               fold_members[c][other].end());
      Rng rng(mix_seed(substream(seed, "fold-subset"),
                       static_cast<std::uint64_t>(f * 2 + c)));
      rng.shuffle(train_side[c]);
    }
    std::vector<std::int32_t> order;
    std::size_t taken[2] = {0, 0};
    while (taken[0] < train_side[0].size() || taken[1] < train_side[1].size()) {
      double want1 = (static_cast<double>(order.size()) + 1.0) * share1;
      int pick = want1 - static_cast<double>(taken[1]) >= 0.5 ? 1 : 0;
      if (taken[pick] >= train_side[pick].size()) pick = 1 - pick;
      order.push_back(train_side[pick][taken[pick]++]);
    }
    for (int frac : plan.fractions) {
      std::int64_t want = static_cast<std::int64_t>(
          std::floor(static_cast<double>(frac) / 100.0 * static_cast<double>(total)));
      if (want < 1) want = 1;
      if (want > static_cast<std::int64_t>(order.size()))
        want = static_cast<std::int64_t>(order.size());
      std::vector<std::int32_t> subset(order.begin(), order.begin() + want);
      std::sort(subset.begin(), subset.end());
      plan.train_subsets[f].push_back(std::move(subset));
    }
  }
  return plan;
}

MetricsReport macro_metrics(const std::vector<int>& y_true,
                            const std::vector<int>& y_pred) {
  if (y_true.empty()) throw std::invalid_argument("empty input");
  if (y_true.size() != y_pred.size()) throw std::invalid_argument("length mismatch");
  std::int64_t conf[2][2] = {{0, 0}, {0, 0}};  // [true][pred]
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if ((y_true[i] != 0 && y_true[i] != 1) || (y_pred[i] != 0 && y_pred[i] != 1))
      throw std::invalid_argument("labels must be 0 or 1");
    conf[y_true[i]][y_pred[i]]++;
  }
  MetricsReport rep;
  double f1_sum = 0.0;
  for (int c = 0; c < 2; ++c) {
    std::int64_t tp = conf[c][c];
    std::int64_t fp = conf[1 - c][c];
    std::int64_t fn = conf[c][1 - c];
    ClassMetrics& m = rep.per_class[c];
    m.precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
    m.recall = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
    m.f1 = m.precision + m.recall > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    f1_sum += m.f1;
  }
  rep.macro_f1 = f1_sum / 2.0;
  rep.accuracy = static_cast<double>(conf[0][0] + conf[1][1]) /
                 static_cast<double>(y_true.size());
  return rep;
}

std::vector<BenchRow> run_benchmark(
    const std::vector<std::pair<std::string, ModelFn>>& models,
    const BenchContext& bench, const FoldPlan& plan) {
  std::vector<BenchRow> rows;
  for (const auto& [name, fn] : models) {
    for (std::size_t mi = 0; mi < plan.fractions.size(); ++mi) {
      for (int f = 0; f < plan.k; ++f) {
        BenchRow row;
        row.model = name;
        row.m = plan.fractions[mi];
        row.fold = f;
        const auto& train_nodes = plan.train_subsets[f][mi];
        const auto& test_nodes = plan.test_folds[f];
        try {
          std::vector<int> pred = fn(bench, train_nodes, test_nodes);
          std::vector<int> truth;
          truth.reserve(test_nodes.size());
          for (std::int32_t i : test_nodes) truth.push_back((*bench.labels)[i]);
          row.report = macro_metrics(truth, pred);
        } catch (const std::exception& e) {
          row.failed = true;
          row.error = e.what();
          std::fprintf(stderr, "benchmark cell failed (%s, m=%d, fold=%d): %s\n",
                       name.c_str(), row.m, f, e.what());
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

void save_benchmark_csv(const std::vector<BenchRow>& rows, std::uint64_t seed,
                        const std::string& path) {
  std::string out = "model,m,fold,class,precision,recall,f1,macro_f1,accuracy,seed\n";
  for (const BenchRow& r : rows) {
    if (r.failed) {
      out += csv_escape(r.model) + "," + std::to_string(r.m) + "," +
             std::to_string(r.fold) + ",error,,,,,," + std::to_string(seed) + "\n";
      continue;
    }
    for (int c = 0; c < 2; ++c) {
      const ClassMetrics& m = r.report.per_class[c];
      out += csv_escape(r.model) + "," + std::to_string(r.m) + "," +
             std::to_string(r.fold) + "," + std::to_string(c) + "," +
             format_double(m.precision) + "," + format_double(m.recall) + "," +
             format_double(m.f1) + "," + format_double(r.report.macro_f1) + "," +
             format_double(r.report.accuracy) + "," + std::to_string(seed) + "\n";
    }
  }
  write_file(path, out);
}

double mean_macro_f1(const std::vector<BenchRow>& rows, const std::string& model,
                     int m) {
  double sum = 0.0;
  int n = 0;
  for (const BenchRow& r : rows) {
    if (r.model != model || r.m != m || r.failed) continue;
    sum += r.report.macro_f1;
    ++n;
  }
  if (n == 0) throw std::runtime_error("no benchmark rows for " + model);
  return sum / n;
}

std::string benchmark_summary_json(const std::vector<BenchRow>& rows) {
  nlohmann::json j;
  std::set<std::pair<std::string, int>> cells;
  for (const BenchRow& r : rows)
    if (!r.failed) cells.insert({r.model, r.m});
  for (const auto& [model, m] : cells) {
    j[model][std::to_string(m)]["mean_macro_f1"] = mean_macro_f1(rows, model, m);
  }
  return j.dump(2) + "\n";
}

MetricsReport cross_platform_eval_gnn(const GnnModel& model, const GraphContext& target,
                                      const Matrix& target_features,
                                      const std::vector<int>& target_labels) {
  if (target_features.cols != model.cfg.in_dim)
    throw std::invalid_argument("feature dimension mismatch for transfer");
  Prediction pred = gnn_predict(model, target, target_features);
  std::vector<int> truth, guess;
  for (std::size_t i = 0; i < target_labels.size(); ++i) {
    if (target_labels[i] < 0) continue;
    truth.push_back(target_labels[i]);
    guess.push_back(pred.label[i]);
  }
  return macro_metrics(truth, guess);
}

std::vector<int> predict_with_rows_replaced(const GnnModel& model,
                                            const GraphContext& ctx, const Matrix& X,
                                            const std::vector<std::int32_t>& rows,
                                            const Matrix& replacement) {
  if (replacement.rows != static_cast<std::int64_t>(rows.size()) ||
      replacement.cols != X.cols)
    throw std::invalid_argument("replacement shape mismatch");
  Matrix swapped = X;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double* src = replacement.row(static_cast<std::int64_t>(i));
    double* dst = swapped.row(rows[i]);
    for (std::int64_t j = 0; j < X.cols; ++j) dst[j] = src[j];
  }
  return gnn_predict(model, ctx, swapped).label;
}

namespace {

Matrix mean_feature_rows(const Matrix& X, const std::vector<std::int32_t>& rows,
                         std::int64_t copies) {
  Matrix mean(1, X.cols);
  for (std::int32_t r : rows)
    for (std::int64_t j = 0; j < X.cols; ++j) mean(0, j) += X(r, j);
  for (std::int64_t j = 0; j < X.cols; ++j)
    mean(0, j) /= static_cast<double>(rows.size());
  Matrix rep(copies, X.cols);
  for (std::int64_t i = 0; i < copies; ++i)
    for (std::int64_t j = 0; j < X.cols; ++j) rep(i, j) = mean(0, j);
  return rep;
}

}  // namespace

SwapResult embedding_swap_diagnostic(const GnnModel& model, const GraphContext& ctx,
                                     const Matrix& X,
                                     const std::vector<std::int32_t>& hate_test,
                                     const std::vector<std::int32_t>& nonhate_test,
                                     const std::vector<int>& labels) {
  if (hate_test.empty() || nonhate_test.empty())
    throw std::invalid_argument("swap diagnostic needs both class sets");
  std::vector<int> base = gnn_predict(model, ctx, X).label;

  SwapResult res;
  auto run_side = [&](const std::vector<std::int32_t>& side,
                      const std::vector<std::int32_t>& other_side,
                      std::int64_t& baseline_correct) {
    Matrix replacement =
        mean_feature_rows(X, other_side, static_cast<std::int64_t>(side.size()));
    std::vector<int> swapped =
        predict_with_rows_replaced(model, ctx, X, side, replacement);
    std::int64_t kept = 0;
    baseline_correct = 0;
    for (std::int32_t i : side) {
      if (base[i] != labels[i]) continue;
      ++baseline_correct;
      if (swapped[i] == labels[i]) ++kept;
    }
    return baseline_correct > 0
               ? static_cast<double>(kept) / static_cast<double>(baseline_correct)
               : 0.0;
  };
  res.retained_hate = run_side(hate_test, nonhate_test, res.baseline_correct_hate);
  res.retained_nonhate = run_side(nonhate_test, hate_test, res.baseline_correct_nonhate);
  return res;
}

std::optional<double> neighbor_composition(const DirectedGraph& g,
                                           const std::vector<int>& hateful,
                                           std::int32_t node, int radius) {
  if (node < 0 || node >= g.num_nodes()) throw std::invalid_argument("node out of range");
  if (radius < 1) throw std::invalid_argument("radius must be >= 1");
  DirectedGraph rev = reverse(g);
  std::set<std::int32_t> seen = {node};
  std::deque<std::pair<std::int32_t, int>> frontier = {{node, 0}};
  std::set<std::int32_t> neighbors;
  while (!frontier.empty()) {
    auto [u, depth] = frontier.front();
    frontier.pop_front();
    if (depth == radius) continue;
    auto visit = [&](std::int32_t v) {
      if (seen.insert(v).second) {
        neighbors.insert(v);
        frontier.push_back({v, depth + 1});
      }
    };
    for (std::int64_t e = g.adj.offsets[u]; e < g.adj.offsets[u + 1]; ++e)
      visit(g.adj.col[e]);
    for (std::int64_t e = rev.adj.offsets[u]; e < rev.adj.offsets[u + 1]; ++e)
      visit(rev.adj.col[e]);
  }
  neighbors.erase(node);
  if (neighbors.empty()) return std::nullopt;
  std::int64_t hate = 0;
  for (std::int32_t v : neighbors)
    if (hateful[v] == 1) ++hate;
  return static_cast<double>(hate) / static_cast<double>(neighbors.size());
}

double hl_post_rate(const UserCorpus& corpus, const Lexicon& lex, int user_index) {
  if (user_index < 0 || user_index >= corpus.num_users())
    throw std::invalid_argument("user out of range");
  const auto& posts = corpus.posts[user_index];
  if (posts.empty()) throw std::invalid_argument("user has no posts");
  std::int64_t hits = 0;
  for (const Post& p : posts)
    if (matches_any_term(preprocess(p.text), lex)) ++hits;
  return 100.0 * static_cast<double>(hits) / static_cast<double>(posts.size());
}

std::vector<std::int64_t> hl_post_counts(const UserCorpus& corpus, const Lexicon& lex) {
  std::vector<std::int64_t> out(corpus.num_users(), 0);
  for (std::int64_t u = 0; u < corpus.num_users(); ++u)
    for (const Post& p : corpus.posts[u])
      if (matches_any_term(preprocess(p.text), lex)) out[u]++;
  return out;
}

}  // namespace hategraph
