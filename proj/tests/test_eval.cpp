#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <set>

#include "hategraph/eval.hpp"
#include "hategraph/io.hpp"
#include "hategraph/pipeline.hpp"
#include "test_util.hpp"

using namespace hategraph;
using namespace hategraph::testing;

namespace {

std::vector<int> make_labels(int pos, int neg) {
  std::vector<int> labels;
  for (int i = 0; i < pos; ++i) labels.push_back(1);
  for (int i = 0; i < neg; ++i) labels.push_back(0);
  return labels;
}

}  // namespace

TEST_CASE("balanced 20-label plan gives 2+2 per test fold") {
  FoldPlan plan = make_fold_plan(make_labels(10, 10), 5, {50}, 1);
  for (int f = 0; f < 5; ++f) {
    CHECK(plan.test_folds[f].size() == 4);
    int pos = 0;
    for (std::int32_t i : plan.test_folds[f]) pos += i < 10;
    CHECK(pos == 2);
  }
}

TEST_CASE("fraction subsets have floor sizes and are stratified") {
  std::vector<int> labels = make_labels(423, 375);
  FoldPlan plan = make_fold_plan(labels, 5, {5, 10, 80}, 3);
  for (int f = 0; f < 5; ++f) {
    const auto& s5 = plan.subset(f, 5);
    CHECK(s5.size() == 39);  // floor(0.05 * 798)
    int pos = 0;
    for (std::int32_t i : s5) pos += labels[i] == 1;
    CHECK(std::abs(pos - 39.0 * 423.0 / 798.0) <= 1.0);
    CHECK(plan.subset(f, 10).size() == 79);
  }
}

TEST_CASE("test folds partition the labeled set and avoid train subsets") {
  std::vector<int> labels = make_labels(37, 54);
  labels.push_back(-1);  // unlabeled nodes are ignored
  labels.push_back(-1);
  FoldPlan plan = make_fold_plan(labels, 5, {5, 20, 80}, 9);
  std::set<std::int32_t> seen;
  std::size_t total = 0;
  for (const auto& fold : plan.test_folds) {
    total += fold.size();
    seen.insert(fold.begin(), fold.end());
  }
  CHECK(total == 91);
  CHECK(seen.size() == 91);
  for (int f = 0; f < 5; ++f) {
    std::set<std::int32_t> test(plan.test_folds[f].begin(), plan.test_folds[f].end());
    for (const auto& subset : plan.train_subsets[f])
      for (std::int32_t i : subset) CHECK_FALSE(test.count(i));
  }
}

TEST_CASE("fraction subsets are nested for every m pair") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Rng rng(seed);
    std::vector<int> labels;
    for (int i = 0; i < 200; ++i)
      labels.push_back(rng.real01() < 0.35 ? 1 : (rng.real01() < 0.8 ? 0 : -1));
    for (int c = 0; c < 2; ++c) {
      int count = static_cast<int>(std::count(labels.begin(), labels.end(), c));
      for (int add = count; add < 5; ++add) labels.push_back(c);
    }
    FoldPlan plan = make_fold_plan(labels, 5, {5, 10, 15, 20, 50, 80}, seed);
    for (int f = 0; f < 5; ++f) {
      for (std::size_t a = 0; a + 1 < plan.fractions.size(); ++a) {
        std::set<std::int32_t> small(plan.train_subsets[f][a].begin(),
                                     plan.train_subsets[f][a].end());
        std::set<std::int32_t> big(plan.train_subsets[f][a + 1].begin(),
                                   plan.train_subsets[f][a + 1].end());
        for (std::int32_t i : small) CHECK(big.count(i));
      }
    }
  }
}

TEST_CASE("fold plan rejects classes smaller than k") {
  CHECK_THROWS(make_fold_plan(make_labels(3, 40), 5, {50}, 1));
}

TEST_CASE("macro metrics on perfect predictions") {
  MetricsReport rep = macro_metrics({0, 1, 0, 1}, {0, 1, 0, 1});
  CHECK(rep.macro_f1 == doctest::Approx(1.0));
  CHECK(rep.accuracy == doctest::Approx(1.0));
}

TEST_CASE("macro metrics with a constant predictor on balanced truth") {
  MetricsReport rep = macro_metrics({0, 0, 1, 1}, {0, 0, 0, 0});
  CHECK(rep.per_class[0].f1 == doctest::Approx(2.0 / 3.0));
  CHECK(rep.per_class[1].f1 == doctest::Approx(0.0));
  CHECK(rep.macro_f1 == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("macro F1 is invariant to swapping class names on both sides") {
  Rng rng(4);
  std::vector<int> t, p, ts, ps;
  for (int i = 0; i < 500; ++i) {
    t.push_back(static_cast<int>(rng.below(2)));
    p.push_back(static_cast<int>(rng.below(2)));
    ts.push_back(1 - t.back());
    ps.push_back(1 - p.back());
  }
  CHECK(macro_metrics(t, p).macro_f1 == doctest::Approx(macro_metrics(ts, ps).macro_f1));
}

TEST_CASE("macro metrics equal a naive confusion-matrix oracle on random pairs") {
  Rng rng(5);
  std::vector<int> t, p;
  for (int i = 0; i < 100000; ++i) {
    t.push_back(rng.real01() < 0.3 ? 1 : 0);
    p.push_back(rng.real01() < 0.4 ? 1 : 0);
  }
  MetricsReport rep = macro_metrics(t, p);
  long tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] == 1 && p[i] == 1) ++tp;
    else if (t[i] == 0 && p[i] == 1) ++fp;
    else if (t[i] == 1 && p[i] == 0) ++fn;
    else ++tn;
  }
  double p1 = static_cast<double>(tp) / (tp + fp);
  double r1 = static_cast<double>(tp) / (tp + fn);
  double f1_1 = 2 * p1 * r1 / (p1 + r1);
  double p0 = static_cast<double>(tn) / (tn + fn);
  double r0 = static_cast<double>(tn) / (tn + fp);
  double f1_0 = 2 * p0 * r0 / (p0 + r0);
  CHECK(rep.per_class[1].precision == doctest::Approx(p1));
  CHECK(rep.per_class[1].recall == doctest::Approx(r1));
  CHECK(rep.macro_f1 == doctest::Approx((f1_0 + f1_1) / 2.0));
  CHECK(rep.accuracy == doctest::Approx(static_cast<double>(tp + tn) / t.size()));
}

TEST_CASE("macro metrics reject empty and malformed input") {
  CHECK_THROWS(macro_metrics({}, {}));
  CHECK_THROWS(macro_metrics({0, 1}, {0}));
  CHECK_THROWS(macro_metrics({0, 2}, {0, 1}));
}

TEST_CASE("run_benchmark: oracle and constant models, failures isolated") {
  Rng rng(6);
  DirectedGraph g = random_graph(30, 0.1, rng);
  Matrix X = random_matrix(30, 4, rng);
  std::vector<int> labels;
  for (int i = 0; i < 30; ++i) labels.push_back(i % 2);
  GraphContext ctx = make_graph_context(g);
  BenchContext bench{&g, &ctx, &X, &labels, 1};
  FoldPlan plan = make_fold_plan(labels, 5, {20, 80}, 2);

  ModelFn oracle = [&](const BenchContext& b, const std::vector<std::int32_t>&,
                       const std::vector<std::int32_t>& eval_nodes) {
    std::vector<int> out;
    for (std::int32_t i : eval_nodes) out.push_back((*b.labels)[i]);
    return out;
  };
  ModelFn constant = [](const BenchContext&, const std::vector<std::int32_t>&,
                        const std::vector<std::int32_t>& eval_nodes) {
    return std::vector<int>(eval_nodes.size(), 0);
  };
  ModelFn broken = [](const BenchContext&, const std::vector<std::int32_t>&,
                      const std::vector<std::int32_t>&) -> std::vector<int> {
    throw std::runtime_error("deliberate failure");
  };
  auto rows = run_benchmark({{"oracle", oracle}, {"constant", constant}, {"broken", broken}},
                            bench, plan);
  CHECK(rows.size() == 3 * 2 * 5);
  CHECK(mean_macro_f1(rows, "oracle", 20) == doctest::Approx(1.0));
  CHECK(mean_macro_f1(rows, "constant", 80) == doctest::Approx(1.0 / 3.0));
  int failed = 0;
  for (const auto& r : rows) failed += r.failed;
  CHECK(failed == 10);  // only the broken model's cells
}

namespace {

struct TrainedFixture {
  DirectedGraph graph;
  GraphContext ctx;
  Matrix X;
  std::vector<int> labels;
  GnnModel model;
};

// two feature blobs on an edgeless graph: predictions depend on features only
TrainedFixture edgeless_fixture() {
  TrainedFixture f;
  const int n = 30;
  f.graph = build_graph(n, {});
  f.ctx = make_graph_context(f.graph);
  Rng rng(44);
  f.X = Matrix(n, 3);
  for (int i = 0; i < n; ++i) {
    f.labels.push_back(i % 2);
    double c = f.labels[i] == 1 ? 1.0 : -1.0;
    for (int d = 0; d < 3; ++d) f.X(i, d) = c + rng.uniform(-0.3, 0.3);
  }
  f.model.cfg.variant = GnnVariant::Gcn;
  f.model.cfg.in_dim = 3;
  f.model.cfg.hidden_dim = 8;
  f.model.cfg.epochs = 150;
  f.model.cfg.dropout = 0.0;
  f.model.cfg.seed = 8;
  std::vector<std::int32_t> train;
  for (int i = 0; i < n; ++i) train.push_back(i);
  gnn_train(f.model, f.ctx, f.X, f.labels, train, {});
  return f;
}

}  // namespace

TEST_CASE("identity swap keeps every prediction") {
  TrainedFixture f = edgeless_fixture();
  std::vector<std::int32_t> rows = {0, 1, 2, 3};
  Matrix own(4, 3);
  for (int i = 0; i < 4; ++i)
    for (int d = 0; d < 3; ++d) own(i, d) = f.X(rows[i], d);
  std::vector<int> swapped = predict_with_rows_replaced(f.model, f.ctx, f.X, rows, own);
  CHECK(swapped == gnn_predict(f.model, f.ctx, f.X).label);
}

TEST_CASE("feature-only model loses swapped predictions on an edgeless graph") {
  TrainedFixture f = edgeless_fixture();
  std::vector<std::int32_t> hate, nonhate;
  for (int i = 0; i < 30; ++i) (f.labels[i] == 1 ? hate : nonhate).push_back(i);
  SwapResult res =
      embedding_swap_diagnostic(f.model, f.ctx, f.X, hate, nonhate, f.labels);
  CHECK(res.baseline_correct_hate == 15);
  CHECK(res.retained_hate < 0.1);
  CHECK(res.retained_nonhate < 0.1);
}

TEST_CASE("swap diagnostic requires both class sets") {
  TrainedFixture f = edgeless_fixture();
  CHECK_THROWS(embedding_swap_diagnostic(f.model, f.ctx, f.X, {}, {1}, f.labels));
}

TEST_CASE("neighbor composition counts hateful neighbors") {
  // node 0 with 10 neighbors, 7 hateful
  std::vector<Edge> edges;
  std::vector<int> hateful(11, 0);
  for (int i = 1; i <= 10; ++i) {
    edges.push_back({0, i, 1.0});
    if (i <= 7) hateful[i] = 1;
  }
  DirectedGraph g = build_graph(12, edges);  // node 11 isolated
  CHECK(neighbor_composition(g, hateful, 0).value() == doctest::Approx(0.7));
  CHECK_FALSE(neighbor_composition(g, hateful, 11).has_value());

  std::vector<int> all_hate(12, 1);
  CHECK(neighbor_composition(g, all_hate, 0).value() == doctest::Approx(1.0));

  // radius 2 reaches the far end of a path
  DirectedGraph path = build_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  std::vector<int> h = {0, 0, 1};
  CHECK(neighbor_composition(path, h, 0, 2).value() == doctest::Approx(0.5));
}

TEST_CASE("hl post rate counts lexicon-bearing posts") {
  UserCorpus c;
  c.users = {"amy", "bob"};
  c.posts.resize(2);
  for (int i = 0; i < 50; ++i)
    c.posts[0].push_back({i, i == 7 ? "such blorg content" : "plain words here", {}});
  Lexicon lex = make_lexicon({{"blorg", "GroupA"}});
  CHECK(hl_post_rate(c, lex, 0) == doctest::Approx(2.0));
  CHECK(hl_post_rate(c, make_lexicon({}), 0) == doctest::Approx(0.0));
  CHECK_THROWS(hl_post_rate(c, lex, 1));  // no posts

  c.posts[1].push_back({1, "blorg blorg", {}});
  CHECK(hl_post_rate(c, lex, 1) == doctest::Approx(100.0));
  CHECK(hl_post_counts(c, lex) == std::vector<std::int64_t>{1, 1});
}

TEST_CASE("empty lexicon never matches") {
  Lexicon lex;
  CHECK_FALSE(matches_any_term({"anything"}, lex));
}

TEST_CASE("transfer to an identical target reproduces source metrics") {
  TrainedFixture f = edgeless_fixture();
  MetricsReport in_domain = [&] {
    std::vector<int> pred = gnn_predict(f.model, f.ctx, f.X).label;
    return macro_metrics(f.labels, pred);
  }();
  MetricsReport transferred = cross_platform_eval_gnn(f.model, f.ctx, f.X, f.labels);
  CHECK(transferred.macro_f1 == doctest::Approx(in_domain.macro_f1));
}

TEST_CASE("transfer metrics are invariant to node permutation") {
  Rng rng(55);
  DirectedGraph g = symmetrize(random_graph(10, 0.3, rng));
  Matrix X = random_matrix(10, 4, rng);
  std::vector<int> labels;
  for (int i = 0; i < 10; ++i) labels.push_back(i % 2);
  GraphContext ctx = make_graph_context(g);
  GnnModel model;
  model.cfg.variant = GnnVariant::Gcn;
  model.cfg.in_dim = 4;
  model.cfg.hidden_dim = 3;
  model.cfg.epochs = 40;
  model.cfg.dropout = 0.0;
  model.cfg.seed = 4;
  std::vector<std::int32_t> train = {0, 1, 2, 3, 4, 5, 6, 7};
  gnn_train(model, ctx, X, labels, train, {});

  std::vector<std::int32_t> perm = {4, 7, 0, 2, 9, 1, 8, 3, 6, 5};
  std::vector<Edge> pedges;
  for (std::int64_t u = 0; u < 10; ++u)
    for (std::int64_t e = g.adj.offsets[u]; e < g.adj.offsets[u + 1]; ++e)
      pedges.push_back({perm[u], perm[g.adj.col[e]], g.adj.val[e]});
  DirectedGraph pg = build_graph(10, pedges);
  GraphContext pctx = make_graph_context(pg);
  Matrix pX(10, 4);
  std::vector<int> plabels(10);
  for (int i = 0; i < 10; ++i) {
    plabels[perm[i]] = labels[i];
    for (int d = 0; d < 4; ++d) pX(perm[i], d) = X(i, d);
  }
  MetricsReport a = cross_platform_eval_gnn(model, ctx, X, labels);
  MetricsReport b = cross_platform_eval_gnn(model, pctx, pX, plabels);
  CHECK(a.macro_f1 == doctest::Approx(b.macro_f1));
  CHECK(a.per_class[1].recall == doctest::Approx(b.per_class[1].recall));
}

TEST_CASE("transfer rejects mismatched feature dimensions") {
  TrainedFixture f = edgeless_fixture();
  Matrix bad(30, 5);
  CHECK_THROWS(cross_platform_eval_gnn(f.model, f.ctx, bad, f.labels));
}

TEST_CASE("benchmark csv and summary are well formed") {
  Rng rng(66);
  DirectedGraph g = random_graph(24, 0.1, rng);
  Matrix X = random_matrix(24, 3, rng);
  std::vector<int> labels;
  for (int i = 0; i < 24; ++i) labels.push_back(i % 2);
  GraphContext ctx = make_graph_context(g);
  BenchContext bench{&g, &ctx, &X, &labels, 3};
  FoldPlan plan = make_fold_plan(labels, 4, {50}, 1);
  ModelFn constant = [](const BenchContext&, const std::vector<std::int32_t>&,
                        const std::vector<std::int32_t>& eval_nodes) {
    return std::vector<int>(eval_nodes.size(), 1);
  };
  auto rows = run_benchmark({{"constant", constant}}, bench, plan);
  std::string dir = std::filesystem::temp_directory_path() / "hg_eval_test";
  std::filesystem::create_directories(dir);
  save_benchmark_csv(rows, 3, dir + "/report.csv");
  auto lines = read_lines(dir + "/report.csv");
  CHECK(lines[0] == "model,m,fold,class,precision,recall,f1,macro_f1,accuracy,seed");
  CHECK(lines.size() == 1 + 4 * 2);  // 4 folds x 2 class rows
  std::string summary = benchmark_summary_json(rows);
  CHECK(summary.find("constant") != std::string::npos);
}
