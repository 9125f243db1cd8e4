#include "hategraph/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <memory>
#include <set>

#include <json.hpp>

#include "hategraph/belief.hpp"
#include "hategraph/io.hpp"
#include "hategraph/rng.hpp"

namespace fs = std::filesystem;

namespace hategraph {

namespace {

DatasetPaths dataset_paths_from_json(const nlohmann::json& j) {
  DatasetPaths p;
  if (j.contains("synth")) {
    p.use_synth = true;
    p.synth = synth_config_from_json(j["synth"].dump());
  }
  auto get = [&](const char* key, std::string& field) {
    if (j.contains(key)) field = j[key].get<std::string>();
  };
  get("edges", p.edges);
  get("posts", p.posts);
  get("labels", p.labels);
  get("lexicon", p.lexicon);
  get("edge_times", p.edge_times);
  return p;
}

}  // namespace

PipelineConfig parse_pipeline_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    throw PipelineError(std::string("bad config JSON: ") + e.what());
  }
  PipelineConfig cfg;
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
  if (j.contains("dataset")) cfg.dataset = dataset_paths_from_json(j["dataset"]);
  if (j.contains("target")) cfg.target = dataset_paths_from_json(j["target"]);

  if (j.contains("features")) {
    const auto& f = j["features"];
    if (f.contains("source")) cfg.feature_source = f["source"].get<std::string>();
    if (f.contains("pretrained")) cfg.pretrained_path = f["pretrained"].get<std::string>();
    if (f.contains("doc2vec")) {
      const auto& d = f["doc2vec"];
      if (d.contains("dim")) cfg.doc2vec.dim = d["dim"].get<int>();
      if (d.contains("negative")) cfg.doc2vec.negative = d["negative"].get<int>();
      if (d.contains("epochs")) cfg.doc2vec.epochs = d["epochs"].get<int>();
      if (d.contains("min_count")) cfg.doc2vec.min_count = d["min_count"].get<int>();
      if (d.contains("infer_epochs")) cfg.doc2vec.infer_epochs = d["infer_epochs"].get<int>();
      if (d.contains("alpha")) cfg.doc2vec.alpha = d["alpha"].get<double>();
      if (d.contains("min_alpha")) cfg.doc2vec.min_alpha = d["min_alpha"].get<double>();
    }
    if (f.contains("walks")) {
      const auto& w = f["walks"];
      if (w.contains("walks_per_node")) cfg.walk.walks_per_node = w["walks_per_node"].get<int>();
      if (w.contains("walk_length")) cfg.walk.walk_length = w["walk_length"].get<int>();
      if (w.contains("p")) cfg.walk.p = w["p"].get<double>();
      if (w.contains("q")) cfg.walk.q = w["q"].get<double>();
    }
    if (f.contains("skipgram")) {
      const auto& s = f["skipgram"];
      if (s.contains("dim")) cfg.skipgram.dim = s["dim"].get<int>();
      if (s.contains("window")) cfg.skipgram.window = s["window"].get<int>();
      if (s.contains("negative")) cfg.skipgram.negative = s["negative"].get<int>();
      if (s.contains("epochs")) cfg.skipgram.epochs = s["epochs"].get<int>();
    }
  }
  if (j.contains("model")) {
    const auto& m = j["model"];
    if (m.contains("name")) cfg.model = m["name"].get<std::string>();
    if (m.contains("hidden")) cfg.gnn.hidden_dim = m["hidden"].get<int>();
    if (m.contains("epochs")) cfg.gnn.epochs = m["epochs"].get<int>();
    if (m.contains("lr")) cfg.gnn.lr = m["lr"].get<double>();
    if (m.contains("weight_decay")) cfg.gnn.weight_decay = m["weight_decay"].get<double>();
    if (m.contains("dropout")) cfg.gnn.dropout = m["dropout"].get<double>();
    if (m.contains("cheb_k")) cfg.gnn.cheb_k = m["cheb_k"].get<int>();
    if (m.contains("agnn_hops")) cfg.gnn.agnn_hops = m["agnn_hops"].get<int>();
    if (m.contains("heads")) cfg.gnn.gat_heads = m["heads"].get<int>();
    if (m.contains("sage_sample")) cfg.gnn.sage_sample = m["sage_sample"].get<int>();
    if (m.contains("logistic")) {
      const auto& l = m["logistic"];
      if (l.contains("l2")) cfg.logistic.l2 = l["l2"].get<double>();
      if (l.contains("epochs")) cfg.logistic.epochs = l["epochs"].get<int>();
      if (l.contains("lr")) cfg.logistic.lr = l["lr"].get<double>();
    }
  }
  if (j.contains("folds")) {
    const auto& f = j["folds"];
    if (f.contains("k")) cfg.fold_k = f["k"].get<int>();
    if (f.contains("fractions")) cfg.fractions = f["fractions"].get<std::vector<int>>();
  }
  if (j.contains("benchmark") && j["benchmark"].contains("models"))
    cfg.bench_models = j["benchmark"]["models"].get<std::vector<std::string>>();
  if (j.contains("belief")) {
    const auto& b = j["belief"];
    if (b.contains("iterations")) cfg.diffusion_iterations = b["iterations"].get<int>();
    if (b.contains("seed_min_hl_posts"))
      cfg.seed_min_hl_posts = b["seed_min_hl_posts"].get<std::int64_t>();
    if (b.contains("per_tier")) cfg.per_tier = b["per_tier"].get<std::int64_t>();
    if (b.contains("min_posts")) cfg.tier_min_posts = b["min_posts"].get<std::int64_t>();
  }
  if (j.contains("posthoc")) {
    const auto& p = j["posthoc"];
    if (p.contains("trending_min_count"))
      cfg.trending_min_count = p["trending_min_count"].get<std::int64_t>();
    if (p.contains("trending_ratio")) cfg.trending_ratio = p["trending_ratio"].get<double>();
    if (p.contains("min_lifetime_posts"))
      cfg.min_lifetime_posts = p["min_lifetime_posts"].get<std::int64_t>();
  }
  cfg.config_json = j.dump(2);
  return cfg;
}

namespace {

void require_file(const std::string& path, const std::string& what) {
  if (path.empty()) throw PipelineError("config is missing a path for " + what);
  if (!fs::exists(path)) throw PipelineError("missing " + what + " file: " + path, path);
}

// generator seed derives from the root seed and the configured one, so the
// synth command and in-memory loads of the same config see identical data
SynthConfig resolve_synth(const SynthConfig& in, std::uint64_t root) {
  SynthConfig sc = in;
  sc.seed = mix_seed(substream(root, "synth-data"), in.seed);
  return sc;
}

}  // namespace

Dataset load_dataset(const DatasetPaths& paths, std::uint64_t seed) {
  Dataset ds;
  if (paths.use_synth) {
    SynthConfig sc = resolve_synth(paths.synth, seed);
    SynthDataset sd = generate(sc);
    ds.graph = std::move(sd.graph);
    ds.corpus = std::move(sd.corpus);
    ds.labels = std::move(sd.labels);
    ds.timed_edges = std::move(sd.timed_edges);
    ds.lexicon = std::move(sd.lexicon);
    ds.has_lexicon = true;
    ds.has_timed_edges = true;
    return ds;
  }
  require_file(paths.posts, "posts");
  require_file(paths.edges, "edge list");
  ds.corpus = load_posts_jsonl(paths.posts);
  if (ds.corpus.users.empty()) throw PipelineError("post corpus is empty", paths.posts);

  // graph over the corpus user set, in sorted-id order
  DirectedGraph edge_graph = load_edge_tsv(paths.edges);
  std::vector<Edge> edges;
  edges.reserve(edge_graph.num_edges());
  std::vector<std::int32_t> remap(edge_graph.num_nodes(), -1);
  for (std::int64_t u = 0; u < edge_graph.num_nodes(); ++u) {
    int idx = ds.corpus.user_index(edge_graph.names[u]);
    if (idx < 0)
      throw PipelineError("edge list user absent from post corpus: " + edge_graph.names[u],
                          paths.edges);
    remap[u] = idx;
  }
  for (std::int64_t u = 0; u < edge_graph.num_nodes(); ++u)
    for (std::int64_t e = edge_graph.adj.offsets[u]; e < edge_graph.adj.offsets[u + 1]; ++e)
      edges.push_back({remap[u], remap[edge_graph.adj.col[e]], edge_graph.adj.val[e]});
  ds.graph = build_graph(ds.corpus.num_users(), edges, ds.corpus.users);

  if (!paths.labels.empty()) {
    require_file(paths.labels, "labels");
    ds.labels = load_labels_csv(paths.labels, ds.corpus.users);
  } else {
    ds.labels.assign(ds.corpus.users.size(), -1);
  }
  if (!paths.lexicon.empty()) {
    require_file(paths.lexicon, "lexicon");
    ds.lexicon = load_lexicon_csv(paths.lexicon);
    ds.has_lexicon = true;
  }
  if (!paths.edge_times.empty()) {
    require_file(paths.edge_times, "timestamped edge list");
    ds.timed_edges = load_timed_edges_tsv(paths.edge_times, ds.corpus.users);
    ds.has_timed_edges = true;
  }
  return ds;
}

void center_columns(Matrix& X, std::vector<double>* mean_out) {
  std::vector<double> mean(X.cols, 0.0);
  for (std::int64_t i = 0; i < X.rows; ++i)
    for (std::int64_t j = 0; j < X.cols; ++j) mean[j] += X(i, j);
  for (double& m : mean) m /= static_cast<double>(std::max<std::int64_t>(1, X.rows));
  subtract_center(X, mean);
  if (mean_out) *mean_out = std::move(mean);
}

void subtract_center(Matrix& X, const std::vector<double>& center) {
  for (std::int64_t i = 0; i < X.rows; ++i)
    for (std::int64_t j = 0; j < X.cols; ++j) X(i, j) -= center[j];
}

FeatureSet compute_features(const Dataset& ds, const PipelineConfig& cfg) {
  FeatureSet out;
  if (cfg.feature_source == "doc2vec") {
    std::vector<UserDocument> docs = build_documents(ds.corpus);
    Doc2vecConfig dc = cfg.doc2vec;
    dc.seed = substream(cfg.seed, "doc2vec");
    out.doc2vec = train_doc2vec(docs, dc);
    out.has_doc2vec = true;
    out.X = out.doc2vec.doc_vectors;  // document order == user order
    center_columns(out.X, &out.center);
    return out;
  }
  if (cfg.feature_source == "pretrained") {
    require_file(cfg.pretrained_path, "pretrained embeddings");
    WordEmbeddings we = load_word_embeddings(cfg.pretrained_path);
    std::vector<UserDocument> docs = build_documents(ds.corpus);
    out.X = Matrix(ds.corpus.num_users(), we.dim);
    for (std::int64_t u = 0; u < ds.corpus.num_users(); ++u) {
      std::vector<double> v = mean_pool(docs[u].tokens, we);
      for (int j = 0; j < we.dim; ++j) out.X(u, j) = v[j];
    }
    return out;
  }
  if (cfg.feature_source == "deepwalk" || cfg.feature_source == "node2vec") {
    WalkConfig wc = cfg.walk;
    wc.second_order = cfg.feature_source == "node2vec";
    wc.seed = substream(cfg.seed, cfg.feature_source);
    auto walks = generate_walks(ds.graph, wc);
    SkipgramConfig sc = cfg.skipgram;
    sc.seed = substream(cfg.seed, cfg.feature_source + "-sgns");
    NodeEmbedding emb = train_skipgram(walks, ds.graph.num_nodes(), sc);
    out.X = std::move(emb.vectors);
    return out;
  }
  throw PipelineError("unknown feature source: " + cfg.feature_source);
}

GnnConfig gnn_config_for(const PipelineConfig& cfg, const std::string& variant,
                         std::int64_t in_dim, std::uint64_t seed) {
  GnnConfig g = cfg.gnn;
  g.variant = variant_from_name(variant);
  g.in_dim = static_cast<int>(in_dim);
  g.out_dim = 2;
  g.seed = seed;
  return g;
}

std::vector<std::int32_t> leftover_nodes(const std::vector<int>& labels,
                                         const std::vector<std::int32_t>& train_nodes,
                                         const std::vector<std::int32_t>& eval_nodes) {
  std::set<std::int32_t> used(train_nodes.begin(), train_nodes.end());
  used.insert(eval_nodes.begin(), eval_nodes.end());
  std::vector<std::int32_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] >= 0 && !used.count(static_cast<std::int32_t>(i)))
      out.push_back(static_cast<std::int32_t>(i));
  return out;
}

namespace {

std::uint64_t cell_seed(std::uint64_t root, const std::string& model,
                        const std::vector<std::int32_t>& train_nodes) {
  std::uint64_t h = substream(root, "bench-" + model);
  for (std::int32_t v : train_nodes) h = mix_seed(h, static_cast<std::uint64_t>(v));
  return h;
}

std::vector<int> predictions_at(const std::vector<int>& full,
                                const std::vector<std::int32_t>& nodes) {
  std::vector<int> out;
  out.reserve(nodes.size());
  for (std::int32_t i : nodes) out.push_back(full[i]);
  return out;
}

ModelFn make_gnn_model_fn(const std::string& variant, const PipelineConfig& cfg) {
  return [variant, cfg](const BenchContext& bench,
                        const std::vector<std::int32_t>& train_nodes,
                        const std::vector<std::int32_t>& eval_nodes) {
    GnnModel model;
    model.cfg = gnn_config_for(cfg, variant, bench.features->cols,
                               cell_seed(bench.seed, variant, train_nodes));
    std::vector<std::int32_t> val =
        leftover_nodes(*bench.labels, train_nodes, eval_nodes);
    gnn_train(model, *bench.ctx, *bench.features, *bench.labels, train_nodes, val);
    Prediction pred = gnn_predict(model, *bench.ctx, *bench.features);
    return predictions_at(pred.label, eval_nodes);
  };
}

ModelFn make_logistic_fn(const PipelineConfig& cfg, std::shared_ptr<const Matrix> features) {
  return [cfg, features](const BenchContext& bench,
                         const std::vector<std::int32_t>& train_nodes,
                         const std::vector<std::int32_t>& eval_nodes) {
    const Matrix& X = features ? *features : *bench.features;
    Matrix Xtr(static_cast<std::int64_t>(train_nodes.size()), X.cols);
    std::vector<int> ytr;
    for (std::size_t i = 0; i < train_nodes.size(); ++i) {
      const double* src = X.row(train_nodes[i]);
      double* dst = Xtr.row(static_cast<std::int64_t>(i));
      for (std::int64_t j = 0; j < X.cols; ++j) dst[j] = src[j];
      ytr.push_back((*bench.labels)[train_nodes[i]]);
    }
    LogisticConfig lc = cfg.logistic;
    lc.seed = cell_seed(bench.seed, "logistic", train_nodes);
    LogisticModel m = train_logistic(Xtr, ytr, lc);
    std::vector<int> out;
    out.reserve(eval_nodes.size());
    for (std::int32_t i : eval_nodes) {
      Matrix row(1, X.cols);
      for (std::int64_t j = 0; j < X.cols; ++j) row(0, j) = X(i, j);
      out.push_back(predict_logistic(m, row)[0] >= 0.5 ? 1 : 0);
    }
    return out;
  };
}

}  // namespace

std::vector<std::pair<std::string, ModelFn>> make_benchmark_models(
    const std::vector<std::string>& names, const PipelineConfig& cfg) {
  std::vector<std::pair<std::string, ModelFn>> out;
  for (const std::string& name : names) {
    if (name == "gcn" || name == "cheb" || name == "sage" || name == "agnn" ||
        name == "gat") {
      out.emplace_back(name, make_gnn_model_fn(name, cfg));
    } else if (name == "logistic") {
      out.emplace_back(name, make_logistic_fn(cfg, nullptr));
    } else if (name == "deepwalk" || name == "node2vec") {
      // node embeddings are unsupervised: train once, share across cells
      auto cache = std::make_shared<std::shared_ptr<Matrix>>();
      PipelineConfig sub = cfg;
      sub.feature_source = name;
      ModelFn fn = [sub, cache](const BenchContext& bench,
                                const std::vector<std::int32_t>& train_nodes,
                                const std::vector<std::int32_t>& eval_nodes) {
        if (!*cache) {
          Dataset view;
          view.graph = *bench.graph;
          FeatureSet fs;
          WalkConfig wc = sub.walk;
          wc.second_order = sub.feature_source == "node2vec";
          wc.seed = substream(bench.seed, sub.feature_source);
          auto walks = generate_walks(view.graph, wc);
          SkipgramConfig sc = sub.skipgram;
          sc.seed = substream(bench.seed, sub.feature_source + "-sgns");
          NodeEmbedding emb = train_skipgram(walks, view.graph.num_nodes(), sc);
          *cache = std::make_shared<Matrix>(std::move(emb.vectors));
        }
        return make_logistic_fn(sub, *cache)(bench, train_nodes, eval_nodes);
      };
      out.emplace_back(name, std::move(fn));
    } else {
      throw PipelineError("unknown benchmark model: " + name);
    }
  }
  return out;
}

void ManifestBuilder::add_input(const std::string& path) {
  inputs.emplace_back(path, content_hash(path));
}
void ManifestBuilder::add_output(const std::string& path) {
  outputs.emplace_back(path, content_hash(path));
}
void ManifestBuilder::write(const std::string& path) const {
  nlohmann::json j;
  j["command"] = command;
  j["seed"] = seed;
  j["config"] = config_json.empty() ? nlohmann::json::object()
                                    : nlohmann::json::parse(config_json);
  for (const auto& [p, h] : inputs) j["inputs"][p] = h;
  if (inputs.empty()) j["inputs"] = nlohmann::json::object();
  for (const auto& [p, h] : outputs) j["outputs"][p] = h;
  write_file(path, j.dump(2) + "\n");
}

namespace {

ManifestBuilder start_manifest(const PipelineConfig& cfg, const std::string& command) {
  fs::create_directories(cfg.out_dir);
  ManifestBuilder m;
  m.command = command;
  m.config_json = cfg.config_json;
  m.seed = cfg.seed;
  return m;
}

void add_dataset_inputs(ManifestBuilder& m, const DatasetPaths& p) {
  if (p.use_synth) return;
  for (const std::string& path : {p.edges, p.posts, p.labels, p.lexicon, p.edge_times})
    if (!path.empty()) m.add_input(path);
}

std::vector<std::int32_t> labeled_nodes(const std::vector<int>& labels) {
  std::vector<std::int32_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] >= 0) out.push_back(static_cast<std::int32_t>(i));
  return out;
}

}  // namespace

int cmd_synth(const PipelineConfig& cfg) {
  if (!cfg.dataset.use_synth)
    throw PipelineError("synth command needs dataset.synth in the config");
  ManifestBuilder manifest = start_manifest(cfg, "synth");
  SynthConfig sc = resolve_synth(cfg.dataset.synth, cfg.seed);
  SynthDataset ds = generate(sc);
  write_dataset(ds, cfg.out_dir);

  // belief-guided annotation sampling over the generated repost graph
  NormalizedAdjacency op = build_belief_network(ds.graph);
  std::vector<std::int64_t> hl_counts = hl_post_counts(ds.corpus, ds.lexicon);
  std::vector<std::int32_t> seeds;
  for (std::size_t i = 0; i < hl_counts.size(); ++i)
    if (hl_counts[i] >= cfg.seed_min_hl_posts)
      seeds.push_back(static_cast<std::int32_t>(i));
  BeliefVector belief = diffuse(op, seeds, cfg.diffusion_iterations);
  TierAssignment tiers = kmeans_1d(belief.values, 3);
  save_belief_csv(belief, tiers, ds.corpus.users, cfg.out_dir + "/belief.csv");
  TierSample sample = sample_tiers(tiers, cfg.per_tier, cfg.tier_min_posts,
                                   ds.corpus.post_counts(),
                                   substream(cfg.seed, "tier-sample"));
  std::string sampled = "user,tier\n";
  static const char* tier_name[] = {"low", "medium", "high"};
  for (std::int32_t u : sample.nodes)
    sampled += csv_escape(ds.corpus.users[u]) + "," +
               tier_name[static_cast<int>(tiers.tier[u])] + "\n";
  write_file(cfg.out_dir + "/sampled_users.csv", sampled);
  for (std::size_t t = 0; t < sample.shortfall.size(); ++t)
    if (sample.shortfall[t] > 0)
      std::fprintf(stderr, "tier %s shortfall: %lld\n", tier_name[t],
                   static_cast<long long>(sample.shortfall[t]));

  for (const char* f : {"edges.tsv", "edge_times.tsv", "posts.jsonl", "labels.csv",
                        "lexicon.csv", "config.json", "belief.csv", "sampled_users.csv"})
    manifest.add_output(cfg.out_dir + "/" + f);
  manifest.write(cfg.out_dir + "/manifest.json");
  return 0;
}

int cmd_embed(const PipelineConfig& cfg) {
  ManifestBuilder manifest = start_manifest(cfg, "embed");
  add_dataset_inputs(manifest, cfg.dataset);
  Dataset ds = load_dataset(cfg.dataset, cfg.seed);
  FeatureSet fs = compute_features(ds, cfg);
  if (fs.has_doc2vec) {
    save_doc2vec(fs.doc2vec, cfg.out_dir + "/doc2vec.hgemb");
    manifest.add_output(cfg.out_dir + "/doc2vec.hgemb");
  }
  EmbeddingMatrixFile emb;
  emb.dim = static_cast<int>(fs.X.cols);
  emb.keys = ds.corpus.users;
  emb.rows = fs.X;
  save_embedding_matrix(emb, cfg.out_dir + "/features.hgemb");
  manifest.add_output(cfg.out_dir + "/features.hgemb");
  manifest.write(cfg.out_dir + "/manifest.json");
  return 0;
}

int cmd_train(const PipelineConfig& cfg) {
  ManifestBuilder manifest = start_manifest(cfg, "train");
  add_dataset_inputs(manifest, cfg.dataset);
  Dataset ds = load_dataset(cfg.dataset, cfg.seed);
  std::vector<std::int32_t> train = labeled_nodes(ds.labels);
  if (train.empty()) throw PipelineError("no labeled nodes to train on");
  FeatureSet fs = compute_features(ds, cfg);

  if (cfg.model == "logistic") {
    Matrix Xtr(static_cast<std::int64_t>(train.size()), fs.X.cols);
    std::vector<int> ytr;
    for (std::size_t i = 0; i < train.size(); ++i) {
      for (std::int64_t j = 0; j < fs.X.cols; ++j)
        Xtr(static_cast<std::int64_t>(i), j) = fs.X(train[i], j);
      ytr.push_back(ds.labels[train[i]]);
    }
    LogisticConfig lc = cfg.logistic;
    lc.seed = substream(cfg.seed, "logistic");
    LogisticModel m = train_logistic(Xtr, ytr, lc);
    nlohmann::json j;
    j["weights"] = m.w;
    j["bias"] = m.bias;
    j["l2"] = m.l2;
    write_file(cfg.out_dir + "/logistic.json", j.dump(2) + "\n");
    manifest.add_output(cfg.out_dir + "/logistic.json");
  } else {
    GraphContext ctx = make_graph_context(symmetrize(ds.graph));
    GnnModel model;
    model.cfg = gnn_config_for(cfg, cfg.model, fs.X.cols, substream(cfg.seed, "gnn"));
    TrainCurve curve = gnn_train(model, ctx, fs.X, ds.labels, train, {});
    save_gnn(model, cfg.out_dir + "/model.hggnn");
    save_loss_curve_csv(curve, cfg.out_dir + "/loss_curve.csv");
    manifest.add_output(cfg.out_dir + "/model.hggnn");
    manifest.add_output(cfg.out_dir + "/loss_curve.csv");
  }
  if (fs.has_doc2vec) {
    save_doc2vec(fs.doc2vec, cfg.out_dir + "/doc2vec.hgemb");
    manifest.add_output(cfg.out_dir + "/doc2vec.hgemb");
  }
  manifest.write(cfg.out_dir + "/manifest.json");
  return 0;
}

int cmd_benchmark(const PipelineConfig& cfg) {
  ManifestBuilder manifest = start_manifest(cfg, "benchmark");
  add_dataset_inputs(manifest, cfg.dataset);
  Dataset ds = load_dataset(cfg.dataset, cfg.seed);
  FeatureSet fs = compute_features(ds, cfg);
  GraphContext ctx = make_graph_context(symmetrize(ds.graph));

  FoldPlan plan = make_fold_plan(ds.labels, cfg.fold_k, cfg.fractions,
                                 substream(cfg.seed, "folds"));
  BenchContext bench;
  bench.graph = &ds.graph;
  bench.ctx = &ctx;
  bench.features = &fs.X;
  bench.labels = &ds.labels;
  bench.seed = cfg.seed;
  auto models = make_benchmark_models(cfg.bench_models, cfg);
  std::vector<BenchRow> rows = run_benchmark(models, bench, plan);
  save_benchmark_csv(rows, cfg.seed, cfg.out_dir + "/report.csv");
  write_file(cfg.out_dir + "/summary.json", benchmark_summary_json(rows));
  manifest.add_output(cfg.out_dir + "/report.csv");
  manifest.add_output(cfg.out_dir + "/summary.json");
  manifest.write(cfg.out_dir + "/manifest.json");
  return 0;
}

int cmd_transfer(const PipelineConfig& cfg) {
  ManifestBuilder manifest = start_manifest(cfg, "transfer");
  add_dataset_inputs(manifest, cfg.dataset);
  add_dataset_inputs(manifest, cfg.target);
  Dataset src = load_dataset(cfg.dataset, cfg.seed);
  Dataset dst = load_dataset(cfg.target, mix_seed(cfg.seed, fnv1a64("target")));
  if (cfg.feature_source != "doc2vec")
    throw PipelineError("transfer evaluation uses doc2vec features");

  FeatureSet fs = compute_features(src, cfg);
  std::vector<std::int32_t> train = labeled_nodes(src.labels);
  if (train.empty()) throw PipelineError("no labeled source nodes");

  // target features inferred under the source document model (zero-shot)
  std::vector<UserDocument> tgt_docs = build_documents(dst.corpus);
  Matrix Xt(dst.corpus.num_users(), fs.doc2vec.cfg.dim);
  for (std::int64_t u = 0; u < dst.corpus.num_users(); ++u) {
    InferResult ir = infer_doc_vector(fs.doc2vec, tgt_docs[u].tokens,
                                      mix_seed(substream(cfg.seed, "transfer-infer"),
                                               static_cast<std::uint64_t>(u)));
    for (int j = 0; j < fs.doc2vec.cfg.dim; ++j) Xt(u, j) = ir.vec[j];
  }
  subtract_center(Xt, fs.center);  // same affine transform as the source features

  GraphContext src_ctx = make_graph_context(symmetrize(src.graph));
  GraphContext dst_ctx = make_graph_context(symmetrize(dst.graph));
  GnnModel model;
  model.cfg = gnn_config_for(cfg, cfg.model == "logistic" ? "agnn" : cfg.model,
                             fs.X.cols, substream(cfg.seed, "gnn"));
  gnn_train(model, src_ctx, fs.X, src.labels, train, {});
  MetricsReport gnn_rep = cross_platform_eval_gnn(model, dst_ctx, Xt, dst.labels);

  Matrix Xtr(static_cast<std::int64_t>(train.size()), fs.X.cols);
  std::vector<int> ytr;
  for (std::size_t i = 0; i < train.size(); ++i) {
    for (std::int64_t j = 0; j < fs.X.cols; ++j)
      Xtr(static_cast<std::int64_t>(i), j) = fs.X(train[i], j);
    ytr.push_back(src.labels[train[i]]);
  }
  LogisticConfig lc = cfg.logistic;
  lc.seed = substream(cfg.seed, "logistic");
  LogisticModel logit = train_logistic(Xtr, ytr, lc);
  std::vector<double> probs = predict_logistic(logit, Xt);
  std::vector<int> truth, guess;
  for (std::size_t i = 0; i < dst.labels.size(); ++i) {
    if (dst.labels[i] < 0) continue;
    truth.push_back(dst.labels[i]);
    guess.push_back(probs[i] >= 0.5 ? 1 : 0);
  }
  MetricsReport logit_rep = macro_metrics(truth, guess);

  auto report_json = [](const MetricsReport& r) {
    nlohmann::json j;
    j["macro_f1"] = r.macro_f1;
    j["accuracy"] = r.accuracy;
    for (int c = 0; c < 2; ++c) {
      nlohmann::json cj;
      cj["precision"] = r.per_class[c].precision;
      cj["recall"] = r.per_class[c].recall;
      cj["f1"] = r.per_class[c].f1;
      j[c == 1 ? "hate" : "non_hate"] = cj;
    }
    return j;
  };
  nlohmann::json j;
  j[cfg.model == "logistic" ? "agnn" : cfg.model] = report_json(gnn_rep);
  j["logistic"] = report_json(logit_rep);
  write_file(cfg.out_dir + "/transfer.json", j.dump(2) + "\n");
  manifest.add_output(cfg.out_dir + "/transfer.json");
  manifest.write(cfg.out_dir + "/manifest.json");
  return 0;
}

int cmd_posthoc(const PipelineConfig& cfg) {
  ManifestBuilder manifest = start_manifest(cfg, "posthoc");
  add_dataset_inputs(manifest, cfg.dataset);
  Dataset ds = load_dataset(cfg.dataset, cfg.seed);
  if (!ds.has_timed_edges) throw PipelineError("posthoc needs a timestamped edge list");
  if (!ds.has_lexicon) throw PipelineError("posthoc needs a lexicon");
  std::vector<std::int32_t> train = labeled_nodes(ds.labels);
  if (train.empty()) throw PipelineError("posthoc needs labels to train the model");

  // months spanned by the data
  std::int64_t min_ts = INT64_MAX, max_ts = INT64_MIN;
  for (const auto& posts : ds.corpus.posts)
    for (const Post& p : posts) {
      min_ts = std::min(min_ts, p.ts);
      max_ts = std::max(max_ts, p.ts);
    }
  for (const TimedEdge& e : ds.timed_edges) {
    min_ts = std::min(min_ts, e.ts);
    max_ts = std::max(max_ts, e.ts);
  }
  if (min_ts > max_ts) throw PipelineError("no timestamped activity in dataset");
  Month first = parse_month("1970-01");
  while (month_end_ts(first) <= min_ts) {
    if (++first.month > 12) {
      first.month = 1;
      ++first.year;
    }
  }
  std::vector<Month> months;
  Month m = first;
  while (month_start_ts(m) <= max_ts) {
    months.push_back(m);
    if (++m.month > 12) {
      m.month = 1;
      ++m.year;
    }
  }

  SnapshotSeries snaps = build_snapshots(ds.corpus, ds.timed_edges, months,
                                         cfg.min_lifetime_posts);

  // model trained once on the full data, applied to every snapshot
  FeatureSet fs = compute_features(ds, cfg);
  if (!fs.has_doc2vec) throw PipelineError("posthoc uses doc2vec features");
  GraphContext full_ctx = make_graph_context(symmetrize(ds.graph));
  GnnModel model;
  model.cfg = gnn_config_for(cfg, cfg.model == "logistic" ? "agnn" : cfg.model,
                             fs.X.cols, substream(cfg.seed, "gnn"));
  gnn_train(model, full_ctx, fs.X, ds.labels, train, {});

  const std::int64_t n = ds.corpus.num_users();
  std::vector<std::vector<int>> raw(months.size(), std::vector<int>(n, 0));
  for (std::size_t t = 0; t < months.size(); ++t) {
    // snapshot documents and graph
    std::vector<UserDocument> docs(n);
    for (std::int64_t u = 0; u < n; ++u) {
      docs[u].user = ds.corpus.users[u];
      for (std::int32_t p = 0; p < snaps.posts_upto[t][u]; ++p) {
        auto toks = preprocess(ds.corpus.posts[u][p].text);
        docs[u].tokens.insert(docs[u].tokens.end(), toks.begin(), toks.end());
      }
    }
    Matrix Xt(n, fs.doc2vec.cfg.dim);
    for (std::int64_t u = 0; u < n; ++u) {
      if (docs[u].tokens.empty()) continue;
      InferResult ir = infer_doc_vector(
          fs.doc2vec, docs[u].tokens,
          mix_seed(substream(cfg.seed, "posthoc-infer"),
                   static_cast<std::uint64_t>(t * n + u)));
      for (int j = 0; j < fs.doc2vec.cfg.dim; ++j) Xt(u, j) = ir.vec[j];
    }
    std::vector<Edge> edges;
    for (std::int64_t e = 0; e < snaps.edges_upto[t]; ++e) {
      const TimedEdge& te = snaps.edges_sorted[e];
      edges.push_back({te.src, te.dst, te.weight});
    }
    GraphContext ctx = make_graph_context(
        symmetrize(build_graph(n, edges, ds.corpus.users)));
    Prediction pred = gnn_predict(model, ctx, Xt);
    for (std::int64_t u = 0; u < n; ++u)
      raw[t][u] = snaps.posts_upto[t][u] > 0 && snaps.eligible[u] ? pred.label[u] : 0;
  }
  std::vector<std::vector<int>> sticky = sticky_labels(raw);

  // per-month target attribution over the month's posts of hateful users
  std::string targets_csv = "month,community,post_count,user_count\n";
  std::string joint_csv = "month,bucket,user_count\n";
  std::string trending_csv = "month,hashtag,count\n";
  std::map<std::string, std::int64_t> prev_tags;
  nlohmann::json report;
  for (std::size_t t = 0; t < months.size(); ++t) {
    std::int64_t start = month_start_ts(months[t]);
    std::int64_t end = month_end_ts(months[t]);
    bool first_month = t == 0;
    std::map<std::string, std::int64_t> post_count, user_count;
    std::set<std::string> communities;
    for (const auto& e : ds.lexicon.entries) communities.insert(e.community);
    for (const std::string& c : communities) {
      post_count[c] = 0;
      user_count[c] = 0;
    }
    std::vector<std::vector<std::string>> hateful_user_targets;
    std::map<std::string, std::int64_t> tags;
    for (std::int64_t u = 0; u < n; ++u) {
      if (sticky[t][u] != 1) continue;
      std::set<std::string> user_communities;
      for (const Post& p : ds.corpus.posts[u]) {
        std::int64_t ts = p.ts < month_start_ts(months[0]) ? month_start_ts(months[0]) : p.ts;
        bool in_month = first_month ? ts < end : (ts >= start && ts < end);
        if (!in_month) continue;
        for (const std::string& tag : p.hashtags) tags[tag]++;
        auto tokens = preprocess_keep_hashtags(p.text);
        for (const auto& entry : ds.lexicon.entries) {
          if (contains_phrase(tokens, entry.tokens)) {
            post_count[entry.community]++;
            user_communities.insert(entry.community);
          }
        }
      }
      for (const std::string& c : user_communities) user_count[c]++;
      if (!user_communities.empty())
        hateful_user_targets.emplace_back(user_communities.begin(),
                                          user_communities.end());
    }
    std::vector<std::string> tracked(communities.begin(), communities.end());
    auto buckets = joint_target_counts(hateful_user_targets, tracked);
    auto trending = trending_hashtags(tags, prev_tags, cfg.trending_min_count,
                                      cfg.trending_ratio);
    prev_tags = tags;

    std::string ms = month_str(months[t]);
    for (const auto& [c, pc] : post_count)
      targets_csv += ms + "," + csv_escape(c) + "," + std::to_string(pc) + "," +
                     std::to_string(user_count[c]) + "\n";
    for (const auto& [bucket, count] : buckets)
      joint_csv += ms + "," + csv_escape(bucket) + "," + std::to_string(count) + "\n";
    for (const auto& e : trending)
      trending_csv += ms + "," + csv_escape(e.hashtag) + "," + std::to_string(e.count) + "\n";

    nlohmann::json mj;
    std::int64_t hateful_now = 0;
    for (std::int64_t u = 0; u < n; ++u) hateful_now += sticky[t][u] == 1;
    mj["hateful_users"] = hateful_now;
    for (const auto& [c, pc] : post_count) {
      mj["targets"][c]["posts"] = pc;
      mj["targets"][c]["users"] = user_count[c];
    }
    for (const auto& [bucket, count] : buckets) mj["joint"][bucket] = count;
    for (const auto& e : trending) mj["trending"].push_back(e.hashtag);
    if (!mj.contains("trending")) mj["trending"] = nlohmann::json::array();
    report[ms] = mj;
  }
  write_file(cfg.out_dir + "/targets.csv", targets_csv);
  write_file(cfg.out_dir + "/joint_targets.csv", joint_csv);
  write_file(cfg.out_dir + "/trending.csv", trending_csv);
  write_file(cfg.out_dir + "/posthoc.json", report.dump(2) + "\n");
  for (const char* f : {"targets.csv", "joint_targets.csv", "trending.csv", "posthoc.json"})
    manifest.add_output(cfg.out_dir + "/" + std::string(f));
  manifest.write(cfg.out_dir + "/manifest.json");
  return 0;
}

}  // namespace hategraph
