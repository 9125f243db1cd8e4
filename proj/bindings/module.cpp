#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hategraph/belief.hpp"
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

namespace py = pybind11;
using namespace hategraph;

namespace {

Matrix matrix_from_numpy(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
  if (arr.ndim() != 2) throw std::invalid_argument("expected a 2-D array");
  Matrix m(arr.shape(0), arr.shape(1));
  std::memcpy(m.a.data(), arr.data(), sizeof(double) * m.a.size());
  return m;
}

py::array_t<double> numpy_from_matrix(const Matrix& m) {
  py::array_t<double> arr({m.rows, m.cols});
  std::memcpy(arr.mutable_data(), m.a.data(), sizeof(double) * m.a.size());
  return arr;
}

DirectedGraph graph_from_edges(std::int64_t num_nodes,
                               const std::vector<std::tuple<int, int, double>>& edges) {
  std::vector<Edge> es;
  es.reserve(edges.size());
  for (const auto& [s, d, w] : edges)
    es.push_back({static_cast<std::int32_t>(s), static_cast<std::int32_t>(d), w});
  return build_graph(num_nodes, es);
}

UserCorpus corpus_from_records(
    const std::vector<std::tuple<std::string, std::int64_t, std::string>>& records) {
  std::map<std::string, std::vector<Post>> by_user;
  for (const auto& [user, ts, text] : records) {
    Post p;
    p.ts = ts;
    p.text = text;
    p.hashtags = extract_hashtags(text);
    by_user[user].push_back(std::move(p));
  }
  UserCorpus corpus;
  for (auto& [user, posts] : by_user) {
    std::stable_sort(posts.begin(), posts.end(),
                     [](const Post& a, const Post& b) { return a.ts < b.ts; });
    corpus.users.push_back(user);
    corpus.posts.push_back(std::move(posts));
  }
  return corpus;
}

py::dict metrics_dict(const MetricsReport& r) {
  py::dict d;
  d["macro_f1"] = r.macro_f1;
  d["accuracy"] = r.accuracy;
  for (int c = 0; c < 2; ++c) {
    py::dict cd;
    cd["precision"] = r.per_class[c].precision;
    cd["recall"] = r.per_class[c].recall;
    cd["f1"] = r.per_class[c].f1;
    d[c == 1 ? "hate" : "non_hate"] = cd;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "hateful-user detection pipeline: graphs, diffusion, embeddings, "
            "graph neural classifiers, benchmarks, temporal analytics";

  py::class_<DirectedGraph>(m, "DirectedGraph")
      .def(py::init([](std::int64_t n, const std::vector<std::tuple<int, int, double>>& e) {
             return graph_from_edges(n, e);
           }),
           py::arg("num_nodes"), py::arg("edges"))
      .def_property_readonly("num_nodes", &DirectedGraph::num_nodes)
      .def_property_readonly("num_edges", &DirectedGraph::num_edges)
      .def("edges",
           [](const DirectedGraph& g) {
             std::vector<std::tuple<int, int, double>> out;
             for (std::int64_t u = 0; u < g.num_nodes(); ++u)
               for (std::int64_t e = g.adj.offsets[u]; e < g.adj.offsets[u + 1]; ++e)
                 out.emplace_back(static_cast<int>(u), g.adj.col[e], g.adj.val[e]);
             return out;
           })
      .def("reverse", [](const DirectedGraph& g) { return reverse(g); })
      .def("symmetrize", [](const DirectedGraph& g) { return symmetrize(g); });

  m.def("load_edge_tsv", &load_edge_tsv, py::arg("path"));

  py::enum_<NormKind>(m, "NormKind")
      .value("SYMMETRIC_GCN", NormKind::SymmetricGcn)
      .value("ROW_STOCHASTIC", NormKind::RowStochastic)
      .value("SCALED_LAPLACIAN", NormKind::ScaledLaplacian);

  py::class_<NormalizedAdjacency>(m, "NormalizedAdjacency")
      .def_property_readonly("kind", [](const NormalizedAdjacency& a) { return a.kind; })
      .def("to_dense", [](const NormalizedAdjacency& a) { return numpy_from_matrix(csr_to_dense(a.m)); })
      .def("spmm", [](const NormalizedAdjacency& a, const py::array_t<double>& x) {
        return numpy_from_matrix(spmm(a, matrix_from_numpy(x)));
      });

  m.def("normalize", &normalize, py::arg("graph"), py::arg("kind"));
  m.def("extract_1_5_degree",
        [](const DirectedGraph& g, const std::vector<std::int32_t>& seeds,
           std::int64_t min_posts, const std::vector<std::int64_t>& post_counts) {
          SubgraphResult r = extract_1_5_degree(g, seeds, min_posts, post_counts);
          return py::make_tuple(r.graph, r.original_id);
        },
        py::arg("graph"), py::arg("seeds"), py::arg("min_posts"), py::arg("post_counts"));

  m.def("build_belief_network", &build_belief_network, py::arg("repost_graph"));
  m.def("diffuse",
        [](const NormalizedAdjacency& op, const std::vector<std::int32_t>& seeds,
           int iterations) { return diffuse(op, seeds, iterations).values; },
        py::arg("op"), py::arg("seeds"), py::arg("iterations") = 5);
  m.def("kmeans_1d",
        [](const std::vector<double>& scores, int k) {
          TierAssignment t = kmeans_1d(scores, k);
          std::vector<int> tiers;
          tiers.reserve(t.tier.size());
          for (Tier tier : t.tier) tiers.push_back(static_cast<int>(tier));
          return py::make_tuple(tiers, t.centroids);
        },
        py::arg("scores"), py::arg("k") = 3);
  m.def("sample_tiers",
        [](const std::vector<int>& tiers, const std::vector<double>& centroids,
           std::int64_t per_tier, std::int64_t min_posts,
           const std::vector<std::int64_t>& post_counts, std::uint64_t seed) {
          TierAssignment t;
          t.centroids = centroids;
          for (int v : tiers) t.tier.push_back(static_cast<Tier>(v));
          TierSample s = sample_tiers(t, per_tier, min_posts, post_counts, seed);
          return py::make_tuple(s.nodes, s.shortfall);
        },
        py::arg("tiers"), py::arg("centroids"), py::arg("per_tier"), py::arg("min_posts"),
        py::arg("post_counts"), py::arg("seed"));

  m.def("preprocess", &preprocess, py::arg("text"));
  m.def("preprocess_keep_hashtags", &preprocess_keep_hashtags, py::arg("text"));
  m.def("extract_hashtags", &extract_hashtags, py::arg("text"));

  py::class_<UserCorpus>(m, "UserCorpus")
      .def(py::init(&corpus_from_records), py::arg("records"))
      .def_property_readonly("users", [](const UserCorpus& c) { return c.users; })
      .def("post_counts", &UserCorpus::post_counts)
      .def("user_index", &UserCorpus::user_index);
  m.def("load_posts_jsonl", &load_posts_jsonl, py::arg("path"));

  py::class_<Doc2vecModel>(m, "Doc2vecModel")
      .def_property_readonly("doc_keys", [](const Doc2vecModel& m2) { return m2.doc_keys; })
      .def_property_readonly("doc_vectors",
                             [](const Doc2vecModel& m2) { return numpy_from_matrix(m2.doc_vectors); })
      .def_property_readonly("epoch_loss", [](const Doc2vecModel& m2) { return m2.epoch_loss; })
      .def("infer",
           [](const Doc2vecModel& m2, const std::vector<std::string>& tokens,
              std::uint64_t seed) { return infer_doc_vector(m2, tokens, seed).vec; },
           py::arg("tokens"), py::arg("seed") = 1)
      .def("save", &save_doc2vec, py::arg("path"));

  m.def("train_doc2vec",
        [](const UserCorpus& corpus, int dim, int epochs, int negative, int min_count,
           std::uint64_t seed) {
          Doc2vecConfig cfg;
          cfg.dim = dim;
          cfg.epochs = epochs;
          cfg.negative = negative;
          cfg.min_count = min_count;
          cfg.seed = seed;
          return train_doc2vec(build_documents(corpus), cfg);
        },
        py::arg("corpus"), py::arg("dim") = 100, py::arg("epochs") = 10,
        py::arg("negative") = 5, py::arg("min_count") = 2, py::arg("seed") = 1);
  m.def("load_doc2vec", &load_doc2vec, py::arg("path"));

  m.def("generate_walks",
        [](const DirectedGraph& g, int walks_per_node, int walk_length, bool second_order,
           double p, double q, std::uint64_t seed) {
          WalkConfig cfg;
          cfg.walks_per_node = walks_per_node;
          cfg.walk_length = walk_length;
          cfg.second_order = second_order;
          cfg.p = p;
          cfg.q = q;
          cfg.seed = seed;
          return generate_walks(g, cfg);
        },
        py::arg("graph"), py::arg("walks_per_node") = 10, py::arg("walk_length") = 80,
        py::arg("second_order") = false, py::arg("p") = 1.0, py::arg("q") = 1.0,
        py::arg("seed") = 1);
  m.def("train_skipgram",
        [](const std::vector<std::vector<std::int32_t>>& walks, std::int64_t num_nodes,
           int dim, int window, int epochs, std::uint64_t seed) {
          SkipgramConfig cfg;
          cfg.dim = dim;
          cfg.window = window;
          cfg.epochs = epochs;
          cfg.seed = seed;
          return numpy_from_matrix(train_skipgram(walks, num_nodes, cfg).vectors);
        },
        py::arg("walks"), py::arg("num_nodes"), py::arg("dim") = 128,
        py::arg("window") = 10, py::arg("epochs") = 5, py::arg("seed") = 1);

  m.def("train_logistic",
        [](const py::array_t<double>& X, const std::vector<int>& y, double l2, int epochs,
           double lr) {
          LogisticConfig cfg;
          cfg.l2 = l2;
          cfg.epochs = epochs;
          cfg.lr = lr;
          LogisticModel lm = train_logistic(matrix_from_numpy(X), y, cfg);
          return py::make_tuple(lm.w, lm.bias);
        },
        py::arg("X"), py::arg("y"), py::arg("l2") = 1e-4, py::arg("epochs") = 800,
        py::arg("lr") = 0.5);

  py::class_<GraphContext>(m, "GraphContext");
  m.def("make_graph_context", &make_graph_context, py::arg("graph"),
        "Propagation operators for a (typically symmetrized) graph");

  py::class_<GnnModel>(m, "GnnModel")
      .def_property_readonly("variant",
                             [](const GnnModel& g) { return variant_name(g.cfg.variant); });
  m.def("train_gnn",
        [](const std::string& variant, const GraphContext& ctx, const py::array_t<double>& X,
           const std::vector<int>& labels, const std::vector<std::int32_t>& train_nodes,
           const std::vector<std::int32_t>& val_nodes, int hidden, int epochs, double lr,
           double weight_decay, double dropout, std::uint64_t seed) {
          Matrix Xm = matrix_from_numpy(X);
          GnnModel model;
          model.cfg.variant = variant_from_name(variant);
          model.cfg.in_dim = static_cast<int>(Xm.cols);
          model.cfg.hidden_dim = hidden;
          model.cfg.epochs = epochs;
          model.cfg.lr = lr;
          model.cfg.weight_decay = weight_decay;
          model.cfg.dropout = dropout;
          model.cfg.seed = seed;
          TrainCurve curve = gnn_train(model, ctx, Xm, labels, train_nodes, val_nodes);
          return py::make_tuple(model, curve.train_loss, curve.val_loss);
        },
        py::arg("variant"), py::arg("ctx"), py::arg("X"), py::arg("labels"),
        py::arg("train_nodes"), py::arg("val_nodes") = std::vector<std::int32_t>{},
        py::arg("hidden") = 32, py::arg("epochs") = 200, py::arg("lr") = 0.01,
        py::arg("weight_decay") = 5e-4, py::arg("dropout") = 0.2, py::arg("seed") = 1);
  m.def("predict_gnn",
        [](const GnnModel& model, const GraphContext& ctx, const py::array_t<double>& X) {
          Prediction p = gnn_predict(model, ctx, matrix_from_numpy(X));
          return py::make_tuple(p.label, p.prob, numpy_from_matrix(p.log_probs));
        },
        py::arg("model"), py::arg("ctx"), py::arg("X"));
  m.def("save_gnn", &save_gnn, py::arg("model"), py::arg("path"));
  m.def("load_gnn", &load_gnn, py::arg("path"));

  m.def("make_fold_plan",
        [](const std::vector<int>& labels, int k, const std::vector<int>& fractions,
           std::uint64_t seed) {
          FoldPlan plan = make_fold_plan(labels, k, fractions, seed);
          py::dict d;
          d["k"] = plan.k;
          d["fractions"] = plan.fractions;
          d["test_folds"] = plan.test_folds;
          d["train_subsets"] = plan.train_subsets;
          return d;
        },
        py::arg("labels"), py::arg("k") = 5,
        py::arg("fractions") = std::vector<int>{5, 10, 15, 20, 50, 80}, py::arg("seed") = 1);
  m.def("macro_metrics", [](const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    return metrics_dict(macro_metrics(y_true, y_pred));
  });
  m.def("neighbor_composition",
        [](const DirectedGraph& g, const std::vector<int>& hateful, std::int32_t node,
           int radius) -> py::object {
          auto r = neighbor_composition(g, hateful, node, radius);
          if (!r) return py::none();
          return py::float_(*r);
        },
        py::arg("graph"), py::arg("hateful"), py::arg("node"), py::arg("radius") = 1);
  m.def("hl_post_rate",
        [](const UserCorpus& corpus, const std::vector<std::pair<std::string, std::string>>& lexicon,
           int user) { return hl_post_rate(corpus, make_lexicon(lexicon), user); },
        py::arg("corpus"), py::arg("lexicon"), py::arg("user"));

  m.def("sticky_labels", &sticky_labels, py::arg("raw_per_month"));
  m.def("joint_target_counts",
        [](const std::vector<std::vector<std::string>>& per_user,
           const std::vector<std::string>& tracked) {
          return joint_target_counts(per_user, tracked);
        },
        py::arg("per_user_targets"),
        py::arg("tracked") = std::vector<std::string>{"Jews", "Muslims", "Blacks"});
  m.def("trending_hashtags",
        [](const std::map<std::string, std::int64_t>& cur,
           const std::map<std::string, std::int64_t>& prev, std::int64_t min_count,
           double ratio) {
          std::vector<std::pair<std::string, std::int64_t>> out;
          for (const auto& e : trending_hashtags(cur, prev, min_count, ratio))
            out.emplace_back(e.hashtag, e.count);
          return out;
        },
        py::arg("freq_current"), py::arg("freq_previous"), py::arg("min_count") = 10,
        py::arg("ratio") = 0.2);

  m.def("generate_synthetic",
        [](py::kwargs kwargs) {
          SynthConfig cfg;
          for (auto item : kwargs) {
            std::string key = py::cast<std::string>(item.first);
            if (key == "n") cfg.n = py::cast<std::int64_t>(item.second);
            else if (key == "hateful_fraction") cfg.hateful_fraction = py::cast<double>(item.second);
            else if (key == "p_in") cfg.p_in = py::cast<double>(item.second);
            else if (key == "p_out") cfg.p_out = py::cast<double>(item.second);
            else if (key == "reciprocity") cfg.reciprocity = py::cast<double>(item.second);
            else if (key == "hl_rate_hateful") cfg.hl_rate_hateful = py::cast<double>(item.second);
            else if (key == "hl_rate_normal") cfg.hl_rate_normal = py::cast<double>(item.second);
            else if (key == "posts_min") cfg.posts_min = py::cast<int>(item.second);
            else if (key == "posts_max") cfg.posts_max = py::cast<int>(item.second);
            else if (key == "months") cfg.months = py::cast<int>(item.second);
            else if (key == "seed") cfg.seed = py::cast<std::uint64_t>(item.second);
            else throw std::invalid_argument("unknown synthetic option: " + key);
          }
          SynthDataset ds = generate(cfg);
          py::dict d;
          d["graph"] = ds.graph;
          d["corpus"] = ds.corpus;
          d["labels"] = ds.labels;
          std::vector<std::pair<std::string, std::string>> lex;
          for (const auto& e : ds.lexicon.entries) lex.emplace_back(e.raw, e.community);
          d["lexicon"] = lex;
          return d;
        },
        "Planted two-block dataset: graph, posts, labels, lexicon");
  m.def("write_synthetic",
        [](const std::string& dir, py::kwargs kwargs) {
          SynthConfig cfg;
          for (auto item : kwargs) {
            std::string key = py::cast<std::string>(item.first);
            if (key == "n") cfg.n = py::cast<std::int64_t>(item.second);
            else if (key == "months") cfg.months = py::cast<int>(item.second);
            else if (key == "seed") cfg.seed = py::cast<std::uint64_t>(item.second);
          }
          write_dataset(generate(cfg), dir);
        },
        py::arg("dir"));
}
