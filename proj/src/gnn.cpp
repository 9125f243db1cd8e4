#include "hategraph/gnn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "hategraph/io.hpp"
#include "hategraph/rng.hpp"

namespace hategraph {

std::string variant_name(GnnVariant v) {
  switch (v) {
    case GnnVariant::Gcn: return "gcn";
    case GnnVariant::Cheb: return "cheb";
    case GnnVariant::SageMean: return "sage";
    case GnnVariant::Agnn: return "agnn";
    case GnnVariant::Gat: return "gat";
  }
  return "gcn";
}

GnnVariant variant_from_name(const std::string& name) {
  if (name == "gcn") return GnnVariant::Gcn;
  if (name == "cheb") return GnnVariant::Cheb;
  if (name == "sage") return GnnVariant::SageMean;
  if (name == "agnn") return GnnVariant::Agnn;
  if (name == "gat") return GnnVariant::Gat;
  throw std::invalid_argument("unknown model variant: " + name);
}

namespace {

Matrix glorot(std::int64_t rows, std::int64_t cols, Rng& rng) {
  Matrix m(rows, cols);
  double span = std::sqrt(6.0 / static_cast<double>(rows + cols));
  for (double& v : m.a) v = rng.uniform(-span, span);
  return m;
}

}  // namespace

void GnnModel::init_params() {
  params.clear();
  adam_m.clear();
  adam_v.clear();
  adam_t = 0;
  Rng rng(substream(cfg.seed, "gnn-init"));
  auto put = [&](const std::string& name, std::int64_t r, std::int64_t c) {
    params[name] = glorot(r, c, rng);
  };
  const int di = cfg.in_dim, dh = cfg.hidden_dim, dz = cfg.out_dim;
  switch (cfg.variant) {
    case GnnVariant::Gcn:
      put("conv1.W", di, dh);
      put("conv2.W", dh, dz);
      break;
    case GnnVariant::Cheb:
      for (int k = 0; k < cfg.cheb_k; ++k) put("conv1.W" + std::to_string(k), di, dh);
      for (int k = 0; k < cfg.cheb_k; ++k) put("conv2.W" + std::to_string(k), dh, dz);
      break;
    case GnnVariant::SageMean:
      put("conv1.Wself", di, dh);
      put("conv1.Wneigh", di, dh);
      put("conv2.Wself", dh, dz);
      put("conv2.Wneigh", dh, dz);
      break;
    case GnnVariant::Agnn: {
      put("conv1.W", di, dh);
      for (int h = 0; h < cfg.agnn_hops; ++h) {
        Matrix beta(1, 1);
        beta(0, 0) = 1.0;
        params["prop" + std::to_string(h) + ".beta"] = beta;
      }
      put("conv2.W", dh, dz);
      break;
    }
    case GnnVariant::Gat:
      for (int h = 0; h < cfg.gat_heads; ++h) {
        std::string p1 = "conv1.h" + std::to_string(h) + ".";
        put(p1 + "W", di, dh);
        put(p1 + "asrc", dh, 1);
        put(p1 + "adst", dh, 1);
        std::string p2 = "conv2.h" + std::to_string(h) + ".";
        put(p2 + "W", dh, dz);
        put(p2 + "asrc", dz, 1);
        put(p2 + "adst", dz, 1);
      }
      break;
  }
  for (const auto& [name, m] : params) {
    adam_m[name] = Matrix(m.rows, m.cols);
    adam_v[name] = Matrix(m.rows, m.cols);
  }
}

GraphContext make_graph_context(const DirectedGraph& g) {
  GraphContext ctx;
  ctx.n = g.num_nodes();
  ctx.gcn = normalize(g, NormKind::SymmetricGcn);
  ctx.lap = normalize(g, NormKind::ScaledLaplacian);
  ctx.loops = make_edge_structure(g.adj, /*add_self_loops=*/true);
  ctx.neighbors = g.adj;
  for (double& v : ctx.neighbors.val) v = 1.0;  // structure only
  ctx.neighbors_t = csr_transpose(ctx.neighbors);
  return ctx;
}

Csr sampled_mean_adjacency(const Csr& neighbors, int sample_size, std::uint64_t seed,
                           std::int64_t epoch) {
  Csr out;
  out.nrows = neighbors.nrows;
  out.ncols = neighbors.ncols;
  out.offsets.assign(neighbors.nrows + 1, 0);
  std::uint64_t base = mix_seed(substream(seed, "sage-sample"),
                                static_cast<std::uint64_t>(epoch));
  for (std::int64_t i = 0; i < neighbors.nrows; ++i) {
    std::int64_t lo = neighbors.offsets[i], hi = neighbors.offsets[i + 1];
    std::int64_t deg = hi - lo;
    std::vector<std::int32_t> chosen;
    if (deg > 0) {
      if (sample_size <= 0 || deg <= sample_size) {
        chosen.assign(neighbors.col.begin() + lo, neighbors.col.begin() + hi);
      } else {
        std::vector<std::int32_t> pool(neighbors.col.begin() + lo,
                                       neighbors.col.begin() + hi);
        Rng rng(mix_seed(base, static_cast<std::uint64_t>(i)));
        for (int s = 0; s < sample_size; ++s) {
          std::int64_t j = s + static_cast<std::int64_t>(rng.below(pool.size() - s));
          std::swap(pool[s], pool[j]);
        }
        chosen.assign(pool.begin(), pool.begin() + sample_size);
        std::sort(chosen.begin(), chosen.end());
      }
    }
    double w = chosen.empty() ? 0.0 : 1.0 / static_cast<double>(chosen.size());
    for (std::int32_t c : chosen) {
      out.col.push_back(c);
      out.val.push_back(w);
    }
    out.offsets[i + 1] = static_cast<std::int64_t>(out.col.size());
  }
  return out;
}

Matrix gcn_layer(const NormalizedAdjacency& adj, const Matrix& H, const Matrix& W) {
  if (adj.kind != NormKind::SymmetricGcn)
    throw std::invalid_argument("gcn_layer needs a symmetric-gcn operator");
  return spmm(adj.m, matmul(H, W));
}

Matrix cheb_layer(const NormalizedAdjacency& lap, const Matrix& H,
                  const std::vector<Matrix>& Wk) {
  if (lap.kind != NormKind::ScaledLaplacian)
    throw std::invalid_argument("cheb_layer needs a scaled-laplacian operator");
  if (Wk.empty()) throw std::invalid_argument("cheb_layer needs K >= 1");
  Matrix acc = matmul(H, Wk[0]);  // T_0 = I
  Matrix t_prev2 = H;
  Matrix t_prev = H;
  for (std::size_t k = 1; k < Wk.size(); ++k) {
    Matrix t_cur = spmm(lap.m, t_prev);
    if (k > 1) {
      scale_inplace(t_cur, 2.0);
      for (std::size_t i = 0; i < t_cur.a.size(); ++i) t_cur.a[i] -= t_prev2.a[i];
    }
    add_inplace(acc, matmul(t_cur, Wk[k]));
    t_prev2 = t_prev;
    t_prev = t_cur;
  }
  return acc;
}

Matrix sage_mean_layer(const Csr& mean_adj, const Matrix& H, const Matrix& Wself,
                       const Matrix& Wneigh) {
  Matrix out = matmul(H, Wself);
  add_inplace(out, spmm(mean_adj, matmul(H, Wneigh)));
  return out;
}

namespace {

// Shared AGNN/GAT tape builders; the plain entry points wrap a local tape.

int agnn_layer_tape(Tape& t, const EdgeStructure* es, int H, int beta) {
  int cos = t.edge_cosine(H, es);
  int scores = t.scalar_mul(cos, beta);
  int alpha = t.segment_softmax(scores, es);
  return t.edge_aggregate(alpha, H, es);
}

int gat_head_tape(Tape& t, const EdgeStructure* es, int H, int W, int asrc, int adst,
                  double slope) {
  int HW = t.matmul(H, W);
  int sl = t.matmul(HW, asrc);
  int sr = t.matmul(HW, adst);
  int e_src = t.gather_rows(sl, &es->row);
  int e_dst = t.gather_rows(sr, &es->col);
  int e = t.leaky_relu(t.add(e_src, e_dst), slope);
  int alpha = t.segment_softmax(e, es);
  return t.edge_aggregate(alpha, HW, es);
}

}  // namespace

Matrix agnn_layer(const EdgeStructure& loops, const Matrix& H, double beta) {
  Tape t;
  int h = t.leaf(H);
  Matrix b(1, 1);
  b(0, 0) = beta;
  int out = agnn_layer_tape(t, &loops, h, t.leaf(std::move(b)));
  return t.val(out);
}

Matrix agnn_attention(const EdgeStructure& loops, const Matrix& H, double beta) {
  Tape t;
  int h = t.leaf(H);
  Matrix b(1, 1);
  b(0, 0) = beta;
  int alpha = t.segment_softmax(t.scalar_mul(t.edge_cosine(h, &loops), t.leaf(std::move(b))), &loops);
  Matrix dense(loops.n, loops.n);
  const Matrix& a = t.val(alpha);
  for (std::int64_t k = 0; k < loops.num_edges(); ++k)
    dense(loops.row[k], loops.col[k]) = a(k, 0);
  return dense;
}

Matrix gat_layer(const EdgeStructure& loops, const Matrix& H, const Matrix& W,
                 const Matrix& a_src, const Matrix& a_dst, double leaky_slope) {
  Tape t;
  int out = gat_head_tape(t, &loops, t.leaf(H), t.leaf(W), t.leaf(a_src),
                          t.leaf(a_dst), leaky_slope);
  return t.val(out);
}

GnnForward gnn_forward_tape(Tape& tape, const GnnModel& model, const GraphContext& ctx,
                            const Matrix& X, bool training, Rng* dropout_rng,
                            std::int64_t epoch, const SageOperator* sage_epoch_adj) {
  const GnnConfig& cfg = model.cfg;
  (void)epoch;
  if (X.rows != ctx.n) throw std::invalid_argument("feature row count mismatch");
  if (X.cols != cfg.in_dim) throw std::invalid_argument("feature dimension mismatch");

  GnnForward fw;
  int x = tape.leaf(X);
  auto param = [&](const std::string& name) {
    auto it = model.params.find(name);
    if (it == model.params.end()) throw std::logic_error("missing parameter " + name);
    int id = tape.leaf(it->second, /*needs_grad=*/true);
    fw.param_nodes[name] = id;
    return id;
  };
  auto maybe_dropout = [&](int h) {
    if (training && cfg.dropout > 0.0) {
      if (!dropout_rng) throw std::logic_error("training forward needs a dropout rng");
      return tape.dropout(h, cfg.dropout, *dropout_rng);
    }
    return h;
  };

  int z = -1;
  switch (cfg.variant) {
    case GnnVariant::Gcn: {
      int h1 = tape.spmm(&ctx.gcn.m, &ctx.gcn.mt, tape.matmul(x, param("conv1.W")));
      int d = maybe_dropout(tape.relu(h1));
      z = tape.spmm(&ctx.gcn.m, &ctx.gcn.mt, tape.matmul(d, param("conv2.W")));
      break;
    }
    case GnnVariant::Cheb: {
      auto cheb = [&](int H, const std::string& prefix) {
        int acc = tape.matmul(H, param(prefix + "W0"));
        int t_prev2 = H, t_prev = H;
        for (int k = 1; k < cfg.cheb_k; ++k) {
          int t_cur = tape.spmm(&ctx.lap.m, &ctx.lap.mt, t_prev);
          if (k > 1) t_cur = tape.sub(tape.scale(t_cur, 2.0), t_prev2);
          acc = tape.add(acc, tape.matmul(t_cur, param(prefix + "W" + std::to_string(k))));
          t_prev2 = t_prev;
          t_prev = t_cur;
        }
        return acc;
      };
      int d = maybe_dropout(tape.relu(cheb(x, "conv1.")));
      z = cheb(d, "conv2.");
      break;
    }
    case GnnVariant::SageMean: {
      if (!sage_epoch_adj)
        throw std::logic_error("sage forward needs a mean-aggregation operator");
      const Csr* mean = &sage_epoch_adj->mean;
      const Csr* mean_t = &sage_epoch_adj->mean_t;
      int h1 = tape.add(
          tape.matmul(x, param("conv1.Wself")),
          tape.spmm(mean, mean_t, tape.matmul(x, param("conv1.Wneigh"))));
      int d = maybe_dropout(tape.relu(h1));
      z = tape.add(
          tape.matmul(d, param("conv2.Wself")),
          tape.spmm(mean, mean_t, tape.matmul(d, param("conv2.Wneigh"))));
      break;
    }
    case GnnVariant::Agnn: {
      int h = maybe_dropout(tape.relu(tape.matmul(x, param("conv1.W"))));
      for (int hop = 0; hop < cfg.agnn_hops; ++hop)
        h = agnn_layer_tape(tape, &ctx.loops, h,
                            param("prop" + std::to_string(hop) + ".beta"));
      z = tape.matmul(h, param("conv2.W"));
      break;
    }
    case GnnVariant::Gat: {
      auto layer = [&](int H, const std::string& prefix) {
        int acc = -1;
        for (int h = 0; h < cfg.gat_heads; ++h) {
          std::string p = prefix + "h" + std::to_string(h) + ".";
          int out = gat_head_tape(tape, &ctx.loops, H, param(p + "W"),
                                  param(p + "asrc"), param(p + "adst"),
                                  cfg.gat_leaky_slope);
          acc = acc < 0 ? out : tape.add(acc, out);
        }
        return cfg.gat_heads > 1 ? tape.scale(acc, 1.0 / cfg.gat_heads) : acc;
      };
      int d = maybe_dropout(tape.relu(layer(x, "conv1.")));
      z = layer(d, "conv2.");
      break;
    }
  }
  fw.logp = tape.log_softmax_rows(z);
  return fw;
}

SageOperator make_sage_operator(const GraphContext& ctx, int sample_size,
                                std::uint64_t seed, std::int64_t epoch) {
  SageOperator op;
  op.mean = sampled_mean_adjacency(ctx.neighbors, sample_size, seed, epoch);
  op.mean_t = csr_transpose(op.mean);
  return op;
}

Matrix gnn_forward(const GnnModel& model, const GraphContext& ctx, const Matrix& X,
                   bool training, Rng* dropout_rng, std::int64_t epoch) {
  SageOperator sage;
  const SageOperator* sage_ptr = nullptr;
  if (model.cfg.variant == GnnVariant::SageMean) {
    // inference aggregates over full neighborhoods
    sage = make_sage_operator(ctx, 0, model.cfg.seed, epoch);
    sage_ptr = &sage;
  }
  Tape tape;
  GnnForward fw = gnn_forward_tape(tape, model, ctx, X, training, dropout_rng, epoch,
                                   sage_ptr);
  return tape.val(fw.logp);
}

void adam_step(Matrix& param, const Matrix& grad, Matrix& m, Matrix& v,
               std::int64_t t, double lr, double weight_decay) {
  constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  double bc1 = 1.0 - std::pow(b1, static_cast<double>(t));
  double bc2 = 1.0 - std::pow(b2, static_cast<double>(t));
  for (std::size_t i = 0; i < param.a.size(); ++i) {
    double g = grad.a[i] + weight_decay * param.a[i];
    m.a[i] = b1 * m.a[i] + (1.0 - b1) * g;
    v.a[i] = b2 * v.a[i] + (1.0 - b2) * g * g;
    double mhat = m.a[i] / bc1;
    double vhat = v.a[i] / bc2;
    param.a[i] -= lr * mhat / (std::sqrt(vhat) + eps);
  }
}

TrainCurve gnn_train(GnnModel& model, const GraphContext& ctx, const Matrix& X,
                     const std::vector<int>& labels,
                     const std::vector<std::int32_t>& train_nodes,
                     const std::vector<std::int32_t>& val_nodes) {
  if (train_nodes.empty()) throw std::invalid_argument("empty train mask");
  for (std::int32_t i : train_nodes)
    for (std::int32_t j : val_nodes)
      if (i == j) throw std::invalid_argument("train and validation masks overlap");
  if (model.params.empty()) model.init_params();

  bool all_same = true;
  for (std::size_t i = 1; i < train_nodes.size(); ++i)
    if (labels[train_nodes[i]] != labels[train_nodes[0]]) all_same = false;
  if (all_same)
    std::fprintf(stderr, "warning: training labels are single-class; proceeding\n");

  Rng dropout_rng(substream(model.cfg.seed, "gnn-dropout"));
  TrainCurve curve;
  double best_val = std::numeric_limits<double>::infinity();
  std::map<std::string, Matrix> best_params;

  for (int epoch = 0; epoch < model.cfg.epochs; ++epoch) {
    SageOperator sage_adj;
    const SageOperator* sage_ptr = nullptr;
    if (model.cfg.variant == GnnVariant::SageMean) {
      sage_adj = make_sage_operator(ctx, model.cfg.sage_sample, model.cfg.seed, epoch);
      sage_ptr = &sage_adj;
    }
    {
      Tape tape;
      GnnForward fw = gnn_forward_tape(tape, model, ctx, X, /*training=*/true,
                                       &dropout_rng, epoch, sage_ptr);
      int loss = tape.nll_masked(fw.logp, labels, train_nodes);
      curve.train_loss.push_back(tape.val(loss)(0, 0));
      tape.backward(loss);
      model.adam_t++;
      for (auto& [name, p] : model.params) {
        adam_step(p, tape.grad(fw.param_nodes[name]), model.adam_m[name],
                  model.adam_v[name], model.adam_t, model.cfg.lr,
                  model.cfg.weight_decay);
      }
    }
    if (!val_nodes.empty()) {
      Matrix logp = gnn_forward(model, ctx, X, /*training=*/false);
      double vloss = 0.0;
      for (std::int32_t i : val_nodes) vloss -= logp(i, labels[i]);
      vloss /= static_cast<double>(val_nodes.size());
      curve.val_loss.push_back(vloss);
      if (vloss < best_val) {
        best_val = vloss;
        best_params = model.params;
        curve.best_epoch = epoch;
      }
    }
  }
  if (!val_nodes.empty() && !best_params.empty()) model.params = std::move(best_params);
  return curve;
}

Prediction gnn_predict(const GnnModel& model, const GraphContext& ctx, const Matrix& X) {
  Prediction pred;
  pred.log_probs = gnn_forward(model, ctx, X, /*training=*/false);
  pred.label.resize(pred.log_probs.rows);
  pred.prob.resize(pred.log_probs.rows);
  for (std::int64_t i = 0; i < pred.log_probs.rows; ++i) {
    const double* r = pred.log_probs.row(i);
    int best = 0;
    for (std::int64_t j = 1; j < pred.log_probs.cols; ++j)
      if (r[j] > r[best]) best = static_cast<int>(j);
    pred.label[i] = best;
    pred.prob[i] = std::exp(r[best]);
  }
  return pred;
}

namespace {
constexpr char kGnnMagic[6] = {'H', 'G', 'G', 'N', 'N', '1'};
}

void save_gnn(const GnnModel& model, const std::string& path) {
  BinWriter w(path);
  w.bytes(kGnnMagic, 6);
  nlohmann::json j;
  j["variant"] = variant_name(model.cfg.variant);
  j["in_dim"] = model.cfg.in_dim;
  j["hidden_dim"] = model.cfg.hidden_dim;
  j["out_dim"] = model.cfg.out_dim;
  j["cheb_k"] = model.cfg.cheb_k;
  j["agnn_hops"] = model.cfg.agnn_hops;
  j["gat_heads"] = model.cfg.gat_heads;
  j["gat_leaky_slope"] = model.cfg.gat_leaky_slope;
  j["sage_sample"] = model.cfg.sage_sample;
  j["epochs"] = model.cfg.epochs;
  j["lr"] = model.cfg.lr;
  j["weight_decay"] = model.cfg.weight_decay;
  j["dropout"] = model.cfg.dropout;
  j["seed"] = model.cfg.seed;
  w.str(j.dump());
  w.u32(static_cast<std::uint32_t>(model.params.size()));
  for (const auto& [name, m] : model.params) {
    w.str(name);
    w.u64(static_cast<std::uint64_t>(m.rows));
    w.u64(static_cast<std::uint64_t>(m.cols));
    for (double v : m.a) w.f64(v);
  }
}

GnnModel load_gnn(const std::string& path) {
  BinReader r(path);
  char got[6];
  r.bytes(got, 6);
  for (int i = 0; i < 6; ++i)
    if (got[i] != kGnnMagic[i]) throw std::runtime_error("not a model checkpoint: " + path);
  nlohmann::json j = nlohmann::json::parse(r.str());
  GnnModel model;
  model.cfg.variant = variant_from_name(j["variant"].get<std::string>());
  model.cfg.in_dim = j["in_dim"].get<int>();
  model.cfg.hidden_dim = j["hidden_dim"].get<int>();
  model.cfg.out_dim = j["out_dim"].get<int>();
  model.cfg.cheb_k = j["cheb_k"].get<int>();
  if (j.contains("agnn_hops")) model.cfg.agnn_hops = j["agnn_hops"].get<int>();
  model.cfg.gat_heads = j["gat_heads"].get<int>();
  model.cfg.gat_leaky_slope = j["gat_leaky_slope"].get<double>();
  model.cfg.sage_sample = j["sage_sample"].get<int>();
  model.cfg.epochs = j["epochs"].get<int>();
  model.cfg.lr = j["lr"].get<double>();
  model.cfg.weight_decay = j["weight_decay"].get<double>();
  model.cfg.dropout = j["dropout"].get<double>();
  model.cfg.seed = j["seed"].get<std::uint64_t>();
  std::uint32_t n = r.u32();
  for (std::uint32_t i = 0; i < n; ++i) {
    std::string name = r.str();
    std::int64_t rows = static_cast<std::int64_t>(r.u64());
    std::int64_t cols = static_cast<std::int64_t>(r.u64());
    Matrix m(rows, cols);
    for (double& v : m.a) v = r.f64();
    model.params[name] = std::move(m);
  }
  for (const auto& [name, m] : model.params) {
    model.adam_m[name] = Matrix(m.rows, m.cols);
    model.adam_v[name] = Matrix(m.rows, m.cols);
  }
  return model;
}

void save_loss_curve_csv(const TrainCurve& curve, const std::string& path) {
  std::string out = "epoch,train_loss,val_loss\n";
  for (std::size_t e = 0; e < curve.train_loss.size(); ++e) {
    out += std::to_string(e) + "," + format_double(curve.train_loss[e]) + ",";
    out += e < curve.val_loss.size() ? format_double(curve.val_loss[e]) : "";
    out += "\n";
  }
  write_file(path, out);
}

}  // namespace hategraph
