#include "hategraph/doc2vec.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "hategraph/io.hpp"
#include "hategraph/sgns.hpp"

namespace hategraph {

AliasTable Doc2vecModel::noise_table() const { return make_noise_table(counts); }

Doc2vecModel train_doc2vec(const std::vector<UserDocument>& documents,
                           const Doc2vecConfig& cfg) {
  if (documents.size() < 2) throw std::invalid_argument("need at least 2 documents");
  Doc2vecModel model;
  model.cfg = cfg;

  std::map<std::string, std::int64_t> freq;
  for (const auto& d : documents)
    for (const auto& t : d.tokens) freq[t]++;
  for (const auto& [w, c] : freq) {
    if (c >= cfg.min_count) {
      model.word_index.emplace(w, static_cast<std::int32_t>(model.vocab.size()));
      model.vocab.push_back(w);
      model.counts.push_back(c);
    }
  }
  if (model.vocab.empty())
    throw std::invalid_argument("vocabulary empty after min_count filtering");

  const std::int64_t n_docs = static_cast<std::int64_t>(documents.size());
  std::vector<std::vector<std::int32_t>> doc_words(n_docs);
  std::int64_t total_positions = 0;
  for (std::int64_t d = 0; d < n_docs; ++d) {
    model.doc_keys.push_back(documents[d].user);
    for (const auto& t : documents[d].tokens) {
      auto it = model.word_index.find(t);
      if (it != model.word_index.end()) doc_words[d].push_back(it->second);
    }
    total_positions += static_cast<std::int64_t>(doc_words[d].size());
  }

  model.doc_vectors = Matrix(n_docs, cfg.dim);
  model.word_out = Matrix(static_cast<std::int64_t>(model.vocab.size()), cfg.dim);
  Rng init_rng(substream(cfg.seed, "doc2vec-init"));
  double span = 0.5 / cfg.dim;
  for (double& v : model.doc_vectors.a) v = init_rng.uniform(-span, span);

  AliasTable noise = model.noise_table();
  Rng rng(substream(cfg.seed, "doc2vec-train"));
  std::vector<double> grad_buf(cfg.dim);
  std::vector<std::int32_t> negs;
  const double total_steps =
      static_cast<double>(std::max<std::int64_t>(1, total_positions) * cfg.epochs);
  std::int64_t step = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double loss_sum = 0.0;
    for (std::int64_t d = 0; d < n_docs; ++d) {
      double* dv = model.doc_vectors.row(d);
      for (std::int32_t w : doc_words[d]) {
        double lr = cfg.alpha + (cfg.min_alpha - cfg.alpha) * (step / total_steps);
        draw_negatives(noise, rng, w, cfg.negative, negs);
        loss_sum += sgns_step(dv, cfg.dim, model.word_out, w, negs, lr, grad_buf);
        ++step;
      }
    }
    model.epoch_loss.push_back(total_positions > 0 ? loss_sum / total_positions : 0.0);
  }
  return model;
}

InferResult infer_doc_vector(const Doc2vecModel& model,
                             const std::vector<std::string>& tokens,
                             std::uint64_t seed) {
  const int dim = model.cfg.dim;
  std::vector<std::int32_t> words;
  for (const auto& t : tokens) {
    auto it = model.word_index.find(t);
    if (it != model.word_index.end()) words.push_back(it->second);
  }
  InferResult res;
  res.vec.assign(dim, 0.0);
  if (words.empty()) {
    res.all_oov = true;
    std::fprintf(stderr, "warning: document has no in-vocabulary tokens; zero vector\n");
    return res;
  }
  Rng rng(substream(seed, "doc2vec-infer"));
  double span = 0.5 / dim;
  for (double& v : res.vec) v = rng.uniform(-span, span);

  AliasTable noise = model.noise_table();
  Matrix frozen_out = model.word_out;  // rows are never updated during inference
  std::vector<double> grad_buf(dim);
  std::vector<std::int32_t> negs;
  const double total_steps =
      static_cast<double>(words.size()) * model.cfg.infer_epochs;
  std::int64_t step = 0;
  for (int epoch = 0; epoch < model.cfg.infer_epochs; ++epoch) {
    for (std::int32_t w : words) {
      double lr = model.cfg.alpha +
                  (model.cfg.min_alpha - model.cfg.alpha) * (step / total_steps);
      draw_negatives(noise, rng, w, model.cfg.negative, negs);
      sgns_step(res.vec.data(), dim, frozen_out, w, negs, lr, grad_buf,
                /*update_out=*/false);
      ++step;
    }
  }
  return res;
}

namespace {

constexpr char kMagic[6] = {'H', 'G', 'E', 'M', 'B', '1'};

void write_f32_matrix(BinWriter& w, const Matrix& m) {
  w.u64(static_cast<std::uint64_t>(m.rows));
  w.u64(static_cast<std::uint64_t>(m.cols));
  for (double v : m.a) w.f32(static_cast<float>(v));
}

Matrix read_f32_matrix(BinReader& r) {
  std::int64_t rows = static_cast<std::int64_t>(r.u64());
  std::int64_t cols = static_cast<std::int64_t>(r.u64());
  Matrix m(rows, cols);
  for (double& v : m.a) v = static_cast<double>(r.f32());
  return m;
}

void check_magic(BinReader& r, const std::string& path) {
  char got[6];
  r.bytes(got, 6);
  for (int i = 0; i < 6; ++i)
    if (got[i] != kMagic[i]) throw std::runtime_error("not an embedding container: " + path);
}

}  // namespace

void save_doc2vec(const Doc2vecModel& model, const std::string& path) {
  BinWriter w(path);
  w.bytes(kMagic, 6);
  w.u8(1);  // kind: paragraph-vector model
  w.u32(static_cast<std::uint32_t>(model.cfg.dim));
  w.u64(model.vocab.size());
  nlohmann::json j;
  j["dim"] = model.cfg.dim;
  j["negative"] = model.cfg.negative;
  j["epochs"] = model.cfg.epochs;
  j["min_count"] = model.cfg.min_count;
  j["infer_epochs"] = model.cfg.infer_epochs;
  j["alpha"] = model.cfg.alpha;
  j["min_alpha"] = model.cfg.min_alpha;
  j["seed"] = model.cfg.seed;
  w.str(j.dump());
  for (std::size_t i = 0; i < model.vocab.size(); ++i) {
    w.str(model.vocab[i]);
    w.u64(static_cast<std::uint64_t>(model.counts[i]));
  }
  w.u64(model.doc_keys.size());
  for (const auto& k : model.doc_keys) w.str(k);
  write_f32_matrix(w, model.doc_vectors);
  write_f32_matrix(w, model.word_out);
}

Doc2vecModel load_doc2vec(const std::string& path) {
  BinReader r(path);
  check_magic(r, path);
  if (r.u8() != 1) throw std::runtime_error("not a paragraph-vector container: " + path);
  Doc2vecModel model;
  std::uint32_t dim = r.u32();
  std::uint64_t vocab_size = r.u64();
  nlohmann::json j = nlohmann::json::parse(r.str());
  model.cfg.dim = j["dim"].get<int>();
  model.cfg.negative = j["negative"].get<int>();
  model.cfg.epochs = j["epochs"].get<int>();
  model.cfg.min_count = j["min_count"].get<int>();
  model.cfg.infer_epochs = j["infer_epochs"].get<int>();
  model.cfg.alpha = j["alpha"].get<double>();
  model.cfg.min_alpha = j["min_alpha"].get<double>();
  model.cfg.seed = j["seed"].get<std::uint64_t>();
  if (model.cfg.dim != static_cast<int>(dim))
    throw std::runtime_error("dim mismatch in container: " + path);
  for (std::uint64_t i = 0; i < vocab_size; ++i) {
    std::string word = r.str();
    std::int64_t count = static_cast<std::int64_t>(r.u64());
    model.word_index.emplace(word, static_cast<std::int32_t>(model.vocab.size()));
    model.vocab.push_back(std::move(word));
    model.counts.push_back(count);
  }
  std::uint64_t n_docs = r.u64();
  for (std::uint64_t i = 0; i < n_docs; ++i) model.doc_keys.push_back(r.str());
  model.doc_vectors = read_f32_matrix(r);
  model.word_out = read_f32_matrix(r);
  return model;
}

void save_embedding_matrix(const EmbeddingMatrixFile& emb, const std::string& path) {
  BinWriter w(path);
  w.bytes(kMagic, 6);
  w.u8(0);  // kind: plain row-keyed matrix
  w.u32(static_cast<std::uint32_t>(emb.dim));
  w.u64(emb.keys.size());
  for (const auto& k : emb.keys) w.str(k);
  write_f32_matrix(w, emb.rows);
}

EmbeddingMatrixFile load_embedding_matrix(const std::string& path) {
  BinReader r(path);
  check_magic(r, path);
  if (r.u8() != 0) throw std::runtime_error("not a plain embedding container: " + path);
  EmbeddingMatrixFile emb;
  emb.dim = static_cast<int>(r.u32());
  std::uint64_t n = r.u64();
  for (std::uint64_t i = 0; i < n; ++i) emb.keys.push_back(r.str());
  emb.rows = read_f32_matrix(r);
  return emb;
}

}  // namespace hategraph
