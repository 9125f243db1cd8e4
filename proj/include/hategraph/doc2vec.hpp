#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "hategraph/matrix.hpp"
#include "hategraph/rng.hpp"
#include "hategraph/text.hpp"

namespace hategraph {

struct Doc2vecConfig {
  int dim = 100;
  int negative = 5;
  int epochs = 10;
  int min_count = 2;
  int infer_epochs = 50;
  double alpha = 0.025;
  double min_alpha = 1e-4;
  std::uint64_t seed = 1;
};

// Distributed bag-of-words paragraph vectors: each document vector is trained
// to predict the words it contains under the SGNS objective.
struct Doc2vecModel {
  Doc2vecConfig cfg;
  std::vector<std::string> vocab;       // sorted
  std::vector<std::int64_t> counts;     // aligned with vocab
  std::unordered_map<std::string, std::int32_t> word_index;
  std::vector<std::string> doc_keys;    // document order used in training
  Matrix doc_vectors;                   // docs x dim
  Matrix word_out;                      // vocab x dim (output/context matrix)
  std::vector<double> epoch_loss;       // mean step loss per epoch

  AliasTable noise_table() const;
};

Doc2vecModel train_doc2vec(const std::vector<UserDocument>& documents,
                           const Doc2vecConfig& cfg);

struct InferResult {
  std::vector<double> vec;
  bool all_oov = false;
};

// New document vector trained by SGD against the frozen output matrix.
InferResult infer_doc_vector(const Doc2vecModel& model,
                             const std::vector<std::string>& tokens,
                             std::uint64_t seed = 1);

void save_doc2vec(const Doc2vecModel& model, const std::string& path);
Doc2vecModel load_doc2vec(const std::string& path);

// Generic embedding container for row-keyed float matrices.
struct EmbeddingMatrixFile {
  int dim = 0;
  std::vector<std::string> keys;
  Matrix rows;
};

void save_embedding_matrix(const EmbeddingMatrixFile& emb, const std::string& path);
EmbeddingMatrixFile load_embedding_matrix(const std::string& path);

}  // namespace hategraph
